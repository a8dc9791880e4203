use super::{dot, norm1};
use crate::error::{Error, Result};

/// Step-length denominators below this magnitude abort the iteration.
const BREAKDOWN_EPS: f64 = 1e-300;

#[derive(Debug, Clone, Copy)]
pub(crate) struct IterOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub check_every: usize,
    pub deterministic: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub history: Vec<f64>,
    pub converged: bool,
}

pub(crate) fn true_residual<A>(apply_a: &mut A, b: &[f64], x: &[f64], out: &mut [f64]) -> Result<()>
where
    A: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    apply_a(x, out)?;
    out.iter_mut().zip(b).for_each(|(o, bi)| *o = bi - *o);
    Ok(())
}

/// (Preconditioned) conjugate gradients for an SPD operator.
///
/// `precond`, when given, applies the preconditioner itself (not its inverse).
/// Stopping is decided on true residuals: every `check_every` iterations, and
/// additionally whenever the recursive residual claims convergence.
pub(crate) fn pcg<A, P>(
    method: &'static str,
    mut apply_a: A,
    mut precond: Option<P>,
    b: &[f64],
    x0: Option<Vec<f64>>,
    opts: &IterOptions,
) -> Result<Outcome>
where
    A: FnMut(&[f64], &mut [f64]) -> Result<()>,
    P: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    let n = b.len();
    let det = opts.deterministic;
    let mut scratch = vec![0.0; n];

    let (mut x, mut r) = match x0 {
        Some(x) => {
            let mut r = vec![0.0; n];
            true_residual(&mut apply_a, b, &x, &mut r)?;
            (x, r)
        }
        None => (vec![0.0; n], b.to_vec()),
    };
    let mut history = vec![norm1(&r)];
    if history[0] < opts.tol {
        return Ok(Outcome { solution: x, iterations: 0, history, converged: true });
    }

    let mut z = vec![0.0; n];
    let mut apply_precond = |r: &[f64], z: &mut Vec<f64>| -> Result<()> {
        match precond.as_mut() {
            Some(m) => m(r, z),
            None => {
                z.copy_from_slice(r);
                Ok(())
            }
        }
    };
    apply_precond(&r, &mut z)?;
    let mut rz = dot(&r, &z, det);
    if !(rz > 0.0) {
        return Err(Error::Breakdown {
            method,
            iteration: 0,
            reason: format!("<r, Mr> = {rz:e} is not positive"),
        });
    }
    let mut p = z.clone();
    let mut q = vec![0.0; n];

    for k in 1..=opts.max_iter {
        apply_a(&p, &mut q)?;
        let pq = dot(&p, &q, det);
        if pq.abs() < BREAKDOWN_EPS {
            return Err(Error::Breakdown {
                method,
                iteration: k,
                reason: format!("<p, Ap> = {pq:e}"),
            });
        }
        let step = rz / pq;
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += step * pi);
        r.iter_mut().zip(&q).for_each(|(ri, qi)| *ri -= step * qi);

        let mut res = if k % opts.check_every == 0 {
            true_residual(&mut apply_a, b, &x, &mut scratch)?;
            norm1(&scratch)
        } else {
            norm1(&r)
        };
        if res < opts.tol && k % opts.check_every != 0 {
            true_residual(&mut apply_a, b, &x, &mut scratch)?;
            res = norm1(&scratch);
        }
        history.push(res);
        if res < opts.tol {
            return Ok(Outcome { solution: x, iterations: k, history, converged: true });
        }

        apply_precond(&r, &mut z)?;
        let rz_next = dot(&r, &z, det);
        if !(rz_next > 0.0) {
            return Err(Error::Breakdown {
                method,
                iteration: k,
                reason: format!("<r, Mr> = {rz_next:e} is not positive"),
            });
        }
        let beta = rz_next / rz;
        rz = rz_next;
        p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }

    let iterations = opts.max_iter;
    Ok(Outcome { solution: x, iterations, history, converged: false })
}
