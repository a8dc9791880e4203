use super::krylov::{true_residual, IterOptions, Outcome};
use super::norm1;
use crate::error::{Error, Result};

/// Interval `[lo, hi]` assumed to contain the spectrum of `M⁻¹A`, with `0 < lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevInterval {
    lo: f64,
    hi: f64,
}

impl ChebyshevInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Chebyshev interval [{lo}, {hi}] must satisfy 0 < lo < hi"
            )));
        }
        Ok(ChebyshevInterval { lo, hi })
    }

    /// Relaxation `2 / (lo + hi)` that centers the interval on 1.
    fn gamma(self) -> f64 {
        2.0 / (self.lo + self.hi)
    }

    /// Spectral radius bound of the relaxed iteration matrix `I − γM⁻¹A`.
    fn rho(self) -> f64 {
        (self.hi - self.lo) / (self.hi + self.lo)
    }
}

/// Chebyshev semi-iteration for `Ax = b` over the splitting preconditioner `M`.
///
/// Three-term form with `ρ` the spectral radius bound of `I − γM⁻¹A`:
///
/// ```text
/// x₁     = x₀ + γ M⁻¹ r₀
/// x_{k+1} = x_{k−1} + ω_{k+1} (γ M⁻¹ r_k + x_k − x_{k−1})
/// ω₂ = 1 / (1 − ρ²/2),   ω_{k+1} = 1 / (1 − ρ² ω_k / 4)
/// ```
///
/// Every iterate needs `r_k = b − A x_k`, so the monitored residual is always
/// the true one.
pub(crate) fn chebyshev<A, P>(
    mut apply_a: A,
    mut solve_m: P,
    interval: ChebyshevInterval,
    b: &[f64],
    x0: Option<Vec<f64>>,
    opts: &IterOptions,
) -> Result<Outcome>
where
    A: FnMut(&[f64], &mut [f64]) -> Result<()>,
    P: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    let n = b.len();
    let gamma = interval.gamma();
    let rho2 = interval.rho().powi(2);

    let mut x = x0.unwrap_or_else(|| vec![0.0; n]);
    let mut r = vec![0.0; n];
    true_residual(&mut apply_a, b, &x, &mut r)?;
    let mut history = vec![norm1(&r)];
    if history[0] < opts.tol {
        return Ok(Outcome { solution: x, iterations: 0, history, converged: true });
    }

    let mut z = vec![0.0; n];
    let mut prev = x.clone();
    let mut omega = 1.0;

    for k in 1..=opts.max_iter {
        solve_m(&r, &mut z)?;
        omega = match k {
            1 => 1.0,
            2 => 1.0 / (1.0 - rho2 / 2.0),
            _ => 1.0 / (1.0 - rho2 * omega / 4.0),
        };
        for ((xi, pi), zi) in x.iter_mut().zip(prev.iter_mut()).zip(&z) {
            let next = *pi + omega * (gamma * zi + *xi - *pi);
            *pi = *xi;
            *xi = next;
        }
        true_residual(&mut apply_a, b, &x, &mut r)?;
        let res = norm1(&r);
        history.push(res);
        if res < opts.tol {
            return Ok(Outcome { solution: x, iterations: k, history, converged: true });
        }
    }
    Ok(Outcome { solution: x, iterations: opts.max_iter, history, converged: false })
}
