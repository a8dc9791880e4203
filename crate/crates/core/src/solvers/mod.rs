//! Iterative solvers for the GeneRank system.
//!
//! All four methods start from the zero vector unless an initial guess is
//! supplied, stop as soon as the 1-norm of the residual of the system they
//! iterate on drops below `tol`, and report in the same [`SolveReport`] shape.
//!
//! | method            | system iterated on                  | work per iteration          |
//! |-------------------|-------------------------------------|-----------------------------|
//! | [`Method::Cg`]        | `(D − αW) x̂ = (1−α) ex`         | one SpMV                    |
//! | [`Method::PcgJacobi`] | `S_α x̄ = b_α`                   | one SpMV                    |
//! | [`Method::Chebyshev`] | `(D − αW) x̂ = (1−α) ex`, split by `D` | one SpMV              |
//! | [`Method::CgMalpha`]  | `S_α x̄ = b_α`, preconditioned by `M_α = I + J_α` | two SpMVs  |

mod chebyshev;
mod krylov;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{recover_solution, GeneRankProblem, Solution, SystemForm};

pub use chebyshev::ChebyshevInterval;

/// Vectors at least this long use threaded reductions when determinism is off.
const PARALLEL_REDUCTION_LEN: usize = 50_000;

/// True residuals are recomputed every iteration up to this size by default.
pub const FULL_CHECK_MAX_N: usize = 100_000;

/// Default interval between true-residual recomputations above [`FULL_CHECK_MAX_N`].
pub const LARGE_N_CHECK_INTERVAL: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Conjugate gradients on `D − αW`.
    Cg,
    /// Conjugate gradients on the Jacobi-scaled system `S_α`.
    PcgJacobi,
    /// Chebyshev semi-iteration over the Jacobi splitting.
    Chebyshev,
    /// Conjugate gradients on `S_α` with the polynomial preconditioner `M_α`.
    CgMalpha,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Cg, Method::PcgJacobi, Method::Chebyshev, Method::CgMalpha];

    /// Command-line spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cg => "cg",
            Method::PcgJacobi => "pcg-jacobi",
            Method::Chebyshev => "chebyshev",
            Method::CgMalpha => "cg-malpha",
        }
    }

    /// Row label used in result tables.
    pub fn table_label(self) -> &'static str {
        match self {
            Method::Cg => "CG",
            Method::PcgJacobi => "PCG",
            Method::Chebyshev => "Chebyshev",
            Method::CgMalpha => "CG-M_alpha",
        }
    }

    pub fn form(self) -> SystemForm {
        match self {
            Method::Cg | Method::Chebyshev => SystemForm::Spd,
            Method::PcgJacobi | Method::CgMalpha => SystemForm::Scaled,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cg" => Ok(Method::Cg),
            "pcg" | "pcg-jacobi" | "jacobi" => Ok(Method::PcgJacobi),
            "chebyshev" | "cheb" => Ok(Method::Chebyshev),
            "cg-malpha" | "cg-m" | "malpha" => Ok(Method::CgMalpha),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub method: Method,
    /// Threshold on the residual 1-norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Fix the reduction order of inner products so reruns are bit-identical.
    pub deterministic: bool,
    /// Recompute the true residual every this many iterations; `None` picks
    /// every iteration up to [`FULL_CHECK_MAX_N`] unknowns and
    /// [`LARGE_N_CHECK_INTERVAL`] beyond.
    pub residual_check_interval: Option<usize>,
    /// Starting GeneRank vector `x`; zero when absent.
    pub initial_guess: Option<Vec<f64>>,
}

impl SolverConfig {
    pub fn new(method: Method, tol: f64) -> Self {
        SolverConfig {
            method,
            tol,
            max_iter: 10_000,
            deterministic: true,
            residual_check_interval: None,
            initial_guess: None,
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        if self.residual_check_interval == Some(0) {
            return Err(Error::InvalidParameter("residual check interval must be at least 1".into()));
        }
        Ok(())
    }

    fn check_interval(&self, n: usize) -> usize {
        self.residual_check_interval.unwrap_or(if n <= FULL_CHECK_MAX_N {
            1
        } else {
            LARGE_N_CHECK_INTERVAL
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub method: Method,
    pub alpha: f64,
    pub tol: f64,
    pub iterations: usize,
    /// Residual 1-norms of the iterated system, starting with the initial residual.
    pub residual_history: Vec<f64>,
    /// Iterations at which the history entry is a recomputed true residual.
    pub residual_check_interval: usize,
    pub converged: bool,
    /// Seconds spent iterating, excluding right-hand-side assembly and solution recovery.
    pub wall_time: f64,
    /// Seconds spent assembling the right-hand side and initial state.
    pub setup_time: f64,
    /// `‖(1−α)ex − (D − αW)x̂‖₁` of the returned solution, comparable across methods.
    pub spd_residual_norm1: f64,
    pub solution: Solution,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().expect("history is never empty")
    }
}

/// Solves `problem` with the method named in `config`.
pub fn solve(problem: &GeneRankProblem, config: &SolverConfig) -> Result<SolveReport> {
    match config.method {
        Method::Cg => solve_cg(problem, config),
        Method::PcgJacobi => solve_pcg_jacobi(problem, config),
        Method::Chebyshev => solve_chebyshev(problem, config),
        Method::CgMalpha => solve_cg_malpha(problem, config),
    }
}

/// Plain conjugate gradients on `(D − αW) x̂ = (1−α) ex`.
pub fn solve_cg(problem: &GeneRankProblem, config: &SolverConfig) -> Result<SolveReport> {
    run(problem, config, Method::Cg, |ctx| {
        krylov::pcg(
            "cg",
            |v, out| problem.apply_spd_into(v, out),
            None::<fn(&[f64], &mut [f64]) -> Result<()>>,
            &ctx.rhs,
            ctx.start.take(),
            &ctx.opts,
        )
    })
}

/// Conjugate gradients on `S_α x̄ = (1−α) D^{-1/2} ex`, i.e. CG with symmetric Jacobi scaling.
pub fn solve_pcg_jacobi(problem: &GeneRankProblem, config: &SolverConfig) -> Result<SolveReport> {
    run(problem, config, Method::PcgJacobi, |ctx| {
        krylov::pcg(
            "pcg-jacobi",
            |v, out| problem.apply_s_into(v, out),
            None::<fn(&[f64], &mut [f64]) -> Result<()>>,
            &ctx.rhs,
            ctx.start.take(),
            &ctx.opts,
        )
    })
}

/// Preconditioned CG on `S_α x̄ = b_α` with `z = M_α r` applied by multiplication.
///
/// This is the same Krylov iteration as plain CG on the SPD system
/// `T_α x̄ = M_α b_α`, but the monitored residual is that of `S_α`.
pub fn solve_cg_malpha(problem: &GeneRankProblem, config: &SolverConfig) -> Result<SolveReport> {
    run(problem, config, Method::CgMalpha, |ctx| {
        krylov::pcg(
            "cg-malpha",
            |v, out| problem.apply_s_into(v, out),
            Some(|v: &[f64], out: &mut [f64]| problem.apply_m_into(v, out)),
            &ctx.rhs,
            ctx.start.take(),
            &ctx.opts,
        )
    })
}

/// Chebyshev acceleration of `x̂ ← D⁻¹(αW x̂ + (1−α) ex)`.
///
/// The Jacobi-preconditioned operator `D⁻¹(D − αW)` has spectrum in
/// `[1−α, 1+α]`, so the Jacobi iteration matrix `αD⁻¹W` has spectrum in `[−α, α]`.
pub fn solve_chebyshev(problem: &GeneRankProblem, config: &SolverConfig) -> Result<SolveReport> {
    let alpha = problem.alpha();
    let interval = ChebyshevInterval::new(1.0 - alpha, 1.0 + alpha)?;
    let d = problem.degrees();
    run(problem, config, Method::Chebyshev, |ctx| {
        chebyshev::chebyshev(
            |v, out| problem.apply_spd_into(v, out),
            |v, out| {
                out.iter_mut().zip(v).zip(d).for_each(|((o, r), di)| *o = r / di);
                Ok(())
            },
            interval,
            &ctx.rhs,
            ctx.start.take(),
            &ctx.opts,
        )
    })
}

struct RunContext {
    rhs: Vec<f64>,
    start: Option<Vec<f64>>,
    opts: krylov::IterOptions,
}

fn run<F>(problem: &GeneRankProblem, config: &SolverConfig, method: Method, iterate: F) -> Result<SolveReport>
where
    F: FnOnce(&mut RunContext) -> Result<krylov::Outcome>,
{
    config.validate()?;
    let n = problem.n();
    let setup = Instant::now();
    let form = method.form();
    let rhs = match form {
        SystemForm::Scaled => problem.assemble_scaled_rhs(),
        _ => problem.assemble_spd_rhs(),
    };
    let start = match &config.initial_guess {
        None => None,
        Some(x) => {
            if x.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x.len() });
            }
            let d = problem.degrees();
            Some(match form {
                SystemForm::Scaled => x.iter().zip(d).map(|(v, di)| v / di.sqrt()).collect(),
                _ => x.iter().zip(d).map(|(v, di)| v / di).collect(),
            })
        }
    };
    let check_every = config.check_interval(n);
    let mut ctx = RunContext {
        rhs,
        start,
        opts: krylov::IterOptions {
            tol: config.tol,
            max_iter: config.max_iter,
            check_every,
            deterministic: config.deterministic,
        },
    };
    let setup_time = setup.elapsed().as_secs_f64();

    let timer = Instant::now();
    let outcome = iterate(&mut ctx)?;
    let wall_time = timer.elapsed().as_secs_f64();

    let solution = recover_solution(form, outcome.solution, problem.degrees())?;
    let spd_residual_norm1 = problem.spd_residual_norm1(&solution.xhat)?;
    Ok(SolveReport {
        method,
        alpha: problem.alpha(),
        tol: config.tol,
        iterations: outcome.iterations,
        residual_history: outcome.history,
        residual_check_interval: check_every,
        converged: outcome.converged,
        wall_time,
        setup_time,
        spd_residual_norm1,
        solution,
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64], deterministic: bool) -> f64 {
    if deterministic || a.len() < PARALLEL_REDUCTION_LEN {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    } else {
        a.par_iter().zip(b).map(|(x, y)| x * y).sum()
    }
}

pub(crate) fn norm1(a: &[f64]) -> f64 {
    a.iter().map(|v| v.abs()).sum()
}
