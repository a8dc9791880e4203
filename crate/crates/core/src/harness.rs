//! Benchmark grid: every (α, method) pair on one network, with iteration
//! counts and median wall times laid out as method rows by α columns.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::GeneRankProblem;
use crate::solvers::{solve, Method, SolverConfig};
use crate::sparse::SparseSymMatrix;

pub const DEFAULT_ALPHAS: [f64; 4] = [0.5, 0.75, 0.80, 0.99];

#[derive(Debug, Clone, Serialize)]
pub struct BenchSpec {
    pub alphas: Vec<f64>,
    pub methods: Vec<Method>,
    pub tol: f64,
    pub max_iter: usize,
    /// Timed repetitions per cell; the reported time is their median.
    pub reps: usize,
    /// Run cells concurrently. Timings are then not comparable across cells.
    pub parallel: bool,
    pub residual_check_interval: Option<usize>,
}

impl BenchSpec {
    pub fn new(tol: f64) -> Self {
        BenchSpec {
            alphas: DEFAULT_ALPHAS.to_vec(),
            methods: Method::ALL.to_vec(),
            tol,
            max_iter: 10_000,
            reps: 1,
            parallel: false,
            residual_check_interval: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParameter("alpha grid and method list must be non-empty".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::InvalidAlpha(*a));
        }
        if self.reps == 0 {
            return Err(Error::InvalidParameter("reps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchCell {
    pub alpha: f64,
    pub method: Method,
    pub iterations: usize,
    pub converged: bool,
    /// Set when the solver aborted; the cell prints as DNF.
    pub error: Option<String>,
    pub median_wall_time: f64,
    pub wall_times: Vec<f64>,
    /// Problem construction plus right-hand-side assembly, seconds.
    pub setup_time: f64,
    pub final_residual: f64,
    pub spd_residual_norm1: f64,
}

impl BenchCell {
    pub fn ok(&self) -> bool {
        self.converged && self.error.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchTable {
    pub n: usize,
    pub nnz: usize,
    pub spec: BenchSpec,
    pub cells: Vec<BenchCell>,
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn run_cell(problem: &GeneRankProblem, method: Method, spec: &BenchSpec, problem_setup: f64) -> Result<BenchCell> {
    let config = SolverConfig {
        max_iter: spec.max_iter,
        residual_check_interval: spec.residual_check_interval,
        ..SolverConfig::new(method, spec.tol)
    };
    let mut times = Vec::with_capacity(spec.reps);
    let mut first: Option<(usize, Vec<f64>)> = None;
    let mut last = None;
    for _ in 0..spec.reps {
        let report = match solve(problem, &config) {
            Ok(r) => r,
            Err(e @ Error::Breakdown { .. }) => {
                return Ok(BenchCell {
                    alpha: problem.alpha(),
                    method,
                    iterations: 0,
                    converged: false,
                    error: Some(e.to_string()),
                    median_wall_time: f64::NAN,
                    wall_times: Vec::new(),
                    setup_time: problem_setup,
                    final_residual: f64::NAN,
                    spd_residual_norm1: f64::NAN,
                })
            }
            Err(e) => return Err(e),
        };
        match &first {
            None => first = Some((report.iterations, report.residual_history.clone())),
            Some((it, hist)) => {
                if *it != report.iterations || *hist != report.residual_history {
                    return Err(Error::Internal(format!(
                        "{method} at alpha = {} was not reproducible across repetitions",
                        problem.alpha()
                    )));
                }
            }
        }
        times.push(report.wall_time);
        last = Some(report);
    }
    let report = last.expect("reps >= 1");
    let wall_times = times.clone();
    Ok(BenchCell {
        alpha: problem.alpha(),
        method,
        iterations: report.iterations,
        converged: report.converged,
        error: None,
        median_wall_time: median(&mut times),
        wall_times,
        setup_time: problem_setup + report.setup_time,
        final_residual: report.final_residual(),
        spd_residual_norm1: report.spd_residual_norm1,
    })
}

/// Runs the full grid. Cells are ordered α-major, in the order of `spec.methods`.
pub fn run_bench(adjacency: Arc<SparseSymMatrix>, expression: Vec<f64>, spec: &BenchSpec) -> Result<BenchTable> {
    spec.validate()?;
    let n = adjacency.n();
    let nnz = adjacency.nnz();
    let mut problems = Vec::with_capacity(spec.alphas.len());
    for &alpha in &spec.alphas {
        let t = Instant::now();
        let p = GeneRankProblem::new(Arc::clone(&adjacency), expression.clone(), alpha)?;
        problems.push((p, t.elapsed().as_secs_f64()));
    }
    let jobs: Vec<(usize, Method)> = (0..problems.len())
        .flat_map(|a| spec.methods.iter().map(move |&m| (a, m)))
        .collect();
    let run = |&(a, m): &(usize, Method)| run_cell(&problems[a].0, m, spec, problems[a].1);
    let cells: Result<Vec<BenchCell>> = if spec.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    Ok(BenchTable {
        n,
        nnz,
        spec: spec.clone(),
        cells: cells?,
    })
}

impl BenchTable {
    pub fn cell(&self, method: Method, alpha: f64) -> Option<&BenchCell> {
        self.cells.iter().find(|c| c.method == method && c.alpha == alpha)
    }

    pub fn all_ok(&self) -> bool {
        self.cells.iter().all(BenchCell::ok)
    }

    /// One row per cell: `method,alpha,iterations,wall_time_s,setup_time_s,converged`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["method", "alpha", "iterations", "wall_time_s", "setup_time_s", "converged"])?;
        for c in &self.cells {
            let iterations = if c.error.is_some() { "DNF".to_string() } else { c.iterations.to_string() };
            w.write_record([
                c.method.table_label().to_string(),
                c.alpha.to_string(),
                iterations,
                format!("{:.6}", c.median_wall_time),
                format!("{:.6}", c.setup_time),
                c.converged.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    /// Aligned table: methods down, α across, `iterations(seconds)` per cell.
    pub fn to_text(&self) -> String {
        let width = 16;
        let mut out = String::new();
        let _ = write!(out, "{:<12}", "alpha");
        for a in &self.spec.alphas {
            let _ = write!(out, "{:>width$}", format!("{a:.2}"));
        }
        out.push('\n');
        for &m in &self.spec.methods {
            let _ = write!(out, "{:<12}", m.table_label());
            for &a in &self.spec.alphas {
                let text = match self.cell(m, a) {
                    Some(c) if c.ok() => format!("{}({:.3})", c.iterations, c.median_wall_time),
                    _ => "DNF".to_string(),
                };
                let _ = write!(out, "{text:>width$}");
            }
            out.push('\n');
        }
        out
    }
}
