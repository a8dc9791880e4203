use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use generank_core::io::write_ranking_csv;
use generank_core::{solve, GeneRankProblem, Method, SolverConfig};

use crate::args::{parse_alpha, parse_tol, ExprArgs, GraphArgs};
use crate::input::{load_expression, load_network, Expression, Source};
use crate::provenance::{create_dir, write_json, Provenance};
use crate::Status;

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    expr: ExprArgs,

    /// Damping factor, strictly between 0 and 1.
    #[arg(long, value_parser = parse_alpha)]
    alpha: f64,

    /// Stop once the residual 1-norm drops below this. Defaults to 1e-14 for
    /// --matrix input and 1e-10 for generated networks.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,

    #[arg(long, default_value = "cg-malpha")]
    method: Method,

    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,

    /// Recompute the true residual every this many iterations.
    #[arg(long)]
    check_every: Option<usize>,

    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Serialize)]
struct SolveDocument<'a> {
    provenance: Provenance,
    source: &'a Source,
    expression: &'a Expression,
    n: usize,
    nnz: usize,
    method: Method,
    alpha: f64,
    tol: f64,
    max_iter: usize,
    residual_check_interval: usize,
    converged: bool,
    iterations: usize,
    final_residual: f64,
    spd_residual_norm1: f64,
    nonsymmetric_residual_norm1: f64,
    wall_time_s: f64,
    setup_time_s: f64,
    residual_history: &'a [f64],
    ranking: &'static str,
}

pub fn run(args: SolveArgs) -> Result<Status> {
    let net = load_network(&args.graph)?;
    let (ex, expression) = load_expression(&args.expr, args.graph.seed, &net)?;
    let tol = args.tol.unwrap_or_else(|| net.source.default_tol());
    let problem = GeneRankProblem::new(net.adjacency.clone(), ex, args.alpha)?;
    let config = SolverConfig {
        max_iter: args.max_iter,
        residual_check_interval: args.check_every,
        ..SolverConfig::new(args.method, tol)
    };
    let report = solve(&problem, &config)?;

    create_dir(&args.out_dir)?;
    let ranking = "ranking.csv";
    write_ranking_csv(args.out_dir.join(ranking), &report.solution.x, net.gene_ids.as_deref())?;
    let doc = SolveDocument {
        provenance: Provenance::new("solve"),
        source: &net.source,
        expression: &expression,
        n: problem.n(),
        nnz: net.adjacency.nnz(),
        method: args.method,
        alpha: args.alpha,
        tol,
        max_iter: args.max_iter,
        residual_check_interval: report.residual_check_interval,
        converged: report.converged,
        iterations: report.iterations,
        final_residual: report.final_residual(),
        spd_residual_norm1: report.spd_residual_norm1,
        nonsymmetric_residual_norm1: problem.nonsymmetric_residual_norm1(&report.solution.x)?,
        wall_time_s: report.wall_time,
        setup_time_s: report.setup_time,
        residual_history: &report.residual_history,
        ranking,
    };
    write_json(&args.out_dir.join("solve.json"), &doc)?;

    println!(
        "{} alpha={} tol={:e}: {} iterations, residual {:.3e}, {:.3}s{}",
        args.method,
        args.alpha,
        tol,
        report.iterations,
        report.final_residual(),
        report.wall_time,
        if report.converged { "" } else { " (NOT CONVERGED)" }
    );
    if report.converged {
        Ok(Status::Success)
    } else {
        eprintln!("generank: no convergence within {} iterations; partial results written", args.max_iter);
        Ok(Status::NotConverged)
    }
}
