use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Result;
use clap::Args;
use serde::Serialize;

use generank_core::io::write_eigenvalues_csv;
use generank_core::spectral::{DEFAULT_DENSE_CAP, DEFAULT_LANCZOS_ITERS};
use generank_core::{
    check_theorems, make_expression_vector, random_adjacency, ExpressionKind, GeneRankProblem, SparseSymMatrix,
    TheoremReport, Verdict, VerifyOptions, DEFAULT_ALPHAS,
};

use crate::args::{parse_alpha, GraphArgs};
use crate::input::{load_network, Source};
use crate::provenance::{create_dir, write_json, Provenance};
use crate::{usage, Status};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    graph: GraphArgs,

    /// Check random adjacency matrices of this size instead of one network.
    #[arg(long, conflicts_with_all = ["matrix", "renga_n"])]
    random_n: Option<usize>,

    /// Edge density of the random matrices.
    #[arg(long, default_value_t = 0.1)]
    density: f64,

    /// Number of random matrices, seeded --seed, --seed + 1, ...
    #[arg(long, default_value_t = 1)]
    instances: usize,

    #[arg(long, value_parser = parse_alpha, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
    alphas: Vec<f64>,

    /// Largest n that is diagonalized densely; beyond it Lanczos estimates are used.
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: usize,

    #[arg(long, default_value_t = DEFAULT_LANCZOS_ITERS)]
    lanczos_iters: usize,

    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Serialize)]
struct InstanceResult {
    source: Source,
    reports: Vec<TheoremReport>,
}

#[derive(Serialize)]
struct VerifyDocument {
    provenance: Provenance,
    dense_cap: usize,
    lanczos_iters: usize,
    passed: usize,
    failed: usize,
    skipped: usize,
    instances: Vec<InstanceResult>,
}

fn instances(args: &VerifyArgs) -> Result<Vec<(Arc<SparseSymMatrix>, Source)>> {
    match args.random_n {
        Some(n) => {
            if args.instances == 0 {
                return Err(usage("--instances must be at least 1"));
            }
            (0..args.instances as u64)
                .map(|k| {
                    let seed = args.graph.seed + k;
                    let w = random_adjacency(n, args.density, seed)?;
                    Ok((Arc::new(w), Source::Random { n, density: args.density, seed }))
                })
                .collect()
        }
        None => {
            let net = load_network(&args.graph)?;
            Ok(vec![(net.adjacency, net.source)])
        }
    }
}

pub fn run(args: VerifyArgs) -> Result<Status> {
    let opts = VerifyOptions {
        dense_cap: args.dense_cap,
        lanczos_iters: args.lanczos_iters,
        seed: args.graph.seed,
    };
    let sources = instances(&args)?;
    create_dir(&args.out_dir)?;
    let many = sources.len() > 1;
    let (mut passed, mut failed, mut skipped) = (0, 0, 0);
    let mut results = Vec::with_capacity(sources.len());

    for (k, (w, source)) in sources.into_iter().enumerate() {
        let ex = make_expression_vector(&ExpressionKind::Uniform, w.n())?;
        let base = GeneRankProblem::new(w, ex, args.alphas[0])?;
        let mut reports = Vec::with_capacity(args.alphas.len());
        for &alpha in &args.alphas {
            let report = check_theorems(&base.with_alpha(alpha)?, &opts)?;
            if many {
                println!("instance {k}, alpha = {alpha}, n = {}", report.n);
            } else {
                println!("alpha = {alpha}, n = {}", report.n);
            }
            for c in &report.checks {
                let tag = match &c.verdict {
                    Verdict::Pass => {
                        passed += 1;
                        "PASS"
                    }
                    Verdict::Fail => {
                        failed += 1;
                        "FAIL"
                    }
                    Verdict::Skipped(_) => {
                        skipped += 1;
                        "SKIP"
                    }
                };
                let note = match &c.verdict {
                    Verdict::Skipped(why) => format!("{} ({why})", c.detail),
                    _ => c.detail.clone(),
                };
                println!("  {tag}  {:<36} {note}", c.claim.describe());
            }
            let prefix = if many { format!("i{k}_") } else { String::new() };
            if let Some(s) = &report.spectrum_s {
                write_eigenvalues_csv(args.out_dir.join(format!("{prefix}eigenvalues_S_alpha{alpha}.csv")), s)?;
            }
            if let Some(t) = &report.spectrum_t {
                write_eigenvalues_csv(args.out_dir.join(format!("{prefix}eigenvalues_T_alpha{alpha}.csv")), t)?;
            }
            reports.push(report);
        }
        results.push(InstanceResult { source, reports });
    }

    let doc = VerifyDocument {
        provenance: Provenance::new("verify"),
        dense_cap: args.dense_cap,
        lanczos_iters: args.lanczos_iters,
        passed,
        failed,
        skipped,
        instances: results,
    };
    write_json(&args.out_dir.join("verify.json"), &doc)?;
    println!("{passed} passed, {failed} failed, {skipped} skipped");
    Ok(if failed == 0 { Status::Success } else { Status::VerificationFailed })
}
