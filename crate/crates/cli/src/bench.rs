use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;

use generank_core::{run_bench, BenchSpec, BenchTable, Method, DEFAULT_ALPHAS};

use crate::args::{parse_alpha, parse_tol, ExprArgs, GraphArgs};
use crate::input::{load_expression, load_network, Expression, Source};
use crate::provenance::{create_dir, write_json, Provenance};
use crate::Status;

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    expr: ExprArgs,

    #[arg(long, value_parser = parse_alpha, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
    alphas: Vec<f64>,

    #[arg(long, value_delimiter = ',', default_values_t = Method::ALL)]
    methods: Vec<Method>,

    /// Defaults to 1e-14 for --matrix input and 1e-10 for generated networks.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,

    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,

    /// Timed repetitions per cell; the median is reported.
    #[arg(long, default_value_t = 1)]
    reps: usize,

    /// Run cells concurrently. Timings are then not comparable.
    #[arg(long)]
    parallel: bool,

    #[arg(long)]
    check_every: Option<usize>,

    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Serialize)]
struct BenchDocument<'a> {
    provenance: Provenance,
    source: &'a Source,
    expression: &'a Expression,
    table: &'a BenchTable,
}

pub fn run(args: BenchArgs) -> Result<Status> {
    let net = load_network(&args.graph)?;
    let (ex, expression) = load_expression(&args.expr, args.graph.seed, &net)?;
    let spec = BenchSpec {
        alphas: args.alphas,
        methods: args.methods,
        tol: args.tol.unwrap_or_else(|| net.source.default_tol()),
        max_iter: args.max_iter,
        reps: args.reps,
        parallel: args.parallel,
        residual_check_interval: args.check_every,
    };
    let table = run_bench(net.adjacency.clone(), ex, &spec)?;

    create_dir(&args.out_dir)?;
    let csv = args.out_dir.join("bench.csv");
    std::fs::write(&csv, table.to_csv()?).with_context(|| format!("writing {}", csv.display()))?;
    let text = table.to_text();
    let txt = args.out_dir.join("bench.txt");
    std::fs::write(&txt, &text).with_context(|| format!("writing {}", txt.display()))?;
    let doc = BenchDocument {
        provenance: Provenance::new("bench"),
        source: &net.source,
        expression: &expression,
        table: &table,
    };
    write_json(&args.out_dir.join("bench.json"), &doc)?;

    println!("n = {}, nnz = {}, tol = {:e}", table.n, table.nnz, spec.tol);
    print!("{text}");
    let setup: Vec<String> = spec
        .alphas
        .iter()
        .map(|&a| {
            let t = table.cells.iter().filter(|c| c.alpha == a).map(|c| c.setup_time).fold(0.0, f64::max);
            format!("{a:.2}: {t:.4}s")
        })
        .collect();
    println!("setup (max per alpha): {}", setup.join(", "));
    if table.all_ok() {
        Ok(Status::Success)
    } else {
        eprintln!("generank: some cells did not converge");
        Ok(Status::NotConverged)
    }
}
