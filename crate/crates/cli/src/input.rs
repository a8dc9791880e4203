use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{Context, Result};
use serde::Serialize;

use generank_core::io::{align_expression, read_expression_file, read_gene_index};
use generank_core::{
    generate_renga, make_expression_vector, read_matrix_market, ExpressionKind, RengaParams, SparseSymMatrix,
};

use crate::args::{ExChoice, ExprArgs, GraphArgs};
use crate::usage;

/// Default stopping tolerance for networks read from disk.
pub const FILE_TOL: f64 = 1e-14;
/// Default stopping tolerance for generated networks.
pub const GENERATED_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    File { path: PathBuf, genes: Option<PathBuf> },
    Renga { params: RengaParams },
    Random { n: usize, density: f64, seed: u64 },
}

impl Source {
    pub fn default_tol(&self) -> f64 {
        match self {
            Source::File { .. } => FILE_TOL,
            _ => GENERATED_TOL,
        }
    }
}

pub struct Network {
    pub adjacency: Arc<SparseSymMatrix>,
    pub gene_ids: Option<Vec<String>>,
    pub source: Source,
}

pub fn load_network(args: &GraphArgs) -> Result<Network> {
    match (&args.matrix, args.renga_n) {
        (Some(path), _) => {
            let adjacency = read_matrix_market(path).with_context(|| format!("reading {}", path.display()))?;
            let gene_ids = match &args.genes {
                Some(g) => {
                    let ids = read_gene_index(g).with_context(|| format!("reading {}", g.display()))?;
                    if ids.len() != adjacency.n() {
                        return Err(usage(format!(
                            "{} names {} genes but the matrix has {} rows",
                            g.display(),
                            ids.len(),
                            adjacency.n()
                        )));
                    }
                    Some(ids)
                }
                None => None,
            };
            Ok(Network {
                adjacency: Arc::new(adjacency),
                gene_ids,
                source: Source::File { path: path.clone(), genes: args.genes.clone() },
            })
        }
        (None, Some(n)) => {
            let params = RengaParams::new(n, args.lambda, args.beta, args.seed)?;
            Ok(Network {
                adjacency: Arc::new(generate_renga(&params)?),
                gene_ids: None,
                source: Source::Renga { params },
            })
        }
        (None, None) => Err(usage("give a network with --matrix or --renga-n")),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expression {
    Uniform,
    Random { seed: u64 },
    File { path: PathBuf },
}

pub fn load_expression(args: &ExprArgs, seed: u64, net: &Network) -> Result<(Vec<f64>, Expression)> {
    let n = net.adjacency.n();
    if args.ex != ExChoice::File && args.ex_file.is_some() {
        return Err(usage("--ex-file needs --ex file"));
    }
    match args.ex {
        ExChoice::Uniform => Ok((make_expression_vector(&ExpressionKind::Uniform, n)?, Expression::Uniform)),
        ExChoice::Random => {
            let seed = args.ex_seed.unwrap_or(seed);
            let ex = make_expression_vector(&ExpressionKind::Random { seed }, n)?;
            Ok((ex, Expression::Random { seed }))
        }
        ExChoice::File => {
            let path = args.ex_file.as_ref().ok_or_else(|| usage("--ex file needs --ex-file"))?;
            let records = read_expression_file(path).with_context(|| format!("reading {}", path.display()))?;
            let ex = align_expression(&records, net.gene_ids.as_deref(), n)?;
            Ok((ex, Expression::File { path: path.clone() }))
        }
    }
}
