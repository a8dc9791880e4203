use std::path::PathBuf;

use clap::{Args, ValueEnum};

pub fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must lie strictly between 0 and 1, got {a}"))
    }
}

pub fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(format!("tolerance must be positive, got {t}"))
    }
}

/// Where the adjacency matrix comes from.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Adjacency matrix in Matrix Market coordinate format.
    #[arg(long, conflicts_with = "renga_n")]
    pub matrix: Option<PathBuf>,

    /// Gene index map (`index<TAB>gene_id`) naming the rows of --matrix.
    #[arg(long, requires = "matrix")]
    pub genes: Option<PathBuf>,

    /// Generate a range-dependent random network with this many nodes.
    #[arg(long)]
    pub renga_n: Option<usize>,

    /// Range decay of the generated network.
    #[arg(long, default_value_t = 0.9)]
    pub lambda: f64,

    /// Nearest-neighbour link probability of the generated network.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,

    /// Seed for generated networks and random expression vectors.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExChoice {
    /// Every gene gets 1/n.
    Uniform,
    /// Random probability vector.
    Random,
    /// Read from --ex-file.
    File,
}

#[derive(Debug, Clone, Args)]
pub struct ExprArgs {
    /// Expression vector.
    #[arg(long, value_enum, default_value_t = ExChoice::Uniform)]
    pub ex: ExChoice,

    /// One value per line, or CSV with header `gene_id,ex`.
    #[arg(long)]
    pub ex_file: Option<PathBuf>,

    /// Seed of the random expression vector; defaults to --seed.
    #[arg(long)]
    pub ex_seed: Option<u64>,
}
