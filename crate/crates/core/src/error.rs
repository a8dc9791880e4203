use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the GeneRank toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid sparse matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid adjacency matrix: {0}")]
    InvalidAdjacency(String),

    #[error("damping factor must lie strictly inside (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("invalid expression vector: {0}")]
    InvalidExpression(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix market parse error at line {line}: {message}")]
    MatrixMarket { line: usize, message: String },

    #[error("index out of bounds at line {line}: ({row}, {col}) in a {n}x{n} matrix")]
    IndexOutOfBounds {
        line: usize,
        row: usize,
        col: usize,
        n: usize,
    },

    #[error("duplicate entry ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("matrix is not symmetric: entry ({row}, {col}) has no matching mirror")]
    Asymmetric { row: usize, col: usize },

    #[error("annotation table: {0}")]
    Annotation(String),

    #[error("solver breakdown in {method} at iteration {iteration}: {reason}")]
    Breakdown {
        method: &'static str,
        iteration: usize,
        reason: String,
    },

    #[error("dense operation refused: n = {n} exceeds the dense cap {cap}")]
    DenseCapExceeded { n: usize, cap: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
