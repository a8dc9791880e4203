//! Iterative solvers for the GeneRank linear system.
//!
//! GeneRank ranks genes by solving `(I − αWD⁻¹)x = (1−α)ex`, where `W` is a
//! symmetric 0/1 gene network, `D` its degree scaling and `ex` the measured
//! expression changes. This crate provides:
//!
//! - [`sparse`] and [`mtx`]: CSR storage with Matrix Market exchange.
//! - [`model`]: the problem instance, its symmetric reformulations and the
//!   matrix-free operators `J_α`, `S_α = I − J_α`, `M_α = I + J_α` and
//!   `T_α = M_α S_α = I − J_α²`.
//! - [`solvers`]: CG, Jacobi-scaled CG, Chebyshev semi-iteration and CG
//!   preconditioned by the polynomial `M_α`.
//! - [`spectral`]: eigenvalue, condition-number and M-matrix verification.
//! - [`datagen`]: range-dependent random graphs, annotation networks and
//!   expression vectors.
//! - [`harness`]: the (α × method) benchmark grid.

/// Version of this library, echoed into generated metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod datagen;
pub mod error;
pub mod harness;
pub mod io;
pub mod model;
pub mod mtx;
pub mod solvers;
pub mod sparse;
pub mod spectral;

pub use datagen::{
    build_adjacency_from_annotations, generate_renga, make_expression_vector, random_adjacency,
    random_annotations, AnnotationTable, ExpressionKind, RengaParams,
};
pub use error::{Error, Result};
pub use harness::{run_bench, BenchCell, BenchSpec, BenchTable, DEFAULT_ALPHAS};
pub use model::{
    build_degree_scaling, rank_genes, recover_solution, GeneRankProblem, OperatorHandle, OperatorKind, Solution,
    SystemForm,
};
pub use mtx::{read_matrix_market, write_matrix_market};
pub use solvers::{
    solve, solve_cg, solve_cg_malpha, solve_chebyshev, solve_pcg_jacobi, Method, SolveReport, SolverConfig,
};
pub use sparse::SparseSymMatrix;
pub use spectral::{
    check_theorems, dense_spectrum, extreme_eigs_lanczos, extreme_eigs_lanczos_from, verify_m_matrix, Claim,
    SpectralReport, TheoremReport, Verdict, VerifyOptions,
};
