//! Criterion benchmarks for the sparse kernels and the four solvers; run with `cargo bench -p generank-bench`.
