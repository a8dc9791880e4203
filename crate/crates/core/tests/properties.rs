use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use generank_core::{
    build_adjacency_from_annotations, generate_renga, make_expression_vector, random_adjacency, solve,
    AnnotationTable, ExpressionKind, GeneRankProblem, Method, OperatorKind, RengaParams, SolverConfig,
    SparseSymMatrix,
};

const ALPHAS: [f64; 4] = [0.5, 0.75, 0.8, 0.99];

fn dense(w: &SparseSymMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(w.n(), w.n(), |i, j| w.get(i, j))
}

fn sorted_eigs(a: DMatrix<f64>) -> Vec<f64> {
    let mut e: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// `αD^{-1/2}WD^{-1/2}` with isolated rows left at zero.
fn dense_j(w: &DMatrix<f64>, alpha: f64) -> DMatrix<f64> {
    let n = w.nrows();
    let s: Vec<f64> = (0..n)
        .map(|i| {
            let d = w.row(i).sum();
            if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 }
        })
        .collect();
    DMatrix::from_fn(n, n, |i, j| alpha * s[i] * w[(i, j)] * s[j])
}

fn graph() -> impl Strategy<Value = SparseSymMatrix> {
    (2usize..60, 0.02f64..0.4, any::<u64>()).prop_map(|(n, p, seed)| random_adjacency(n, p, seed).unwrap())
}

fn vector(n: usize, seed: u64) -> Vec<f64> {
    make_expression_vector(&ExpressionKind::Random { seed }, n).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gap between `⟨a, b⟩` and `⟨c, d⟩` relative to the summed term magnitudes.
fn inner_gap(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
    let mag = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p * q).abs()).sum::<f64>();
    (dot(a, b) - dot(c, d)).abs() / mag(a, b).max(mag(c, d)).max(f64::MIN_POSITIVE)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spmv_reproduces_columns(w in graph()) {
        let a = dense(&w);
        for j in 0..w.n() {
            let mut e = vec![0.0; w.n()];
            e[j] = 1.0;
            let col = w.spmv(&e).unwrap();
            for i in 0..w.n() {
                prop_assert_eq!(col[i], a[(i, j)]);
            }
        }
    }

    #[test]
    fn operators_are_symmetric(w in graph(), k in 0usize..4, seed in any::<u64>()) {
        let n = w.n();
        let u = vector(n, seed);
        let v = vector(n, seed ^ 0x5eed);
        prop_assert!(inner_gap(&w.spmv(&u).unwrap(), &v, &u, &w.spmv(&v).unwrap()) <= 1e-12);
        let p = GeneRankProblem::new(Arc::new(w), vec![1.0; n], ALPHAS[k]).unwrap();
        for kind in [OperatorKind::J, OperatorKind::S, OperatorKind::M, OperatorKind::T, OperatorKind::Spd] {
            let op = p.operator(kind);
            let gap = inner_gap(&op.apply(&u).unwrap(), &v, &u, &op.apply(&v).unwrap());
            prop_assert!(gap <= 1e-12, "{:?}: {:e}", kind, gap);
        }
    }

    #[test]
    fn spectra_of_s_and_t(w in graph(), k in 0usize..4) {
        let alpha = ALPHAS[k];
        let n = w.n();
        let j = dense_j(&dense(&w), alpha);
        let eye = DMatrix::<f64>::identity(n, n);
        let s = sorted_eigs(&eye - &j);
        let t = sorted_eigs(&eye - &j * &j);
        // λ ↦ 1 − (1 − λ)² is not monotone on (0, 2), so compare sorted lists
        let mut mapped: Vec<f64> = s.iter().map(|l| 1.0 - (1.0 - l).powi(2)).collect();
        mapped.sort_by(f64::total_cmp);
        for (a, b) in mapped.iter().zip(&t) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
        prop_assert!(s.iter().all(|&l| l >= 1.0 - alpha - 1e-10 && l <= 1.0 + alpha + 1e-10));
        prop_assert!(t.iter().all(|&l| l >= 1.0 - alpha * alpha - 1e-10 && l <= 1.0 + 1e-12));
        if w.nnz() > 0 {
            prop_assert!((s[0] - (1.0 - alpha)).abs() <= 1e-10);
            let cond = |e: &[f64]| e[e.len() - 1] / e[0];
            prop_assert!(cond(&t) <= cond(&s) + 1e-8);
        }

        // the library's own operators give the same spectra
        let p = GeneRankProblem::new(Arc::new(w), vec![1.0; n], alpha).unwrap();
        let lib_t = generank_core::dense_spectrum(&p.operator(OperatorKind::T), 100).unwrap();
        for (a, b) in lib_t.iter().zip(&t) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn spd_matrix_and_t_are_m_matrices(w in graph(), k in 0usize..4) {
        let alpha = ALPHAS[k];
        let n = w.n();
        let a = dense(&w);
        let d = DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| a.row(i).sum().max(1.0)));
        let spd = &d - &a * alpha;
        let inv = spd.clone().try_inverse().unwrap();
        prop_assert!(inv.iter().all(|&v| v >= -1e-12));
        let witness = &inv * DVector::from_element(n, 1.0);
        prop_assert!(witness.iter().all(|&v| v > 0.0));
        let j = dense_j(&a, alpha);
        let t = DMatrix::<f64>::identity(n, n) - &j * &j;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    prop_assert!(t[(r, c)] <= 1e-14);
                }
            }
        }
        prop_assert!(t.try_inverse().unwrap().iter().all(|&v| v >= -1e-12));

        let lib = generank_core::verify_m_matrix(&spd).unwrap();
        prop_assert!(lib.z_matrix && lib.nonnegative_inverse && lib.positive_witness);
    }

    #[test]
    fn solvers_agree_and_back_transforms_are_consistent(
        n in 20usize..200,
        p in 0.02f64..0.2,
        seed in any::<u64>(),
        k in 0usize..4,
    ) {
        let w = random_adjacency(n, p, seed).unwrap();
        let ex = vector(n, seed.wrapping_add(1));
        let problem = GeneRankProblem::new(Arc::new(w), ex, ALPHAS[k]).unwrap();
        let d = problem.degrees().to_vec();
        let mut reference: Option<Vec<f64>> = None;
        for method in Method::ALL {
            let r = solve(&problem, &SolverConfig::new(method, 1e-12)).unwrap();
            prop_assert!(r.converged);
            let s = &r.solution;
            for i in 0..n {
                prop_assert!(rel(s.x[i], d[i] * s.xhat[i]) <= 1e-10);
                prop_assert!(rel(s.x[i], d[i].sqrt() * s.xbar[i]) <= 1e-10);
            }
            match &reference {
                None => reference = Some(s.x.clone()),
                Some(x0) => {
                    let scale = x0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    let err = x0.iter().zip(&s.x).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                    prop_assert!(err <= 1e-7 * scale, "{method}: {err:e}");
                }
            }
        }
    }

    #[test]
    fn renga_is_valid_and_seeded(
        n in 2usize..400,
        lambda in 0.0f64..0.95,
        beta in 0.05f64..=1.0,
        seed in any::<u64>(),
    ) {
        let params = RengaParams::new(n, lambda, beta, seed).unwrap();
        let a = generate_renga(&params).unwrap();
        prop_assert!(a.validate().is_ok());
        prop_assert!(!a.has_diagonal_entries());
        prop_assert!(a.values().iter().all(|&v| v == 1.0));
        let b = generate_renga(&params).unwrap();
        prop_assert_eq!(a.col_indices(), b.col_indices());
        prop_assert_eq!(a.row_offsets(), b.row_offsets());
    }

    #[test]
    fn annotation_builder_ignores_input_order(
        rows in prop::collection::vec(prop::collection::btree_set(0u8..12, 0..4), 1..30),
        shift in any::<usize>(),
    ) {
        let entries: Vec<(String, Vec<String>)> = rows
            .iter()
            .enumerate()
            .map(|(g, terms)| (format!("g{g}"), terms.iter().map(|t| format!("T{t}")).collect()))
            .collect();
        let mut rotated = entries.clone();
        rotated.rotate_left(shift % entries.len());
        rotated.iter_mut().for_each(|(_, t)| t.reverse());
        let build = |e: Vec<(String, Vec<String>)>| {
            build_adjacency_from_annotations(&AnnotationTable::from_entries(e).unwrap()).unwrap()
        };
        let (a, ids_a) = build(entries.clone());
        let (b, ids_b) = build(rotated);
        prop_assert_eq!(&ids_a, &ids_b);
        prop_assert_eq!(a.col_indices(), b.col_indices());
        prop_assert_eq!(a.row_offsets(), b.row_offsets());
        // edge oracle: genes are adjacent exactly when their term sets meet
        let pos = |id: &str| ids_a.iter().position(|g| g == id).unwrap();
        for (gi, ti) in &entries {
            for (gj, tj) in &entries {
                let linked = gi != gj && ti.iter().any(|t| tj.contains(t));
                prop_assert_eq!(a.get(pos(gi), pos(gj)) == 1.0, linked);
            }
        }
    }

    #[test]
    fn random_expression_is_a_probability_vector(n in 1usize..5000, seed in any::<u64>()) {
        let v = vector(n, seed);
        prop_assert!(v.iter().all(|&x| x > 0.0 && x < 1.0 || n == 1 && x == 1.0));
        prop_assert!((v.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}
