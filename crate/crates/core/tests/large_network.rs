use generank_core::spectral::lemma_witness_residual;
use generank_core::{
    check_theorems, generate_renga, make_expression_vector, solve, Claim, ExpressionKind, GeneRankProblem, Method,
    RengaParams, SolverConfig, Verdict, VerifyOptions,
};

fn renga_problem(n: usize, alpha: f64) -> GeneRankProblem {
    let w = generate_renga(&RengaParams::new(n, 0.9, 1.0, 1).unwrap()).unwrap();
    let ex = make_expression_vector(&ExpressionKind::Uniform, n).unwrap();
    GeneRankProblem::new(w, ex, alpha).unwrap()
}

#[test]
fn lanczos_claims_on_renga_100k() {
    let alpha = 0.99;
    let p = renga_problem(100_000, alpha);
    let report = check_theorems(&p, &VerifyOptions::default()).unwrap();
    let sp = &report.spectral;
    assert!((sp.lambda_min_s - (1.0 - alpha)).abs() <= 1e-6, "{}", sp.lambda_min_s);
    assert!(sp.lambda_max_s <= 1.0 + alpha + 1e-6);
    assert!(sp.lambda_min_t >= 1.0 - alpha * alpha - 1e-6 && sp.lambda_max_t <= 1.0 + 1e-6);
    assert!(lemma_witness_residual(&p).unwrap().unwrap() < 1e-12);
    for claim in [
        Claim::SmallestEigenvalueOfS,
        Claim::SpectrumOfSBounded,
        Claim::SpectrumOfTBounded,
        Claim::ConditionNumberReduced,
    ] {
        assert_eq!(report.check(claim).verdict, Verdict::Pass, "{claim:?}: {}", report.check(claim).detail);
    }
    assert!(matches!(report.check(Claim::EigenvalueMapping).verdict, Verdict::Skipped(_)));
}

#[test]
fn polynomial_preconditioner_iterations_on_renga_100k() {
    let p = renga_problem(100_000, 0.99);
    let r = solve(&p, &SolverConfig::new(Method::CgMalpha, 1e-10)).unwrap();
    assert!(r.converged);
    // reference count 53, within 30%
    assert!((r.iterations as f64 - 53.0).abs() <= 0.3 * 53.0, "{}", r.iterations);
    assert!(r.spd_residual_norm1 < 1e-9);
}
