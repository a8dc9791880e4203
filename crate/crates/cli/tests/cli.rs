use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const STAR: &str = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 1\n";

fn generank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_generank"))
        .args(args)
        .output()
        .expect("run generank")
}

fn write_star(dir: &Path) -> String {
    let path = dir.join("star.mtx");
    fs::write(&path, STAR).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn star_solve_matches_hand_solution_for_every_method() {
    let dir = tempfile::tempdir().unwrap();
    let star = write_star(dir.path());
    let ex = dir.path().join("ex.txt");
    fs::write(&ex, "1\n1\n1\n").unwrap();
    // (I − ½WD⁻¹)x = ½e has solution (4/3, 5/6, 5/6)
    let expect = [4.0 / 3.0, 5.0 / 6.0, 5.0 / 6.0];
    for method in ["cg", "pcg-jacobi", "chebyshev", "cg-malpha"] {
        let out = dir.path().join(method);
        let o = generank(&[
            "solve", "--matrix", &star, "--alpha", "0.5", "--tol", "1e-12", "--method", method, "--ex", "file",
            "--ex-file", ex.to_str().unwrap(), "--out-dir", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let csv = fs::read_to_string(out.join("ranking.csv")).unwrap();
        let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), ["1", "2", "3"]);
        for r in &rows {
            let i: usize = r[0].parse::<usize>().unwrap() - 1;
            let score: f64 = r[1].parse().unwrap();
            assert!((score - expect[i]).abs() <= 1e-8 * expect[0], "{method}: {score}");
        }
        let report = json(&out.join("solve.json"));
        assert_eq!(report["converged"], true);
        assert_eq!(report["method"], method);
        assert_eq!(report["provenance"]["command"], "solve");
        assert_eq!(report["expression"]["kind"], "file");
    }
}

#[test]
fn alpha_one_is_rejected_before_any_work() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = generank(&["solve", "--renga-n", "1000000000", "--alpha", "1.0", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
    assert!(!out.exists());
}

#[test]
fn missing_network_is_a_usage_error() {
    let o = generank(&["solve", "--alpha", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = generank(&["solve", "--renga-n", "100", "--alpha", "0.5", "--ex", "file"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_convergence_exits_3_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = generank(&[
        "solve", "--renga-n", "2000", "--alpha", "0.99", "--method", "cg", "--ex", "random", "--max-iter", "3",
        "--out-dir", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let report = json(&out.join("solve.json"));
    assert_eq!(report["converged"], false);
    assert_eq!(report["iterations"], 3);
    assert_eq!(report["residual_history"].as_array().unwrap().len(), 4);
    assert!(out.join("ranking.csv").exists());
}

#[test]
fn renga_regeneration_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = generank(&[
            "generate", "renga", "--n", "1000", "--lambda", "0.9", "--beta", "1", "--seed", "7", "--out-dir",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        files.push(fs::read(out.join("renga.mtx")).unwrap());
        let meta = json(&out.join("renga.meta.json"));
        assert_eq!(meta["generator"]["params"]["seed"], 7);
        assert_eq!(meta["n"], 1000);
    }
    assert_eq!(files[0], files[1]);
    let other = dir.path().join("c");
    generank(&["generate", "renga", "--n", "1000", "--seed", "8", "--out-dir", other.to_str().unwrap()]);
    assert_ne!(fs::read(other.join("renga.mtx")).unwrap(), files[0]);
}

#[test]
fn annotations_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = dir.path().join("genes.tsv");
    fs::write(&tsv, "g1\tGO:1\ng2\tGO:1\ng2\tGO:2\ng3\tGO:2\ng4\n").unwrap();
    let out = dir.path().join("net");
    let o = generank(&["generate", "from-annotations", tsv.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let index = fs::read_to_string(out.join("network.genes.tsv")).unwrap();
    assert!(index.contains("1\tg1") && index.contains("4\tg4"));
    let mtx = fs::read_to_string(out.join("network.mtx")).unwrap();
    assert!(mtx.lines().nth(1).unwrap() == "4 4 2");

    // expression keyed by gene id, listed out of order
    let ex = dir.path().join("ex.csv");
    fs::write(&ex, "gene_id,ex\ng4,0.9\ng1,0.1\ng3,0.2\ng2,0.3\n").unwrap();
    let sol = dir.path().join("sol");
    let o = generank(&[
        "solve", "--matrix", out.join("network.mtx").to_str().unwrap(), "--genes",
        out.join("network.genes.tsv").to_str().unwrap(), "--ex", "file", "--ex-file", ex.to_str().unwrap(),
        "--alpha", "0.5", "--out-dir", sol.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ranking = fs::read_to_string(sol.join("ranking.csv")).unwrap();
    // the isolated gene keeps (1 − α)·ex = 0.45, the largest score
    assert!(ranking.lines().nth(1).unwrap().starts_with("g4,0.45"));
}

#[test]
fn verify_star_passes_every_claim() {
    let dir = tempfile::tempdir().unwrap();
    let star = write_star(dir.path());
    let out = dir.path().join("v");
    let o = generank(&["verify", "--matrix", &star, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.matches("PASS").count(), 28);
    let doc = json(&out.join("verify.json"));
    assert_eq!(doc["passed"], 28);
    assert_eq!(doc["failed"], 0);
    let eig = fs::read_to_string(out.join("eigenvalues_S_alpha0.5.csv")).unwrap();
    let vals: Vec<f64> = eig.lines().map(|l| l.parse().unwrap()).collect();
    for (v, e) in vals.iter().zip([0.5, 1.0, 1.5]) {
        assert!((v - e).abs() < 1e-12);
    }
    let cond = &doc["instances"][0]["reports"][0]["spectral"];
    assert!((cond["cond_s"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((cond["cond_t"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn verify_zero_matrix_skips_the_lemma() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.mtx");
    fs::write(&zero, "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 0\n").unwrap();
    let out = dir.path().join("v");
    let o = generank(&["verify", "--matrix", zero.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&out.join("verify.json"));
    assert_eq!(doc["skipped"], 4);
    assert_eq!(doc["passed"], 24);
    let check = &doc["instances"][0]["reports"][0]["checks"][0];
    assert_eq!(check["claim"], "smallest_eigenvalue_of_s");
    assert_eq!(check["verdict"]["status"], "skipped");
}

#[test]
fn verify_random_batch_all_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v");
    let o = generank(&[
        "verify", "--random-n", "50", "--instances", "20", "--seed", "100", "--out-dir", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let doc = json(&out.join("verify.json"));
    assert_eq!(doc["passed"], 20 * 4 * 7);
}

#[test]
fn bench_smoke_grid_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    let o = generank(&[
        "bench", "--renga-n", "500", "--tol", "1e-14", "--reps", "2", "--out-dir", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("bench.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
    let text = fs::read_to_string(out.join("bench.txt")).unwrap();
    assert_eq!(text.lines().count(), 5);
    let doc = json(&out.join("bench.json"));
    assert_eq!(doc["table"]["spec"]["reps"], 2);
    assert_eq!(doc["source"]["kind"], "renga");
}

#[test]
fn bench_subset_of_methods_and_alphas() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b");
    let o = generank(&[
        "bench", "--renga-n", "800", "--alphas", "0.5,0.9", "--methods", "cg,cg-malpha", "--parallel", "--out-dir",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(out.join("bench.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let o = generank(&["bench", "--renga-n", "800", "--alphas", "0.5,1.2"]);
    assert_eq!(o.status.code(), Some(2));
}
