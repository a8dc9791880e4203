//! Test-instance generation: range-dependent random graphs, annotation-based
//! adjacency, uniform random graphs and expression vectors.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sparse::SparseSymMatrix;

/// Parameters of the range-dependent random graph model.
///
/// Nodes `i < j` are linked independently with probability `β·λ^{|i−j|−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RengaParams {
    pub n: usize,
    pub lambda: f64,
    pub beta: f64,
    pub seed: u64,
}

impl RengaParams {
    pub fn new(n: usize, lambda: f64, beta: f64, seed: u64) -> Result<Self> {
        let p = RengaParams { n, lambda, beta, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("RENGA needs n >= 2, got {}", self.n)));
        }
        if !(0.0..1.0).contains(&self.lambda) {
            return Err(Error::InvalidParameter(format!(
                "RENGA lambda must lie in [0, 1), got {}",
                self.lambda
            )));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "RENGA beta must lie in (0, 1], got {}",
                self.beta
            )));
        }
        Ok(())
    }

    /// Link probability at index distance `range >= 1`.
    pub fn link_probability(&self, range: usize) -> f64 {
        self.beta * self.lambda.powi((range - 1) as i32)
    }
}

/// Draws a range-dependent random graph.
///
/// Link probabilities decay with range, so each row is sampled by thinning a
/// geometric skip process whose rate is lowered to the probability of the last
/// candidate visited. Each pair is still an independent Bernoulli trial with
/// exactly `β·λ^{range−1}`, but the cost per node is proportional to its degree
/// instead of `n`.
pub fn generate_renga(params: &RengaParams) -> Result<SparseSymMatrix> {
    params.validate()?;
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let expected = (2.0 * params.beta / (1.0 - params.lambda)).ceil() as usize;
    let mut edges = Vec::with_capacity(n.saturating_mul(expected) / 2 + n);

    for i in 0..n - 1 {
        let mut range = 1usize;
        let mut bound = params.link_probability(1);
        loop {
            if bound <= 0.0 {
                break;
            }
            if bound < 1.0 {
                // number of failures before the next candidate, P(success) = bound
                let u: f64 = 1.0 - rng.random::<f64>();
                let skip = (u.ln() / (-bound).ln_1p()).floor();
                if skip >= (n - i) as f64 {
                    break;
                }
                range += skip as usize;
            }
            if i + range >= n {
                break;
            }
            let p = params.link_probability(range);
            if rng.random::<f64>() * bound < p {
                edges.push((i, i + range));
            }
            bound = p;
            range += 1;
        }
    }
    SparseSymMatrix::from_edges(n, &edges)
}

/// Erdős–Rényi graph: each pair linked independently with probability `density`.
pub fn random_adjacency(n: usize, density: f64, seed: u64) -> Result<SparseSymMatrix> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidParameter(format!("density must lie in [0, 1], got {density}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..i {
            if rng.random::<f64>() < density {
                edges.push((i, j));
            }
        }
    }
    SparseSymMatrix::from_edges(n, &edges)
}

/// Gene identifier to annotation identifiers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationTable {
    genes: BTreeMap<String, BTreeSet<String>>,
}

impl AnnotationTable {
    /// Builds a table from one entry per gene; repeating a gene id is an error.
    pub fn from_entries<I, S, A>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, A)>,
        S: Into<String>,
        A: IntoIterator,
        A::Item: Into<String>,
    {
        let mut genes = BTreeMap::new();
        for (gene, terms) in entries {
            let gene = gene.into();
            let terms: BTreeSet<String> = terms.into_iter().map(Into::into).collect();
            if genes.insert(gene.clone(), terms).is_some() {
                return Err(Error::Annotation(format!("duplicate gene id '{gene}'")));
            }
        }
        Ok(AnnotationTable { genes })
    }

    /// Aggregates `gene<TAB>annotation` lines. A line holding only a gene id
    /// declares an unannotated gene. Blank lines and `#` comments are skipped.
    pub fn read_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_tsv_from(BufReader::new(file)).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    pub fn read_tsv_from<R: BufRead>(reader: R) -> Result<Self> {
        let mut genes: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (k, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<input>", e))?;
            let line = line.trim_end_matches(['\r', '\n']);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let gene = fields.next().unwrap_or("").trim();
            if gene.is_empty() {
                return Err(Error::Annotation(format!("line {}: empty gene id", k + 1)));
            }
            let term = fields.next().map(str::trim).unwrap_or("");
            if fields.next().is_some() {
                return Err(Error::Annotation(format!(
                    "line {}: expected gene_id<TAB>annotation_id",
                    k + 1
                )));
            }
            let entry = genes.entry(gene.to_string()).or_default();
            if !term.is_empty() {
                entry.insert(term.to_string());
            }
        }
        Ok(AnnotationTable { genes })
    }

    /// Writes the table in the format read by [`AnnotationTable::read_tsv`].
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (gene, terms) in &self.genes {
            if terms.is_empty() {
                out.push_str(gene);
                out.push('\n');
            }
            for t in terms {
                out.push_str(gene);
                out.push('\t');
                out.push_str(t);
                out.push('\n');
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// Gene ids in row order of the built adjacency.
    pub fn gene_ids(&self) -> impl Iterator<Item = &str> {
        self.genes.keys().map(String::as_str)
    }
}

/// Links two distinct genes iff their annotation sets intersect.
///
/// Rows follow the sorted gene-id order, which is also returned.
pub fn build_adjacency_from_annotations(table: &AnnotationTable) -> Result<(SparseSymMatrix, Vec<String>)> {
    if table.is_empty() {
        return Err(Error::Annotation("annotation table is empty".into()));
    }
    let ids: Vec<String> = table.genes.keys().cloned().collect();
    let mut members: HashMap<&str, Vec<usize>> = HashMap::new();
    for (row, terms) in table.genes.values().enumerate() {
        for t in terms {
            members.entry(t.as_str()).or_default().push(row);
        }
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for rows in members.values() {
        for (a, &i) in rows.iter().enumerate() {
            for &j in &rows[..a] {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let w = SparseSymMatrix::from_edges(ids.len(), &edges)?;
    Ok((w, ids))
}

/// Random annotation table: `n_genes` genes named `g00001…`, each tagged with
/// between 0 and `max_terms` terms drawn from `n_terms` names `t0001…`.
pub fn random_annotations(n_genes: usize, n_terms: usize, max_terms: usize, seed: u64) -> Result<AnnotationTable> {
    if n_genes == 0 || n_terms == 0 {
        return Err(Error::InvalidParameter("need at least one gene and one term".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n_genes).map(|g| {
        let k = rng.random_range(0..=max_terms);
        let terms: Vec<String> = (0..k)
            .map(|_| format!("t{:04}", rng.random_range(0..n_terms)))
            .collect();
        (format!("g{:05}", g + 1), terms)
    });
    AnnotationTable::from_entries(entries.collect::<Vec<_>>())
}

/// How to build the expression vector `ex`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpressionKind {
    /// Every entry `1/n`.
    Uniform,
    /// Random probability vector: uniform draws in (0, 1) normalized to unit sum.
    Random { seed: u64 },
}

pub fn make_expression_vector(kind: &ExpressionKind, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("expression vector needs n >= 1".into()));
    }
    match *kind {
        ExpressionKind::Uniform => Ok(vec![1.0 / n as f64; n]),
        ExpressionKind::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<f64> = (0..n)
                .map(|_| loop {
                    let u: f64 = rng.random();
                    if u > 0.0 {
                        break u;
                    }
                })
                .collect();
            let total: f64 = raw.iter().sum();
            Ok(raw.into_iter().map(|v| v / total).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annotation_tsv_round_trip() {
        let table = random_annotations(40, 12, 3, 5).unwrap();
        let back = AnnotationTable::read_tsv_from(table.to_tsv().as_bytes()).unwrap();
        assert_eq!(back, table);
    }

    fn edge_set(w: &SparseSymMatrix) -> Vec<(usize, usize)> {
        w.lower_triangle().map(|(i, j, _)| (i, j)).collect()
    }

    /// Pairwise Bernoulli sampling over all `i < j`.
    fn naive_renga(p: &RengaParams, rng: &mut ChaCha8Rng) -> SparseSymMatrix {
        let mut edges = Vec::new();
        for i in 0..p.n {
            for j in i + 1..p.n {
                if rng.random::<f64>() < p.link_probability(j - i) {
                    edges.push((i, j));
                }
            }
        }
        SparseSymMatrix::from_edges(p.n, &edges).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(RengaParams::new(1, 0.9, 1.0, 0).is_err());
        assert!(RengaParams::new(10, 1.0, 1.0, 0).is_err());
        assert!(RengaParams::new(10, -0.1, 1.0, 0).is_err());
        assert!(RengaParams::new(10, 0.9, 0.0, 0).is_err());
        assert!(RengaParams::new(10, 0.9, 1.1, 0).is_err());
        assert!(RengaParams::new(10, 0.0, 1.0, 0).is_ok());
    }

    #[test]
    fn path_graph_is_always_present_with_beta_one() {
        for seed in 0..5 {
            let w = generate_renga(&RengaParams::new(300, 0.9, 1.0, seed).unwrap()).unwrap();
            for i in 1..300 {
                assert_eq!(w.get(i, i - 1), 1.0);
            }
        }
    }

    #[test]
    fn lambda_zero_gives_exactly_the_path() {
        let w = generate_renga(&RengaParams::new(50, 0.0, 1.0, 3).unwrap()).unwrap();
        let path: Vec<_> = (1..50).map(|i| (i, i - 1)).collect();
        assert_eq!(edge_set(&w), path);
    }

    #[test]
    fn output_is_a_valid_adjacency() {
        let w = generate_renga(&RengaParams::new(2000, 0.9, 0.7, 11).unwrap()).unwrap();
        w.validate().unwrap();
        crate::model::validate_adjacency(&w).unwrap();
    }

    #[test]
    fn seeded_determinism() {
        let p = RengaParams::new(1000, 0.9, 1.0, 42).unwrap();
        assert_eq!(generate_renga(&p).unwrap(), generate_renga(&p).unwrap());
        let q = RengaParams { seed: 43, ..p };
        assert_ne!(edge_set(&generate_renga(&p).unwrap()), edge_set(&generate_renga(&q).unwrap()));
    }

    #[test]
    fn mean_degree_matches_geometric_series() {
        let w = generate_renga(&RengaParams::new(100_000, 0.9, 1.0, 1).unwrap()).unwrap();
        let mean = w.nnz() as f64 / w.n() as f64;
        // 2 · Σ_{k≥1} 0.9^{k−1} = 20
        assert!((mean - 20.0).abs() <= 0.05 * 20.0, "mean degree {mean}");
    }

    #[test]
    fn skip_sampler_matches_naive_pairwise_sampler() {
        // Compare per-range link frequencies and degree histograms over many draws.
        let p = RengaParams::new(120, 0.8, 0.6, 0).unwrap();
        let draws = 400;
        let max_range = 20;
        let mut fast_ranges = vec![0f64; max_range + 1];
        let mut naive_ranges = vec![0f64; max_range + 1];
        let mut fast_deg = vec![0f64; 40];
        let mut naive_deg = vec![0f64; 40];
        let mut rng = ChaCha8Rng::seed_from_u64(999);
        for s in 0..draws {
            let fast = generate_renga(&RengaParams { seed: s, ..p }).unwrap();
            let naive = naive_renga(&p, &mut rng);
            let pairs = [(&fast, &mut fast_ranges, &mut fast_deg), (&naive, &mut naive_ranges, &mut naive_deg)];
            for (w, ranges, deg) in pairs {
                for (i, j, _) in w.lower_triangle() {
                    if i - j <= max_range {
                        ranges[i - j] += 1.0;
                    }
                }
                for i in 0..w.n() {
                    let d = w.row(i).0.len().min(39);
                    deg[d] += 1.0;
                }
            }
        }
        for k in 1..=max_range {
            let expect = draws as f64 * (p.n - k) as f64 * p.link_probability(k);
            let sd = expect.max(1.0).sqrt();
            for got in [fast_ranges[k], naive_ranges[k]] {
                assert!((got - expect).abs() < 5.0 * sd + 1.0, "range {k}: {got} vs {expect}");
            }
        }
        // total variation distance between degree histograms
        let total = (draws * p.n as u64) as f64;
        let tv: f64 = fast_deg.iter().zip(&naive_deg).map(|(a, b)| (a - b).abs()).sum::<f64>() / (2.0 * total);
        assert!(tv < 0.02, "degree distribution TV distance {tv}");
    }

    #[test]
    fn annotation_example() {
        let t = AnnotationTable::from_entries([
            ("g1", vec!["A"]),
            ("g2", vec!["A", "B"]),
            ("g3", vec!["B"]),
        ])
        .unwrap();
        let (w, ids) = build_adjacency_from_annotations(&t).unwrap();
        assert_eq!(ids, vec!["g1", "g2", "g3"]);
        assert_eq!(edge_set(&w), vec![(1, 0), (2, 1)]);
        assert_eq!(w.get(0, 2), 0.0);
    }

    #[test]
    fn shared_annotation_gives_complete_graph() {
        let t = AnnotationTable::from_entries((0..6).map(|i| (format!("g{i}"), vec!["GO:1"]))).unwrap();
        let (w, _) = build_adjacency_from_annotations(&t).unwrap();
        assert_eq!(w.nnz(), 30);
        assert!(!w.has_diagonal_entries());
    }

    #[test]
    fn unannotated_gene_is_isolated() {
        let t = AnnotationTable::from_entries([
            ("a", vec!["X"]),
            ("b", vec![]),
            ("c", vec!["X"]),
        ])
        .unwrap();
        let (w, _) = build_adjacency_from_annotations(&t).unwrap();
        assert!(w.row(1).0.is_empty());
        assert_eq!(crate::model::build_degree_scaling(&w), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn annotation_errors() {
        assert!(build_adjacency_from_annotations(&AnnotationTable::default()).is_err());
        assert!(AnnotationTable::from_entries([("g", vec!["A"]), ("g", vec!["B"])]).is_err());
    }

    #[test]
    fn annotation_builder_is_order_insensitive() {
        let t = random_annotations(200, 40, 3, 5).unwrap();
        let mut entries: Vec<(String, Vec<String>)> = t
            .genes
            .iter()
            .map(|(g, s)| (g.clone(), s.iter().cloned().collect()))
            .collect();
        entries.reverse();
        entries.swap(3, 77);
        let shuffled = AnnotationTable::from_entries(entries).unwrap();
        assert_eq!(
            build_adjacency_from_annotations(&t).unwrap(),
            build_adjacency_from_annotations(&shuffled).unwrap()
        );
    }

    #[test]
    fn reads_tsv() {
        let text = "# gene\tterm\ng2\tB\ng1\tA\ng2\tA\n\ng4\n";
        let t = AnnotationTable::read_tsv_from(text.as_bytes()).unwrap();
        assert_eq!(t.gene_ids().collect::<Vec<_>>(), vec!["g1", "g2", "g4"]);
        let (w, _) = build_adjacency_from_annotations(&t).unwrap();
        assert_eq!(edge_set(&w), vec![(1, 0)]);
        assert!(AnnotationTable::read_tsv_from("g1\tA\tB\n".as_bytes()).is_err());
    }

    #[test]
    fn expression_vectors() {
        assert_eq!(make_expression_vector(&ExpressionKind::Uniform, 4).unwrap(), vec![0.25; 4]);
        for seed in 0..20 {
            let p = make_expression_vector(&ExpressionKind::Random { seed }, 500).unwrap();
            assert!(p.iter().all(|&v| v > 0.0 && v < 1.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(make_expression_vector(&ExpressionKind::Uniform, 0).is_err());
    }

    #[test]
    fn random_adjacency_density() {
        let w = random_adjacency(400, 0.1, 8).unwrap();
        let pairs = 400.0 * 399.0 / 2.0;
        let dens = w.nnz() as f64 / 2.0 / pairs;
        assert!((dens - 0.1).abs() < 0.01);
    }
}
