//! The GeneRank problem instance and its operators.
//!
//! With adjacency `W`, degree scaling `D` and damping factor `α`, the GeneRank
//! vector `x` solves `(I − αWD⁻¹)x = (1−α)ex`. Two symmetric reformulations are
//! used by the solvers:
//!
//! ```text
//! (D − αW) x̂ = (1−α) ex                 x̂ = D⁻¹ x
//! (I − J_α) x̄ = (1−α) D^{-1/2} ex       x̄ = D^{-1/2} x,   J_α = α D^{-1/2} W D^{-1/2}
//! ```
//!
//! On top of `S_α = I − J_α` the preconditioner `M_α = I + J_α` gives the
//! preconditioned operator `T_α = M_α S_α = I − J_α²`. None of these is ever
//! assembled; every application is a diagonal scaling around one SpMV with `W`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sparse::SparseSymMatrix;

/// Diagonal of `D`: the row sums of `W`, with 1 substituted for isolated nodes.
pub fn build_degree_scaling(w: &SparseSymMatrix) -> Vec<f64> {
    w.row_sums()
        .into_iter()
        .map(|deg| if deg > 0.0 { deg } else { 1.0 })
        .collect()
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// Rejects anything but a symmetric 0/1 matrix with an empty diagonal.
pub fn validate_adjacency(w: &SparseSymMatrix) -> Result<()> {
    if let Some(v) = w.values().iter().find(|&&v| v != 1.0) {
        return Err(Error::InvalidAdjacency(format!(
            "stored entries must equal 1, found {v}"
        )));
    }
    if w.has_diagonal_entries() {
        return Err(Error::InvalidAdjacency("self-loops are not allowed".into()));
    }
    Ok(())
}

pub fn validate_expression(ex: &[f64]) -> Result<()> {
    match ex.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        Some(i) => Err(Error::InvalidExpression(format!(
            "entry {} is {}, entries must be finite and nonnegative",
            i + 1,
            ex[i]
        ))),
        None => Ok(()),
    }
}

/// One GeneRank instance: adjacency, degree scaling, damping factor and expression data.
///
/// The adjacency and expression vectors are shared, so [`GeneRankProblem::with_alpha`]
/// is cheap even for very large graphs.
#[derive(Debug, Clone)]
pub struct GeneRankProblem {
    adjacency: Arc<SparseSymMatrix>,
    degrees: Arc<Vec<f64>>,
    inv_sqrt_degrees: Arc<Vec<f64>>,
    expression: Arc<Vec<f64>>,
    alpha: f64,
}

impl GeneRankProblem {
    pub fn new(adjacency: impl Into<Arc<SparseSymMatrix>>, expression: Vec<f64>, alpha: f64) -> Result<Self> {
        let adjacency = adjacency.into();
        check_alpha(alpha)?;
        validate_adjacency(&adjacency)?;
        if expression.len() != adjacency.n() {
            return Err(Error::DimensionMismatch {
                expected: adjacency.n(),
                found: expression.len(),
            });
        }
        validate_expression(&expression)?;
        let degrees = build_degree_scaling(&adjacency);
        let inv_sqrt_degrees = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
        Ok(GeneRankProblem {
            adjacency,
            degrees: Arc::new(degrees),
            inv_sqrt_degrees: Arc::new(inv_sqrt_degrees),
            expression: Arc::new(expression),
            alpha,
        })
    }

    /// Same network and expression data with a different damping factor.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(GeneRankProblem {
            alpha,
            ..self.clone()
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.n()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn adjacency(&self) -> &SparseSymMatrix {
        &self.adjacency
    }

    pub fn shared_adjacency(&self) -> Arc<SparseSymMatrix> {
        Arc::clone(&self.adjacency)
    }

    /// Diagonal of `D`.
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Diagonal of `D^{-1/2}`.
    pub fn inv_sqrt_degrees(&self) -> &[f64] {
        &self.inv_sqrt_degrees
    }

    pub fn expression(&self) -> &[f64] {
        &self.expression
    }

    pub fn has_edges(&self) -> bool {
        self.adjacency.nnz() > 0
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: len,
            });
        }
        Ok(())
    }

    fn apply_scaled<F>(&self, v: &[f64], out: &mut [f64], f: F) -> Result<()>
    where
        F: Fn(usize, f64) -> f64 + Sync,
    {
        let s = &self.inv_sqrt_degrees;
        let alpha = self.alpha;
        self.adjacency
            .spmv_scaled_map(s, v, out, |i, acc| f(i, alpha * s[i] * acc))
    }

    /// `out = J_α v`.
    pub fn apply_j_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        self.apply_scaled(v, out, |_, jv| jv)
    }

    /// `out = S_α v = v − J_α v`.
    pub fn apply_s_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        self.apply_scaled(v, out, |i, jv| v[i] - jv)
    }

    /// `out = M_α v = v + J_α v`.
    pub fn apply_m_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        self.apply_scaled(v, out, |i, jv| v[i] + jv)
    }

    /// `out = T_α v = v − J_α(J_α v)`; `scratch` receives `J_α v`.
    pub fn apply_t_into(&self, v: &[f64], scratch: &mut [f64], out: &mut [f64]) -> Result<()> {
        self.apply_j_into(v, scratch)?;
        self.apply_scaled(scratch, out, |i, jjv| v[i] - jjv)
    }

    /// `out = (D − αW) v`.
    pub fn apply_spd_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        let d = &self.degrees;
        let alpha = self.alpha;
        self.adjacency
            .spmv_map(v, out, |i, wv| d[i] * v[i] - alpha * wv)
    }

    /// Right-hand side `(1−α) ex` of the SPD system.
    pub fn assemble_spd_rhs(&self) -> Vec<f64> {
        let c = 1.0 - self.alpha;
        self.expression.iter().map(|e| c * e).collect()
    }

    /// Right-hand side `b_α = (1−α) D^{-1/2} ex` of the scaled system.
    pub fn assemble_scaled_rhs(&self) -> Vec<f64> {
        let c = 1.0 - self.alpha;
        self.expression
            .iter()
            .zip(self.inv_sqrt_degrees.iter())
            .map(|(e, s)| c * s * e)
            .collect()
    }

    /// `‖(1−α)ex − (D − αW)x̂‖₁`.
    pub fn spd_residual_norm1(&self, xhat: &[f64]) -> Result<f64> {
        let mut ax = vec![0.0; self.n()];
        self.apply_spd_into(xhat, &mut ax)?;
        Ok(self
            .assemble_spd_rhs()
            .iter()
            .zip(&ax)
            .map(|(b, a)| (b - a).abs())
            .sum())
    }

    /// `‖(I − αWD⁻¹)x − (1−α)ex‖₁`, evaluated directly on the GeneRank vector.
    pub fn nonsymmetric_residual_norm1(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x.len())?;
        let scaled: Vec<f64> = x.iter().zip(self.degrees.iter()).map(|(v, d)| v / d).collect();
        let wx = self.adjacency.spmv(&scaled)?;
        let c = 1.0 - self.alpha;
        Ok(x.iter()
            .zip(&wx)
            .zip(self.expression.iter())
            .map(|((xi, wi), e)| (xi - self.alpha * wi - c * e).abs())
            .sum())
    }

    pub fn operator(&self, kind: OperatorKind) -> OperatorHandle<'_> {
        OperatorHandle { problem: self, kind }
    }
}

/// The symmetric operators attached to a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// `J_α = α D^{-1/2} W D^{-1/2}`
    J,
    /// `S_α = I − J_α`
    S,
    /// `M_α = I + J_α`
    M,
    /// `T_α = M_α S_α = I − J_α²`
    T,
    /// `D − αW`
    Spd,
}

impl OperatorKind {
    pub fn label(self) -> &'static str {
        match self {
            OperatorKind::J => "J",
            OperatorKind::S => "S",
            OperatorKind::M => "M",
            OperatorKind::T => "T",
            OperatorKind::Spd => "D-aW",
        }
    }
}

/// Matrix-free application of one operator of a [`GeneRankProblem`].
#[derive(Debug, Clone, Copy)]
pub struct OperatorHandle<'a> {
    problem: &'a GeneRankProblem,
    kind: OperatorKind,
}

impl<'a> OperatorHandle<'a> {
    pub fn problem(&self) -> &'a GeneRankProblem {
        self.problem
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.problem.n()
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        let p = self.problem;
        match self.kind {
            OperatorKind::J => p.apply_j_into(v, out),
            OperatorKind::S => p.apply_s_into(v, out),
            OperatorKind::M => p.apply_m_into(v, out),
            OperatorKind::T => {
                let mut scratch = vec![0.0; p.n()];
                p.apply_t_into(v, &mut scratch, out)
            }
            OperatorKind::Spd => p.apply_spd_into(v, out),
        }
    }
}

/// Which linear system a solver iterated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemForm {
    /// `(I − αWD⁻¹)x = (1−α)ex`, unknown `x`.
    Nonsymmetric,
    /// `(D − αW)x̂ = (1−α)ex`, unknown `x̂ = D⁻¹x`.
    Spd,
    /// `S_α x̄ = b_α` (optionally preconditioned by `M_α`), unknown `x̄ = D^{-1/2}x`.
    Scaled,
}

/// The GeneRank vector in all three representations.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Solution {
    pub x: Vec<f64>,
    pub xhat: Vec<f64>,
    pub xbar: Vec<f64>,
    pub source_form: SystemForm,
}

/// Maps the unknown `u` of `form` back to `x`, `x̂` and `x̄`.
pub fn recover_solution(form: SystemForm, u: Vec<f64>, d: &[f64]) -> Result<Solution> {
    if u.len() != d.len() {
        return Err(Error::DimensionMismatch {
            expected: d.len(),
            found: u.len(),
        });
    }
    if let Some(bad) = d.iter().find(|&&di| !(di > 0.0 && di.is_finite())) {
        return Err(Error::Internal(format!("nonpositive degree scaling entry {bad}")));
    }
    let x: Vec<f64> = match form {
        SystemForm::Nonsymmetric => u.clone(),
        SystemForm::Spd => u.iter().zip(d).map(|(v, di)| di * v).collect(),
        SystemForm::Scaled => u.iter().zip(d).map(|(v, di)| di.sqrt() * v).collect(),
    };
    let xhat = match form {
        SystemForm::Spd => u.clone(),
        _ => x.iter().zip(d).map(|(v, di)| v / di).collect(),
    };
    let xbar = match form {
        SystemForm::Scaled => u,
        _ => x.iter().zip(d).map(|(v, di)| v / di.sqrt()).collect(),
    };
    Ok(Solution {
        x,
        xhat,
        xbar,
        source_form: form,
    })
}

/// Gene indices ordered by descending score; equal scores keep ascending index order.
pub fn rank_genes(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]));
    order
}
