//! Compressed sparse-row storage for symmetric matrices.
//!
//! Both triangles are stored so that every row is complete and SpMV can be
//! split by rows across threads without any cross-row reduction. Each row is
//! always accumulated left to right, so results do not depend on the number of
//! worker threads.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Rows below this count are multiplied on the calling thread.
const PARALLEL_ROW_THRESHOLD: usize = 20_000;
const ROWS_PER_TASK: usize = 2_048;

/// Symmetric sparse matrix in CSR form with full (both-triangle) storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
    /// Every stored value is exactly 1, so SpMV can skip the value array.
    unit: bool,
}

impl SparseSymMatrix {
    /// Builds a matrix from raw CSR arrays, validating every structural invariant.
    pub fn from_csr(
        n: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let unit = values.iter().all(|&v| v == 1.0);
        let m = SparseSymMatrix {
            n,
            row_offsets,
            col_indices,
            values,
            unit,
        };
        m.validate()?;
        Ok(m)
    }

    /// The n×n zero matrix.
    pub fn zeros(n: usize) -> Self {
        SparseSymMatrix {
            n,
            row_offsets: vec![0; n + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
            unit: true,
        }
    }

    /// Builds a symmetric matrix from one triangle's worth of entries.
    ///
    /// Each `(i, j, v)` is stored at both `(i, j)` and `(j, i)`. Listing the same
    /// unordered pair twice is a [`Error::DuplicateEntry`].
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut counts = vec![0usize; n];
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i}, {j}) outside a {n}x{n} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i}, {j}) is not finite"
                )));
            }
            counts[i] += 1;
            if i != j {
                counts[j] += 1;
            }
        }

        let mut row_offsets = Vec::with_capacity(n + 1);
        row_offsets.push(0);
        for c in &counts {
            row_offsets.push(row_offsets.last().unwrap() + c);
        }
        let nnz = row_offsets[n];
        let mut cursor = row_offsets[..n].to_vec();
        let mut entries = vec![(0usize, 0.0f64); nnz];
        for &(i, j, v) in triplets {
            entries[cursor[i]] = (j, v);
            cursor[i] += 1;
            if i != j {
                entries[cursor[j]] = (i, v);
                cursor[j] += 1;
            }
        }

        for i in 0..n {
            let row = &mut entries[row_offsets[i]..row_offsets[i + 1]];
            row.sort_unstable_by_key(|&(j, _)| j);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry { row: i, col: w[0].0 });
            }
        }

        let (col_indices, values): (Vec<usize>, Vec<f64>) = entries.into_iter().unzip();
        let unit = values.iter().all(|&v| v == 1.0);
        Ok(SparseSymMatrix {
            n,
            row_offsets,
            col_indices,
            values,
            unit,
        })
    }

    /// Builds an unweighted adjacency matrix from undirected edges `(i, j)`, `i != j`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(i, _)) = edges.iter().find(|(i, j)| i == j) {
            return Err(Error::InvalidAdjacency(format!("self-loop at node {i}")));
        }
        let triplets: Vec<_> = edges.iter().map(|&(i, j)| (i, j, 1.0)).collect();
        Self::from_triplets(n, &triplets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored entries (both triangles).
    pub fn nnz(&self) -> usize {
        self.col_indices.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_offsets[i]..self.row_offsets[i + 1];
        (&self.col_indices[range.clone()], &self.values[range])
    }

    /// Value at `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map(|k| vals[k]).unwrap_or(0.0)
    }

    /// Iterates the stored entries with `i >= j`, row by row.
    pub fn lower_triangle(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter()
                .zip(vals)
                .take_while(move |(&j, _)| j <= i)
                .map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).1.iter().sum()).collect()
    }

    pub fn has_diagonal_entries(&self) -> bool {
        (0..self.n).any(|i| self.row(i).0.binary_search(&i).is_ok())
    }

    /// Checks the CSR and symmetry invariants.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.row_offsets.len() != n + 1 {
            return Err(Error::InvalidMatrix(format!(
                "row_offsets has length {}, expected {}",
                self.row_offsets.len(),
                n + 1
            )));
        }
        if self.row_offsets[0] != 0 {
            return Err(Error::InvalidMatrix("row_offsets[0] must be 0".into()));
        }
        if self.col_indices.len() != self.values.len() {
            return Err(Error::InvalidMatrix(
                "col_indices and values differ in length".into(),
            ));
        }
        if self.row_offsets[n] != self.col_indices.len() {
            return Err(Error::InvalidMatrix(format!(
                "row_offsets[n] = {} but {} entries are stored",
                self.row_offsets[n],
                self.col_indices.len()
            )));
        }
        if self.row_offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidMatrix("row_offsets must be nondecreasing".into()));
        }
        for i in 0..n {
            let (cols, vals) = self.row(i);
            if let Some(&j) = cols.iter().find(|&&j| j >= n) {
                return Err(Error::InvalidMatrix(format!(
                    "column index {j} in row {i} is out of range"
                )));
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMatrix(format!(
                    "column indices of row {i} are not strictly increasing"
                )));
            }
            if vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidMatrix(format!("row {i} has a non-finite value")));
            }
        }
        for i in 0..n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let (mcols, mvals) = self.row(j);
                match mcols.binary_search(&i) {
                    Ok(k) if mvals[k].to_bits() == v.to_bits() => {}
                    _ => return Err(Error::Asymmetric { row: i, col: j }),
                }
            }
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: len,
            });
        }
        Ok(())
    }

    /// `w = A v`.
    pub fn spmv(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n];
        self.spmv_into(v, &mut out)?;
        Ok(out)
    }

    pub fn spmv_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        self.spmv_map(v, out, |_, acc| acc)
    }

    /// `out = diag(s) · A · diag(s) · v`, fused into a single pass over the entries.
    pub fn spmv_scaled_into(&self, scale: &[f64], v: &[f64], out: &mut [f64]) -> Result<()> {
        self.spmv_scaled_map(scale, v, out, |i, acc| scale[i] * acc)
    }

    /// `out_i = f(i, (A v)_i)`.
    pub fn spmv_map<F>(&self, v: &[f64], out: &mut [f64], f: F) -> Result<()>
    where
        F: Fn(usize, f64) -> f64 + Sync,
    {
        self.check_len(v.len())?;
        self.check_len(out.len())?;
        if self.unit {
            self.for_each_row(out, |i, cols, _| f(i, cols.iter().map(|&j| v[j]).sum()));
        } else {
            self.for_each_row(out, |i, cols, vals| {
                f(i, cols.iter().zip(vals).map(|(&j, &a)| a * v[j]).sum())
            });
        }
        Ok(())
    }

    /// `out_i = f(i, Σ_j a_ij s_j v_j)`.
    pub fn spmv_scaled_map<F>(&self, scale: &[f64], v: &[f64], out: &mut [f64], f: F) -> Result<()>
    where
        F: Fn(usize, f64) -> f64 + Sync,
    {
        self.check_len(scale.len())?;
        self.check_len(v.len())?;
        self.check_len(out.len())?;
        if self.unit {
            self.for_each_row(out, |i, cols, _| f(i, cols.iter().map(|&j| scale[j] * v[j]).sum()));
        } else {
            self.for_each_row(out, |i, cols, vals| {
                f(i, cols.iter().zip(vals).map(|(&j, &a)| a * scale[j] * v[j]).sum())
            });
        }
        Ok(())
    }

    fn for_each_row<F>(&self, out: &mut [f64], f: F)
    where
        F: Fn(usize, &[usize], &[f64]) -> f64 + Sync,
    {
        let row = |i: usize, slot: &mut f64| {
            let (cols, vals) = self.row(i);
            *slot = f(i, cols, vals);
        };
        if self.n < PARALLEL_ROW_THRESHOLD {
            out.iter_mut().enumerate().for_each(|(i, o)| row(i, o));
        } else {
            out.par_iter_mut()
                .with_min_len(ROWS_PER_TASK)
                .enumerate()
                .for_each(|(i, o)| row(i, o));
        }
    }
}
