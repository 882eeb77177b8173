use crate::linalg::DensePanel;
use crate::{Error, Result};

/// Compressed sparse row matrix with `f64` values.
///
/// Column indices are sorted and unique within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            indptr: vec![0; rows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicate
    /// coordinates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut t: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        if let Some(&(r, c, _)) = t.iter().find(|&&(r, c, _)| r >= rows || c >= cols) {
            return Err(Error::contract(format!(
                "entry ({r}, {c}) outside a {rows}x{cols} matrix"
            )));
        }
        t.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut values: Vec<f64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            indices.push(c);
            values.push(v);
            indptr[r + 1] += 1;
            last = Some((r, c));
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Ok(Self {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    /// Assembles a matrix from raw CSR arrays, checking the structure.
    pub fn from_csr(
        rows: usize,
        cols: usize,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if indptr.len() != rows + 1 || indptr[0] != 0 || indptr[rows] != indices.len() {
            return Err(Error::contract("malformed row pointer array"));
        }
        if indices.len() != values.len() {
            return Err(Error::contract("index and value arrays differ in length"));
        }
        for r in 0..rows {
            if indptr[r] > indptr[r + 1] {
                return Err(Error::contract("row pointers must be non-decreasing"));
            }
            let row = &indices[indptr[r]..indptr[r + 1]];
            if row.windows(2).any(|w| w[0] >= w[1]) || row.last().is_some_and(|&c| c >= cols) {
                return Err(Error::contract(format!("row {r} has unsorted or out-of-range columns")));
            }
        }
        Ok(Self {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[span.clone()], &self.values[span])
    }

    /// Positions of row `i` within the stored entries.
    pub fn row_span(&self, i: usize) -> std::ops::Range<usize> {
        self.indptr[i]..self.indptr[i + 1]
    }

    pub fn row_len(&self, i: usize) -> usize {
        self.indptr[i + 1] - self.indptr[i]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (idx, val) = self.row(i);
        idx.binary_search(&j).map_or(0.0, |p| val[p])
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|i| self.row(i).1.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for (&c, &v) in self.indices.iter().zip(&self.values) {
            sums[c] += v;
        }
        sums
    }

    /// Scales row `i` by `factors[i]`.
    pub fn scale_rows(&mut self, factors: &[f64]) {
        for (i, &f) in factors.iter().enumerate().take(self.rows) {
            let span = self.indptr[i]..self.indptr[i + 1];
            self.values[span].iter_mut().for_each(|v| *v *= f);
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let mut next = counts.clone();
        let mut indices = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for r in 0..self.rows {
            let (idx, val) = self.row(r);
            for (&c, &v) in idx.iter().zip(val) {
                indices[next[c]] = r;
                values[next[c]] = v;
                next[c] += 1;
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            indptr: counts,
            indices,
            values,
        }
    }

    /// `self · x` for a dense panel with `self.cols()` rows.
    pub fn mul_panel(&self, x: &DensePanel) -> Result<DensePanel> {
        if x.rows() != self.cols {
            return Err(Error::contract(format!(
                "cannot multiply {}x{} sparse by {}x{} panel",
                self.rows,
                self.cols,
                x.rows(),
                x.cols()
            )));
        }
        let c = x.cols();
        let mut out = DensePanel::zeros(self.rows, c);
        for i in 0..self.rows {
            let (idx, val) = self.row(i);
            let dst = out.row_mut(i);
            for (&j, &w) in idx.iter().zip(val) {
                for (d, &s) in dst.iter_mut().zip(x.row(j)) {
                    *d += w * s;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ · x` for a dense panel with `self.rows()` rows, by scattering
    /// rows in index order.
    pub fn t_mul_panel(&self, x: &DensePanel) -> Result<DensePanel> {
        if x.rows() != self.rows {
            return Err(Error::contract(format!(
                "cannot multiply ({}x{})^T sparse by {}x{} panel",
                self.rows,
                self.cols,
                x.rows(),
                x.cols()
            )));
        }
        let c = x.cols();
        let mut out = DensePanel::zeros(self.cols, c);
        for i in 0..self.rows {
            let (idx, val) = self.row(i);
            let src = x.row(i);
            for (&j, &w) in idx.iter().zip(val) {
                for (d, &s) in out.row_mut(j).iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> DensePanel {
        let mut d = DensePanel::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (idx, val) = self.row(i);
            for (&j, &v) in idx.iter().zip(val) {
                d[(i, j)] = v;
            }
        }
        d
    }
}
