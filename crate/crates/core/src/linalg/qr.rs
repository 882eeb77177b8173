use super::DensePanel;
use crate::{Error, Result};

/// Relative threshold below which a pivot counts as numerically zero.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// Thin QR factorization `z = q · r` of a tall panel.
#[derive(Debug, Clone)]
pub struct QrThin {
    /// n×k with orthonormal columns.
    pub q: DensePanel,
    /// k×k upper triangular, non-negative diagonal.
    pub r: DensePanel,
    /// Columns of `z` that were numerically dependent on earlier ones. The
    /// matching columns of `q` are filled with re-orthogonalized canonical
    /// vectors and `r[j][j]` is zero.
    pub deficient: Vec<usize>,
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
///
/// Diagonal of `r` is non-negative, so `q` is unique for a full-rank `z`.
/// Dependent columns are replaced by the canonical basis vector with the
/// largest component outside the span built so far (lowest index on ties).
pub fn qr_thin(z: &DensePanel) -> Result<QrThin> {
    let (n, k) = z.shape();
    if n < k {
        return Err(Error::contract(format!("qr_thin needs rows >= cols, got {n}x{k}")));
    }
    z.ensure_finite()?;

    let threshold = RANK_TOLERANCE * z.frobenius_norm();
    let zt = z.transpose();
    let mut q_cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut r = DensePanel::zeros(k, k);
    let mut deficient = Vec::new();

    for j in 0..k {
        let mut v = zt.row(j).to_vec();
        for _ in 0..2 {
            for (i, qi) in q_cols.iter().enumerate() {
                let c = dot(qi, &v);
                axpy(-c, qi, &mut v);
                r[(i, j)] += c;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > threshold && norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            r[(j, j)] = norm;
        } else {
            v = replacement_column(&q_cols, n);
            deficient.push(j);
        }
        q_cols.push(v);
    }

    let mut q = DensePanel::zeros(n, k);
    for (j, col) in q_cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            q[(i, j)] = x;
        }
    }
    Ok(QrThin { q, r, deficient })
}

fn replacement_column(q_cols: &[Vec<f64>], n: usize) -> Vec<f64> {
    // Squared length of e_m projected off span(q) is 1 - sum_i q_i[m]^2.
    let mut best = 0;
    let mut best_res = f64::NEG_INFINITY;
    for m in 0..n {
        let res = 1.0 - q_cols.iter().map(|q| q[m] * q[m]).sum::<f64>();
        if res > best_res + 1e-12 {
            best_res = res;
            best = m;
        }
    }
    let mut v = vec![0.0; n];
    v[best] = 1.0;
    for _ in 0..2 {
        for qi in q_cols {
            let c = dot(qi, &v);
            axpy(-c, qi, &mut v);
        }
    }
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
