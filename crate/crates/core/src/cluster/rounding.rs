use rand::Rng;

use crate::linalg::{svd_small, svd_small_randomized, DensePanel, EXACT_SVD_MAX_K};
use crate::nci::Nci;
use crate::{Error, Result};

/// Max-abs change of the rotation below which the alternation stops.
pub const ROTATION_TOL: f64 = 1e-9;

/// Rounds an orthonormal k×n basis to a hard assignment.
///
/// Alternates between the assignment `Y` and a k×k rotation `X` to reduce
/// `‖X·F − H(Y)‖²_F`, where `H(Y)` has unit-length cluster indicator rows.
/// The rotation starts at identity and `Y` at the row-wise argmax of `Fᵀ`.
/// Each sweep freezes the cluster sizes, moves every node to its best
/// cluster, then sets `X = U·Vᵀ` from the SVD of `H(Y)·Fᵀ`. Stops when `X`
/// moves less than [`ROTATION_TOL`] or after `max_sweeps` sweeps.
pub fn gen_nci<R: Rng + ?Sized>(f: &DensePanel, max_sweeps: usize, rng: &mut R) -> Result<Nci> {
    let (k, n) = f.shape();
    if k == 0 || k > n {
        return Err(Error::contract(format!("basis must be k x n with 1 <= k <= n, got {k}x{n}")));
    }
    let ft = f.transpose();
    let mut x = DensePanel::identity(k);

    let mut assign: Vec<usize> = (0..n).map(|j| argmax(ft.row(j))).collect();
    for _ in 0..max_sweeps {
        let m = ft.matmul(&x.transpose())?;
        let mut sizes = vec![0usize; k];
        for &c in &assign {
            sizes[c] += 1;
        }
        let stay: Vec<f64> = sizes.iter().map(|&s| (s as f64).sqrt()).collect();
        let join: Vec<f64> = sizes.iter().map(|&s| (s as f64 + 1.0).sqrt()).collect();
        for (j, c) in assign.iter_mut().enumerate() {
            let row = m.row(j);
            let mut best = 0;
            let mut best_score = f64::NEG_INFINITY;
            for l in 0..k {
                let score = if l == *c { row[l] / stay[l] } else { row[l] / join[l] };
                if score > best_score {
                    best_score = score;
                    best = l;
                }
            }
            *c = best;
        }

        let target = indicator_times(&assign, k, &ft);
        let svd = if k <= EXACT_SVD_MAX_K {
            svd_small(&target)?
        } else {
            svd_small_randomized(&target, 2, rng)?
        };
        let next = svd.polar_factor();
        let moved = next.max_abs_diff(&x)?;
        x = next;
        if moved < ROTATION_TOL {
            break;
        }
    }
    Nci::new(assign, k)
}

/// `H(Y) · Fᵀ` as a k×k matrix, given `Fᵀ` (n×k). Empty clusters give zero
/// rows.
fn indicator_times(assign: &[usize], k: usize, ft: &DensePanel) -> DensePanel {
    let mut out = DensePanel::zeros(k, ft.cols());
    let mut sizes = vec![0usize; k];
    for (j, &c) in assign.iter().enumerate() {
        sizes[c] += 1;
        for (o, &v) in out.row_mut(c).iter_mut().zip(ft.row(j)) {
            *o += v;
        }
    }
    for (c, &s) in sizes.iter().enumerate() {
        if s > 0 {
            let scale = 1.0 / (s as f64).sqrt();
            out.row_mut(c).iter_mut().for_each(|v| *v *= scale);
        }
    }
    out
}

fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = i;
        }
    }
    best
}

/// `‖X·F − H(Y)‖²_F`, the quantity the rounding reduces.
pub fn rounding_objective(f: &DensePanel, y: &Nci, x: &DensePanel) -> Result<f64> {
    let h = y.normalized_indicator().transpose();
    let xf = x.matmul(f)?;
    Ok(xf
        .as_slice()
        .iter()
        .zip(h.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum())
}

/// Best value of [`rounding_objective`] over rotations for a fixed `y`,
/// attained at the polar factor of `H(Y)·Fᵀ`.
pub fn rounding_objective_best_rotation(f: &DensePanel, y: &Nci) -> Result<f64> {
    if y.n() != f.cols() || y.k() != f.rows() {
        return Err(Error::contract("assignment does not match the basis shape"));
    }
    let target = indicator_times(y.assignment(), y.k(), &f.transpose());
    let x = svd_small(&target)?.polar_factor();
    rounding_objective(f, y, &x)
}
