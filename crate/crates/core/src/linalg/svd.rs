use rand::Rng;
use rand_distr::StandardNormal;

use super::qr::{dot, qr_thin};
use super::DensePanel;
use crate::{Error, Result};

/// Largest k for which callers should prefer the exact Jacobi SVD.
pub const EXACT_SVD_MAX_K: usize = 64;

const MAX_SWEEPS: usize = 80;

/// Full SVD `a = u · diag(sigma) · vᵀ` of a square matrix.
#[derive(Debug, Clone)]
pub struct SmallSvd {
    pub u: DensePanel,
    /// Non-negative, non-increasing.
    pub sigma: Vec<f64>,
    pub v: DensePanel,
}

impl SmallSvd {
    pub fn reconstruct(&self) -> DensePanel {
        let k = self.sigma.len();
        let mut us = self.u.clone();
        for i in 0..k {
            for (j, s) in self.sigma.iter().enumerate() {
                us[(i, j)] *= s;
            }
        }
        us.matmul(&self.v.transpose()).expect("square factors")
    }

    /// `u · vᵀ`, the orthogonal factor of the polar decomposition.
    pub fn polar_factor(&self) -> DensePanel {
        self.u.matmul(&self.v.transpose()).expect("square factors")
    }
}

/// Exact SVD of a square matrix by one-sided Jacobi rotations.
///
/// Deterministic. Left singular vectors for zero singular values are
/// completed from the canonical basis, so the zero matrix gives `u = v = I`.
pub fn svd_small(a: &DensePanel) -> Result<SmallSvd> {
    let k = check_square(a)?;
    // cols[j] is column j of a·v, updated in place by the rotations.
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..k)
        .map(|j| {
            let mut e = vec![0.0; k];
            e[j] = 1.0;
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let sigma_max = norms.iter().cloned().fold(0.0, f64::max);
    let zero_tol = (k as f64) * f64::EPSILON * sigma_max;

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut missing = Vec::new();
    let mut sigma = Vec::with_capacity(k);
    for (slot, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        if norms[j] > zero_tol && norms[j] > 0.0 {
            u_cols.push(cols[j].iter().map(|x| x / norms[j]).collect());
        } else {
            u_cols.push(Vec::new());
            missing.push(slot);
        }
    }
    complete_basis(&mut u_cols, &missing, k);

    let mut u = DensePanel::zeros(k, k);
    let mut vm = DensePanel::zeros(k, k);
    for (slot, &j) in order.iter().enumerate() {
        for i in 0..k {
            u[(i, slot)] = u_cols[slot][i];
            vm[(i, slot)] = v[j][i];
        }
    }
    Ok(SmallSvd { u, sigma, v: vm })
}

/// SVD through a randomized range finder. Intended for k above
/// [`EXACT_SVD_MAX_K`]; the projected core is solved with [`svd_small`].
pub fn svd_small_randomized<R: Rng + ?Sized>(
    a: &DensePanel,
    power_iterations: usize,
    rng: &mut R,
) -> Result<SmallSvd> {
    let k = check_square(a)?;
    let omega = DensePanel::from_fn(k, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut basis = qr_thin(&a.matmul(&omega)?)?.q;
    for _ in 0..power_iterations {
        let back = qr_thin(&a.t_matmul(&basis)?)?.q;
        basis = qr_thin(&a.matmul(&back)?)?.q;
    }
    let core = basis.t_matmul(a)?;
    let inner = svd_small(&core)?;
    Ok(SmallSvd {
        u: basis.matmul(&inner.u)?,
        sigma: inner.sigma,
        v: inner.v,
    })
}

fn check_square(a: &DensePanel) -> Result<usize> {
    let (r, c) = a.shape();
    if r != c || r == 0 {
        return Err(Error::contract(format!("svd_small needs a non-empty square matrix, got {r}x{c}")));
    }
    a.ensure_finite()?;
    Ok(r)
}

fn rotate(vecs: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = vecs.split_at_mut(q);
    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

fn complete_basis(cols: &mut [Vec<f64>], missing: &[usize], k: usize) {
    let mut candidate = 0;
    for &slot in missing {
        loop {
            let mut e = vec![0.0; k];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for other in cols.iter().filter(|c| !c.is_empty()) {
                    let d = dot(other, &e);
                    e.iter_mut().zip(other).for_each(|(x, o)| *x -= d * o);
                }
            }
            let norm = dot(&e, &e).sqrt();
            if norm > 0.5 {
                e.iter_mut().for_each(|x| *x /= norm);
                cols[slot] = e;
                break;
            }
        }
    }
}
