use crate::graph::WalkOperator;
use crate::linalg::{qr_thin, DensePanel};
use crate::{Error, Result};

/// Tolerance of [`has_converged`] used by the clustering loop.
pub const CONVERGENCE_TOL: f64 = 1e-8;

/// Largest accepted deviation of an input basis from orthonormal rows.
pub const ORTHONORMAL_INPUT_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct OrthoStep {
    /// k×n, orthonormal rows.
    pub basis: DensePanel,
    /// k×k upper triangular factor of the QR step.
    pub lambda: DensePanel,
    /// Rows that had to be replaced because the step lost rank.
    pub deficient: Vec<usize>,
}

/// One orthogonal iteration: `Q R = W · prevᵀ`, next basis `Qᵀ`.
pub fn ortho_step(op: &WalkOperator<'_>, prev: &DensePanel) -> Result<OrthoStep> {
    if prev.cols() != op.n() {
        return Err(Error::contract(format!(
            "basis has {} columns, graph has {} nodes",
            prev.cols(),
            op.n()
        )));
    }
    let err = prev.row_orthonormality_error();
    if err > ORTHONORMAL_INPUT_TOL {
        return Err(Error::contract(format!("basis rows are not orthonormal (error {err:e})")));
    }
    let z = op.apply(&prev.transpose())?;
    let qr = qr_thin(&z)?;
    Ok(OrthoStep {
        basis: qr.q.transpose(),
        lambda: qr.r,
        deficient: qr.deficient,
    })
}

/// Whether two row bases agree within `tol` after aligning the sign of each
/// row of `next` with the matching row of `prev`.
pub fn has_converged(next: &DensePanel, prev: &DensePanel, tol: f64) -> bool {
    if next.shape() != prev.shape() {
        return false;
    }
    (0..next.rows()).all(|i| {
        let (a, b) = (next.row(i), prev.row(i));
        let sign = if a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        a.iter().zip(b).all(|(x, y)| (sign * x - y).abs() < tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AttributedGraph;

    #[test]
    fn uniform_row_is_fixed() {
        let g = AttributedGraph::new(
            4,
            2,
            [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)],
            [(0, 0, 1.0), (2, 1, 1.0), (3, 0, 0.5)],
        )
        .unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        let f = DensePanel::filled(1, 4, 0.5);
        let step = ortho_step(&op, &f).unwrap();
        assert!(has_converged(&step.basis, &f, 1e-12));
        assert!((step.lambda[(0, 0)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_cycle_spans_both_eigenvectors() {
        let g = AttributedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.0).unwrap();
        let mut f = DensePanel::identity(2);
        for _ in 0..3 {
            f = ortho_step(&op, &f).unwrap().basis;
        }
        // Any orthonormal 2×2 basis spans R^2; check it stays orthonormal.
        assert!(f.row_orthonormality_error() < 1e-12);
    }

    #[test]
    fn sign_flips_count_as_converged() {
        let a = DensePanel::from_rows(&[[0.6, 0.8], [0.8, -0.6]]).unwrap();
        let mut b = a.clone();
        b.row_mut(1).iter_mut().for_each(|v| *v = -*v);
        assert!(has_converged(&a, &a, 1e-8));
        assert!(has_converged(&b, &a, 1e-8));
    }

    #[test]
    fn rotation_is_not_converged() {
        let a = DensePanel::identity(2);
        let t: f64 = 0.1;
        let b = DensePanel::from_rows(&[[t.cos(), t.sin()], [-t.sin(), t.cos()]]).unwrap();
        assert!(!has_converged(&b, &a, 1e-8));
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let g = AttributedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.0).unwrap();
        let f = DensePanel::filled(1, 2, 1.0);
        assert!(matches!(ortho_step(&op, &f), Err(Error::Contract(_))));
    }
}
