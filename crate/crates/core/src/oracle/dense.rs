use serde::Serialize;

use crate::graph::WalkOperator;
use crate::linalg::DensePanel;
use crate::{Error, Result};

/// Default node cap for dense n×n matrices.
pub const DENSE_MAX_N: usize = 20_000;

/// Dense truncated stopping-probability matrix
/// `S_t = α Σ_{l=0..t} (1 − α)^l W^l`.
///
/// `s[(i, j)]` is the probability that a walk from `i` stops at `j` within
/// `t` steps. Rows sum to `1 − (1 − α)^{t+1}`.
#[derive(Debug, Clone, Serialize)]
pub struct DenseS {
    pub n: usize,
    pub t: usize,
    pub alpha: f64,
    pub beta: f64,
    pub s: DensePanel,
}

impl DenseS {
    /// Mass every row is expected to carry.
    pub fn row_mass(&self) -> f64 {
        1.0 - (1.0 - self.alpha).powi(self.t as i32 + 1)
    }
}

pub fn materialize_s(op: &WalkOperator<'_>, t: usize) -> Result<DenseS> {
    materialize_s_capped(op, t, DENSE_MAX_N)
}

pub fn materialize_s_capped(op: &WalkOperator<'_>, t: usize, max_n: usize) -> Result<DenseS> {
    let n = op.n();
    if n > max_n {
        return Err(Error::CapExceeded {
            what: "dense stopping-probability matrix",
            n,
            cap: max_n,
        });
    }
    let alpha = op.alpha();
    let eye = DensePanel::identity(n);
    let mut s = eye.clone();
    for _ in 0..t {
        let mut next = op.apply(&s)?;
        next.scale(1.0 - alpha);
        next.axpy(1.0, &eye)?;
        s = next;
    }
    s.scale(alpha);
    Ok(DenseS {
        n,
        t,
        alpha,
        beta: op.beta(),
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AttributedGraph;

    #[test]
    fn self_loop_node() {
        let g = AttributedGraph::from_edges(1, [(0, 0)]).unwrap();
        let op = WalkOperator::new(&g, 0.3, 0.5).unwrap();
        for t in [0, 3, 60] {
            let s = materialize_s(&op, t).unwrap();
            assert!((s.s[(0, 0)] - (1.0 - 0.7f64.powi(t as i32 + 1))).abs() < 1e-15);
        }
    }

    #[test]
    fn two_cycle_geometric_limit() {
        let g = AttributedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let op = WalkOperator::new(&g, 0.5, 0.0).unwrap();
        let s = materialize_s(&op, 80).unwrap();
        assert!((s.s[(0, 0)] - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.s[(0, 1)] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_depth_is_scaled_identity() {
        let g = AttributedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        let s = materialize_s(&op, 0).unwrap();
        let mut want = DensePanel::identity(3);
        want.scale(0.2);
        assert_eq!(s.s, want);
    }

    #[test]
    fn refuses_above_cap() {
        let g = AttributedGraph::from_edges(5, [(0, 1)]).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        assert!(matches!(materialize_s_capped(&op, 2, 4), Err(Error::CapExceeded { n: 5, cap: 4, .. })));
    }
}
