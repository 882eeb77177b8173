use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::dense::{materialize_s_capped, DENSE_MAX_N};
use crate::cluster::{has_converged, AcminParams, CONVERGENCE_TOL};
use crate::graph::{AttributedGraph, WalkOperator};
use crate::linalg::{kmeans, qr_thin, DensePanel};
use crate::nci::Nci;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct UscResult {
    pub nci: Nci,
    /// Orthogonal iterations performed on the dense matrix.
    pub iterations: usize,
    /// Whether the eigenbasis settled before the iteration limit. Complex
    /// dominant eigenvalues show up as a basis that never settles.
    pub converged: bool,
    pub kmeans_sweeps: usize,
}

/// Unnormalized spectral clustering on the dense truncated stopping matrix.
///
/// Materializes `S_t`, runs `params.max_iterations` orthogonal iterations
/// on it from a Gaussian start, then k-means on the rows of the basis with
/// `params.rounding_iterations` sweeps.
pub fn usc(graph: &AttributedGraph, params: &AcminParams) -> Result<UscResult> {
    usc_capped(graph, params, DENSE_MAX_N)
}

pub fn usc_capped(graph: &AttributedGraph, params: &AcminParams, max_n: usize) -> Result<UscResult> {
    params.validate()?;
    let (n, k) = (graph.n(), params.k);
    if k > n {
        return Err(Error::contract(format!("k = {k} exceeds the node count {n}")));
    }
    let op = WalkOperator::new(graph, params.alpha, params.beta)?;
    let s = materialize_s_capped(&op, params.truncation_depth(), max_n)?.s;

    let mut rng = StdRng::seed_from_u64(params.seed);
    let start = DensePanel::from_fn(n, k, |_, _| StandardNormal.sample(&mut rng));
    let mut basis = qr_thin(&start)?.q;
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..params.max_iterations {
        let next = qr_thin(&s.matmul(&basis)?)?.q;
        iterations += 1;
        // has_converged compares row bases.
        let settled = has_converged(&next.transpose(), &basis.transpose(), CONVERGENCE_TOL);
        basis = next;
        if settled {
            converged = true;
            break;
        }
    }

    let km = kmeans(&basis, k, params.rounding_iterations, &mut rng)?;
    Ok(UscResult {
        nci: km.nci,
        iterations,
        converged,
        kmeans_sweeps: km.sweeps,
    })
}
