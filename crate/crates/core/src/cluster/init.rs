use rand::Rng;

use crate::graph::WalkOperator;
use crate::linalg::DensePanel;
use crate::nci::Nci;
use crate::{Error, Result};

/// Candidate centers per cluster considered by [`init_nci`].
pub const CANDIDATES_PER_CLUSTER: usize = 5;

/// Relative gap below which two scores count as tied.
pub const TIE_TOL: f64 = 1e-12;

fn beats(a: f64, b: f64) -> bool {
    a - b > TIE_TOL * a.abs().max(b.abs())
}

/// Greedy seeding from high in-degree nodes.
///
/// The `5k` nodes of largest in-degree are candidates. Truncated random walk
/// with restart scores on the topology alone are computed from every
/// candidate, the `k` candidates that collect the most total score become
/// centers, and each node joins the center that scores it highest. Nodes no
/// center reaches go to the first center. All ties, up to a relative
/// [`TIE_TOL`], break towards the smaller node id (or cluster index).
pub fn init_nci(op: &WalkOperator<'_>, k: usize) -> Result<Nci> {
    let n = op.n();
    if k == 0 || k > n {
        return Err(Error::contract(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let in_degree = op.graph().in_degree();
    let mut candidates: Vec<usize> = (0..n).collect();
    candidates.sort_by(|&a, &b| in_degree[b].cmp(&in_degree[a]).then(a.cmp(&b)));
    candidates.truncate((CANDIDATES_PER_CLUSTER * k).min(n));

    let scores = restart_scores(op, &candidates)?;

    let mut mass = vec![0.0; candidates.len()];
    for j in 0..n {
        for (m, &s) in mass.iter_mut().zip(scores.row(j)) {
            *m += s;
        }
    }
    // Candidates are already in id order among equal in-degrees, but not
    // overall, so each pick scans for the best remaining one.
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    remaining.sort_by_key(|&i| candidates[i]);
    let mut centers = Vec::with_capacity(k);
    for _ in 0..k {
        let mut pick = 0;
        for (pos, &i) in remaining.iter().enumerate().skip(1) {
            if beats(mass[i], mass[remaining[pick]]) {
                pick = pos;
            }
        }
        centers.push(remaining.remove(pick));
    }

    let assign = (0..n)
        .map(|j| {
            let row = scores.row(j);
            let mut best = 0;
            let mut best_score = 0.0;
            for (c, &col) in centers.iter().enumerate() {
                if beats(row[col], best_score) {
                    best_score = row[col];
                    best = c;
                }
            }
            best
        })
        .collect();
    Nci::new(assign, k)
}

/// `α Σ_{l ≤ t} ((1 − α) P_V)^l` applied to the indicator columns of
/// `sources`, giving an n × |sources| panel.
pub(crate) fn restart_scores(op: &WalkOperator<'_>, sources: &[usize]) -> Result<DensePanel> {
    let alpha = op.alpha();
    let mut seed = DensePanel::zeros(op.n(), sources.len());
    for (i, &s) in sources.iter().enumerate() {
        seed[(s, i)] = 1.0;
    }
    let mut pi = seed.clone();
    for _ in 0..op.truncation_depth() {
        let mut next = op.apply_pv(&pi)?;
        next.scale(1.0 - alpha);
        next.axpy(1.0, &seed)?;
        pi = next;
    }
    pi.scale(alpha);
    Ok(pi)
}

/// Uniformly random assignment, the baseline start for comparisons against
/// [`init_nci`].
pub fn random_nci<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Nci> {
    if k == 0 || k > n {
        return Err(Error::contract(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    Nci::new((0..n).map(|_| rng.random_range(0..k)).collect(), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AttributedGraph;

    fn bidirected(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
        edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect()
    }

    #[test]
    fn star_single_cluster() {
        let edges: Vec<_> = (1..6).map(|l| (l, 0)).collect();
        let g = AttributedGraph::from_edges(6, edges).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        let y = init_nci(&op, 1).unwrap();
        assert!(y.assignment().iter().all(|&c| c == 0));
    }

    #[test]
    fn rejects_k_above_n() {
        let g = AttributedGraph::from_edges(2, [(0, 1)]).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        assert!(matches!(init_nci(&op, 3), Err(Error::Contract(_))));
    }

    #[test]
    fn unreached_nodes_fall_back_to_first_center() {
        // 0 <- 1 and 2 <- 3: centers 0 and 2; node 4 is isolated.
        let g = AttributedGraph::from_edges(5, [(1, 0), (3, 2)]).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        let y = init_nci(&op, 2).unwrap();
        assert_eq!(y.cluster_of(4), y.cluster_of(0));
    }

    #[test]
    fn two_joined_stars() {
        // Hubs 0 and 5, leaves 1..=4 and 6..=9, hubs joined.
        let mut e = Vec::new();
        for l in 1..5 {
            e.push((0, l));
            e.push((5, l + 5));
        }
        e.push((0, 5));
        let g = AttributedGraph::from_edges(10, bidirected(&e)).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        let y = init_nci(&op, 2).unwrap();
        for l in 1..5 {
            assert_eq!(y.cluster_of(l), y.cluster_of(0));
            assert_eq!(y.cluster_of(l + 5), y.cluster_of(5));
        }
        assert_ne!(y.cluster_of(0), y.cluster_of(5));
    }
}
