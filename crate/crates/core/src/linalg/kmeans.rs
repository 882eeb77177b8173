use rand::Rng;

use super::DensePanel;
use crate::nci::Nci;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct KmeansResult {
    pub nci: Nci,
    /// `k × dim` centroids of the final assignment.
    pub centroids: DensePanel,
    /// Sum of squared distances to the assigned centroid, recorded after
    /// initialization and after every sweep.
    pub objective_trace: Vec<f64>,
    pub sweeps: usize,
    pub converged: bool,
}

/// Lloyd iterations on the rows of `points`, starting from a uniformly
/// random assignment.
///
/// Argmin ties go to the smaller cluster index. A cluster that runs empty
/// takes the point farthest from its own centroid (taken from a cluster with
/// at least two members).
pub fn kmeans<R: Rng + ?Sized>(
    points: &DensePanel,
    k: usize,
    max_sweeps: usize,
    rng: &mut R,
) -> Result<KmeansResult> {
    let n = points.rows();
    if k == 0 || k > n {
        return Err(Error::contract(format!("kmeans needs 1 <= k <= n, got k = {k}, n = {n}")));
    }
    points.ensure_finite()?;

    let mut assign: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    let mut centroids = update_centroids(points, &assign, k);
    reseed_empty(points, &mut assign, &mut centroids);
    let mut trace = vec![objective(points, &assign, &centroids)];

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        let next: Vec<usize> = (0..n).map(|j| nearest(points.row(j), &centroids)).collect();
        if next == assign {
            converged = true;
            break;
        }
        sweeps += 1;
        assign = next;
        centroids = update_centroids(points, &assign, k);
        reseed_empty(points, &mut assign, &mut centroids);
        trace.push(objective(points, &assign, &centroids));
    }

    Ok(KmeansResult {
        nci: Nci::new(assign, k)?,
        centroids,
        objective_trace: trace,
        sweeps,
        converged,
    })
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centroids: &DensePanel) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for c in 0..centroids.rows() {
        let d = sq_dist(p, centroids.row(c));
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

fn update_centroids(points: &DensePanel, assign: &[usize], k: usize) -> DensePanel {
    let dim = points.cols();
    let mut sums = DensePanel::zeros(k, dim);
    let mut counts = vec![0usize; k];
    for (j, &c) in assign.iter().enumerate() {
        counts[c] += 1;
        for (s, &x) in sums.row_mut(c).iter_mut().zip(points.row(j)) {
            *s += x;
        }
    }
    for (c, &cnt) in counts.iter().enumerate() {
        if cnt > 0 {
            sums.row_mut(c).iter_mut().for_each(|s| *s /= cnt as f64);
        }
    }
    sums
}

fn reseed_empty(points: &DensePanel, assign: &mut [usize], centroids: &mut DensePanel) {
    let k = centroids.rows();
    let mut counts = vec![0usize; k];
    for &c in assign.iter() {
        counts[c] += 1;
    }
    for empty in 0..k {
        if counts[empty] > 0 {
            continue;
        }
        let mut far = None;
        let mut far_d = f64::NEG_INFINITY;
        for (j, &c) in assign.iter().enumerate() {
            if counts[c] < 2 {
                continue;
            }
            let d = sq_dist(points.row(j), centroids.row(c));
            if d > far_d {
                far_d = d;
                far = Some(j);
            }
        }
        let Some(j) = far else { break };
        let old = assign[j];
        assign[j] = empty;
        counts[old] -= 1;
        counts[empty] = 1;
        centroids.row_mut(empty).copy_from_slice(points.row(j));
        // Recompute the donor's mean from scratch.
        let dim = points.cols();
        let mut mean = vec![0.0; dim];
        for (i, &c) in assign.iter().enumerate() {
            if c == old {
                mean.iter_mut().zip(points.row(i)).for_each(|(m, x)| *m += x);
            }
        }
        let cnt = counts[old] as f64;
        centroids
            .row_mut(old)
            .iter_mut()
            .zip(&mean)
            .for_each(|(c, m)| *c = m / cnt);
    }
}

fn objective(points: &DensePanel, assign: &[usize], centroids: &DensePanel) -> f64 {
    assign
        .iter()
        .enumerate()
        .map(|(j, &c)| sq_dist(points.row(j), centroids.row(c)))
        .sum()
}
