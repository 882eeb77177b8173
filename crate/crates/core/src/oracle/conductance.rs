use serde::Serialize;

use super::DenseS;
use crate::graph::AttributedGraph;
use crate::nci::Nci;
use crate::{Error, Result};

/// Node cap for exhaustive partition enumeration.
pub const BRUTE_FORCE_MAX_N: usize = 14;

/// Edge conductance `|cut(C)| / min(vol(C), vol(V \ C))`, with volumes
/// summing out-degrees and the cut counting edges that leave `C`.
pub fn classic_conductance(g: &AttributedGraph, cluster: &[usize]) -> Result<f64> {
    let n = g.n();
    let mut inside = vec![false; n];
    for &v in cluster {
        if v >= n {
            return Err(Error::contract(format!("node {v} outside 0..{n}")));
        }
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == n {
        return Err(Error::contract("cluster must be a non-empty proper subset of the nodes"));
    }
    let (mut cut, mut vol_in, mut vol_out) = (0usize, 0usize, 0usize);
    for s in 0..n {
        let deg = g.out_degree()[s];
        if inside[s] {
            vol_in += deg;
            cut += g.out_neighbors(s).iter().filter(|&&t| !inside[t]).count();
        } else {
            vol_out += deg;
        }
    }
    let denom = vol_in.min(vol_out);
    if denom == 0 {
        return Err(Error::contract("conductance is undefined when one side has zero volume"));
    }
    Ok(cut as f64 / denom as f64)
}

/// Mean over clusters of the stopping mass that leaves the cluster,
/// averaged over its members: `(1/k) Σ_i Σ_{j ∈ C_i, l ∉ C_i} S[j, l] / |C_i|`.
/// Empty clusters contribute zero.
pub fn exact_aamc(s: &DenseS, y: &Nci) -> Result<f64> {
    check_len(s, y)?;
    let sizes = y.sizes();
    let assign = y.assignment();
    let mut total = 0.0;
    for j in 0..s.n {
        let c = assign[j];
        let leaving: f64 = s
            .s
            .row(j)
            .iter()
            .zip(assign)
            .filter(|&(_, &cl)| cl != c)
            .map(|(&v, _)| v)
            .sum();
        total += leaving / sizes[c] as f64;
    }
    Ok(total / y.k() as f64)
}

/// `(2/k) · trace(H (I − S) Hᵀ)` with `H` the k×n normalized indicator,
/// evaluated densely.
pub fn trace_form_aamc(s: &DenseS, y: &Nci) -> Result<f64> {
    check_len(s, y)?;
    let h = y.normalized_indicator();
    let sh = s.s.matmul(&h)?;
    let mut trace = 0.0;
    for c in 0..y.k() {
        for j in 0..s.n {
            trace += h[(j, c)] * (h[(j, c)] - sh[(j, c)]);
        }
    }
    Ok(2.0 * trace / y.k() as f64)
}

fn check_len(s: &DenseS, y: &Nci) -> Result<()> {
    if s.n != y.n() {
        return Err(Error::contract(format!("assignment covers {} nodes, matrix has {}", y.n(), s.n)));
    }
    Ok(())
}

/// Visits every partition of `0..n` into exactly `k` non-empty blocks once,
/// as a restricted growth string (node 0 in block 0, each node in at most
/// one block past the largest used so far).
pub fn for_each_partition(n: usize, k: usize, mut f: impl FnMut(&[usize])) -> Result<()> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::CapExceeded {
            what: "partition enumeration",
            n,
            cap: BRUTE_FORCE_MAX_N,
        });
    }
    if k == 0 || k > n {
        return Err(Error::contract(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let mut labels = vec![0usize; n];
    grow(&mut labels, 1, 1, k, &mut f);
    Ok(())
}

fn grow(labels: &mut [usize], pos: usize, used: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    let n = labels.len();
    if pos == n {
        if used == k {
            f(labels);
        }
        return;
    }
    // Not enough nodes left to open the remaining blocks.
    if k - used > n - pos {
        return;
    }
    for c in 0..used.min(k) {
        labels[pos] = c;
        grow(labels, pos + 1, used, k, f);
    }
    if used < k {
        labels[pos] = used;
        grow(labels, pos + 1, used + 1, k, f);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BruteForce {
    pub nci: Nci,
    pub phi: f64,
    /// Number of partitions enumerated.
    pub partitions: u64,
}

/// Minimum of [`exact_aamc`] over all partitions into exactly `k` non-empty
/// clusters. The first minimizer in enumeration order wins ties.
pub fn brute_force_min_aamc(s: &DenseS, k: usize) -> Result<BruteForce> {
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut count = 0u64;
    let mut eval_err = None;
    for_each_partition(s.n, k, |labels| {
        count += 1;
        let y = Nci::new(labels.to_vec(), k).expect("labels below k");
        match exact_aamc(s, &y) {
            Ok(v) if best.as_ref().is_none_or(|b| v < b.1) => best = Some((labels.to_vec(), v)),
            Ok(_) => {}
            Err(e) => eval_err = Some(e),
        }
    })?;
    if let Some(e) = eval_err {
        return Err(e);
    }
    let (labels, phi) = best.expect("at least one partition");
    Ok(BruteForce {
        nci: Nci::new(labels, k)?,
        phi,
        partitions: count,
    })
}

/// [`exact_aamc`] of every partition into exactly `k` clusters, in
/// enumeration order.
pub fn partition_aamc_values(s: &DenseS, k: usize) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for_each_partition(s.n, k, |labels| {
        let y = Nci::new(labels.to_vec(), k).expect("labels below k");
        out.push(exact_aamc(s, &y).expect("length checked"));
    })?;
    Ok(out)
}
