use std::num::NonZeroUsize;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::graph::WalkOperator;
use crate::{Error, Result};

/// Hop limit after which a walk is recorded as stopping where it is.
pub const DEFAULT_MAX_LEN: usize = 100;

/// Walks per independently seeded stream in [`simulate_walks_parallel`].
const CHUNK: u64 = 1 << 16;

/// Stop counts of `n_r` simulated walks from `source`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkTrace {
    pub source: usize,
    pub counts: Vec<u64>,
    pub n_r: u64,
    /// Walks cut off at the hop limit.
    pub truncated: u64,
}

/// Samples attributed random walks without forming the n×n attributed
/// transition matrix.
///
/// An attributed jump from `v` first draws an attribute `a` with probability
/// `R̂[v, a] · r[a]` (`r` the attribute column masses), then a node `u` with
/// probability `R[u, a] / r[a]`. Summed over `a` this is exactly the
/// `(v, u)` entry of `R̂ · Rᵀ`.
#[derive(Debug)]
pub struct WalkSampler<'a, 'g> {
    op: &'a WalkOperator<'g>,
    /// Per node, cumulative attribute weights aligned with the R̂ row.
    attr_cum: Vec<f64>,
    /// Column-compressed R with per-column cumulative weights.
    col_ptr: Vec<usize>,
    col_nodes: Vec<usize>,
    col_cum: Vec<f64>,
    /// Per node, cumulative P_V weights aligned with the P_V row.
    pv_cum: Vec<f64>,
}

impl<'a, 'g> WalkSampler<'a, 'g> {
    pub fn new(op: &'a WalkOperator<'g>) -> Self {
        let rhat = op.rhat();
        let attrs = op.attrs();
        let col_mass = attrs.col_sums();

        let mut attr_cum = Vec::with_capacity(rhat.nnz());
        for v in 0..rhat.rows() {
            let (idx, val) = rhat.row(v);
            let mut acc = 0.0;
            for (&a, &w) in idx.iter().zip(val) {
                acc += w * col_mass[a];
                attr_cum.push(acc);
            }
        }

        let by_col = attrs.transpose();
        let mut col_ptr = Vec::with_capacity(by_col.rows() + 1);
        let mut col_nodes = Vec::with_capacity(by_col.nnz());
        let mut col_cum = Vec::with_capacity(by_col.nnz());
        col_ptr.push(0);
        for a in 0..by_col.rows() {
            let (idx, val) = by_col.row(a);
            let mut acc = 0.0;
            for (&u, &w) in idx.iter().zip(val) {
                acc += w;
                col_nodes.push(u);
                col_cum.push(acc);
            }
            col_ptr.push(col_nodes.len());
        }

        let pv = op.pv();
        let mut pv_cum = Vec::with_capacity(pv.nnz());
        for v in 0..pv.rows() {
            let mut acc = 0.0;
            for &w in pv.row(v).1 {
                acc += w;
                pv_cum.push(acc);
            }
        }

        Self {
            op,
            attr_cum,
            col_ptr,
            col_nodes,
            col_cum,
            pv_cum,
        }
    }

    /// Runs `n_r` walks from `source` using `rng`.
    pub fn run<R: Rng + ?Sized>(&self, source: usize, n_r: u64, max_len: usize, rng: &mut R) -> Result<WalkTrace> {
        let n = self.op.n();
        if source >= n {
            return Err(Error::contract(format!("source {source} outside 0..{n}")));
        }
        if n_r == 0 {
            return Err(Error::contract("need at least one walk"));
        }
        let mut counts = vec![0u64; n];
        let mut truncated = 0;
        for _ in 0..n_r {
            let (stop, cut) = self.walk(source, max_len, rng);
            counts[stop] += 1;
            truncated += cut as u64;
        }
        Ok(WalkTrace {
            source,
            counts,
            n_r,
            truncated,
        })
    }

    fn walk<R: Rng + ?Sized>(&self, source: usize, max_len: usize, rng: &mut R) -> (usize, bool) {
        let alpha = self.op.alpha();
        let mut cur = source;
        let mut hops = 0;
        loop {
            if rng.random::<f64>() < alpha {
                return (cur, false);
            }
            if hops == max_len {
                return (cur, true);
            }
            let branch = self.op.attr_branch(cur);
            cur = if branch > 0.0 && rng.random::<f64>() < branch {
                self.attribute_jump(cur, rng)
            } else {
                self.topology_step(cur, rng)
            };
            hops += 1;
        }
    }

    fn topology_step<R: Rng + ?Sized>(&self, v: usize, rng: &mut R) -> usize {
        let pv = self.op.pv();
        let (idx, _) = pv.row(v);
        idx[pick(&self.pv_cum[pv.row_span(v)], rng)]
    }

    fn attribute_jump<R: Rng + ?Sized>(&self, v: usize, rng: &mut R) -> usize {
        let rhat = self.op.rhat();
        let (idx, _) = rhat.row(v);
        let a = idx[pick(&self.attr_cum[rhat.row_span(v)], rng)];
        let span = self.col_ptr[a]..self.col_ptr[a + 1];
        self.col_nodes[span.start + pick(&self.col_cum[span], rng)]
    }
}

/// Index `i` with probability proportional to `cum[i] - cum[i - 1]`.
fn pick<R: Rng + ?Sized>(cum: &[f64], rng: &mut R) -> usize {
    let total = *cum.last().expect("non-empty distribution");
    let u = rng.random::<f64>() * total;
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

pub fn simulate_walks<R: Rng + ?Sized>(
    op: &WalkOperator<'_>,
    source: usize,
    n_r: u64,
    max_len: usize,
    rng: &mut R,
) -> Result<WalkTrace> {
    WalkSampler::new(op).run(source, n_r, max_len, rng)
}

/// Splits the walks into fixed-size chunks, each with its own generator
/// seeded from `(seed, source, chunk index)`, and spreads the chunks over
/// `threads` workers. The result depends on `seed` but not on `threads`.
pub fn simulate_walks_parallel(
    sampler: &WalkSampler<'_, '_>,
    source: usize,
    n_r: u64,
    max_len: usize,
    seed: u64,
    threads: Option<NonZeroUsize>,
) -> Result<WalkTrace> {
    let n = sampler.op.n();
    if source >= n {
        return Err(Error::contract(format!("source {source} outside 0..{n}")));
    }
    if n_r == 0 {
        return Err(Error::contract("need at least one walk"));
    }
    let chunks = n_r.div_ceil(CHUNK);
    let workers = threads
        .or_else(|| std::thread::available_parallelism().ok())
        .map_or(1, |t| t.get())
        .min(chunks as usize)
        .max(1);

    let partials: Vec<Result<WalkTrace>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut counts = vec![0u64; n];
                    let mut truncated = 0;
                    let mut c = w as u64;
                    while c < chunks {
                        let len = CHUNK.min(n_r - c * CHUNK);
                        let mut rng = StdRng::seed_from_u64(stream_seed(seed, source as u64, c));
                        let part = sampler.run(source, len, max_len, &mut rng)?;
                        counts.iter_mut().zip(&part.counts).for_each(|(a, b)| *a += b);
                        truncated += part.truncated;
                        c += workers as u64;
                    }
                    Ok(WalkTrace {
                        source,
                        counts,
                        n_r: 0,
                        truncated,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("walk worker panicked")).collect()
    });

    let mut counts = vec![0u64; n];
    let mut truncated = 0;
    for part in partials {
        let part = part?;
        counts.iter_mut().zip(&part.counts).for_each(|(a, b)| *a += b);
        truncated += part.truncated;
    }
    Ok(WalkTrace {
        source,
        counts,
        n_r,
        truncated,
    })
}

fn stream_seed(seed: u64, source: u64, chunk: u64) -> u64 {
    // splitmix64 finalizer over the combined key
    let mut z = seed
        .wrapping_add(source.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(chunk.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AttributedGraph;

    #[test]
    fn alpha_one_stops_at_source() {
        let g = AttributedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let op = WalkOperator::new(&g, 1.0, 0.3).unwrap();
        let trace = simulate_walks(&op, 1, 1000, DEFAULT_MAX_LEN, &mut StdRng::seed_from_u64(1)).unwrap();
        assert_eq!(trace.counts, vec![0, 1000, 0]);
    }

    #[test]
    fn counts_sum_to_walks() {
        let g = AttributedGraph::new(4, 2, [(0, 1), (1, 2), (2, 3)], [(0, 0, 1.0), (3, 0, 1.0), (2, 1, 2.0)]).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.5).unwrap();
        let trace = simulate_walks(&op, 0, 5000, 3, &mut StdRng::seed_from_u64(9)).unwrap();
        assert_eq!(trace.counts.iter().sum::<u64>(), 5000);
        assert!(trace.truncated > 0);
    }

    #[test]
    fn parallel_result_is_independent_of_thread_count() {
        let g = AttributedGraph::new(3, 1, [(0, 1), (1, 0), (1, 2)], [(0, 0, 1.0), (2, 0, 1.0)]).unwrap();
        let op = WalkOperator::new(&g, 0.2, 0.35).unwrap();
        let sampler = WalkSampler::new(&op);
        let one = simulate_walks_parallel(&sampler, 0, 200_000, 100, 7, NonZeroUsize::new(1)).unwrap();
        let four = simulate_walks_parallel(&sampler, 0, 200_000, 100, 7, NonZeroUsize::new(4)).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.counts.iter().sum::<u64>(), 200_000);
    }

    #[test]
    fn bad_source() {
        let g = AttributedGraph::from_edges(2, [(0, 1)]).unwrap();
        let op = WalkOperator::new(&g, 0.5, 0.0).unwrap();
        assert!(simulate_walks(&op, 2, 10, 10, &mut StdRng::seed_from_u64(0)).is_err());
    }
}
