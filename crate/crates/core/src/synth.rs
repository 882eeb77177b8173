//! Random attributed graph generators for tests and benchmarks.

use rand::seq::index::sample;
use rand::Rng;

use crate::graph::AttributedGraph;
use crate::Result;

/// Directed graph where each ordered pair `(i, j)`, `i != j`, is an edge with
/// probability `edge_p`, and each node holds each of `d` attributes with
/// probability `attr_p` and a weight drawn from `(0, 1]`.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, edge_p: f64, d: usize, attr_p: f64, rng: &mut R) -> Result<AttributedGraph> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random::<f64>() < edge_p {
                edges.push((i, j));
            }
        }
    }
    let attrs = random_attrs(n, d, attr_p, rng);
    AttributedGraph::new(n, d, edges, attrs)
}

/// Like [`erdos_renyi`] but threaded with a random Hamiltonian cycle, so
/// the topology is strongly connected.
pub fn strongly_connected<R: Rng + ?Sized>(
    n: usize,
    edge_p: f64,
    d: usize,
    attr_p: f64,
    rng: &mut R,
) -> Result<AttributedGraph> {
    let base = erdos_renyi(n, edge_p, d, attr_p, rng)?;
    let order = sample(rng, n, n).into_vec();
    let cycle = (0..n).map(|i| (order[i], order[(i + 1) % n]));
    let edges: Vec<_> = base.edges().chain(cycle).collect();
    let attrs: Vec<_> = attr_triplets(&base);
    AttributedGraph::new(n, d, edges, attrs)
}

/// `sizes.len()` bidirected cliques, consecutive ones joined by a single
/// bidirected edge, each clique holding one attribute of its own. Returns
/// the graph and the planted block of every node.
pub fn planted_cliques(sizes: &[usize]) -> Result<(AttributedGraph, Vec<usize>)> {
    let n: usize = sizes.iter().sum();
    let mut edges = Vec::new();
    let mut attrs = Vec::new();
    let mut block = Vec::with_capacity(n);
    let mut offset = 0;
    for (b, &size) in sizes.iter().enumerate() {
        for i in 0..size {
            block.push(b);
            attrs.push((offset + i, b, 1.0));
            for j in 0..size {
                if i != j {
                    edges.push((offset + i, offset + j));
                }
            }
        }
        if b > 0 {
            edges.push((offset - 1, offset));
            edges.push((offset, offset - 1));
        }
        offset += size;
    }
    Ok((AttributedGraph::new(n, sizes.len(), edges, attrs)?, block))
}

/// Sparse graph for timing runs: every node gets `out_degree` distinct random
/// out-neighbors and `attrs_per_node` distinct random attributes of weight 1,
/// so `|E_V| + |E_R| = n · (out_degree + attrs_per_node)`.
pub fn sparse_random<R: Rng + ?Sized>(
    n: usize,
    out_degree: usize,
    d: usize,
    attrs_per_node: usize,
    rng: &mut R,
) -> Result<AttributedGraph> {
    let mut edges = Vec::with_capacity(n * out_degree);
    let mut attrs = Vec::with_capacity(n * attrs_per_node);
    for v in 0..n {
        for t in sample(rng, n - 1, out_degree.min(n - 1)) {
            edges.push((v, if t >= v { t + 1 } else { t }));
        }
        for a in sample(rng, d, attrs_per_node.min(d)) {
            attrs.push((v, a, 1.0));
        }
    }
    AttributedGraph::new(n, d, edges, attrs)
}

fn random_attrs<R: Rng + ?Sized>(n: usize, d: usize, p: f64, rng: &mut R) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for v in 0..n {
        for a in 0..d {
            if rng.random::<f64>() < p {
                out.push((v, a, 1.0 - rng.random::<f64>()));
            }
        }
    }
    out
}

fn attr_triplets(g: &AttributedGraph) -> Vec<(usize, usize, f64)> {
    let r = g.attributes();
    (0..g.n())
        .flat_map(|v| {
            let (idx, val) = r.row(v);
            idx.iter().zip(val).map(move |(&a, &w)| (v, a, w))
        })
        .collect()
}
