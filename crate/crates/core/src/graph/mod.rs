//! Attributed graphs: directed topology plus a weighted node-attribute
//! matrix.

pub mod io;
mod sparse;
mod walk;

pub use sparse::SparseMatrix;
pub use walk::{build_pv, build_rhat, truncation_depth, WalkOperator};

use crate::{Error, Result};

/// Immutable attributed graph.
///
/// The topology is a directed graph on nodes `0..n` with unit edge weights
/// and no duplicate edges (self-loops are allowed). `attrs` is the n×d
/// matrix of non-negative node-attribute weights.
#[derive(Debug, Clone)]
pub struct AttributedGraph {
    adjacency: SparseMatrix,
    attrs: SparseMatrix,
    out_degree: Vec<usize>,
    in_degree: Vec<usize>,
}

impl AttributedGraph {
    /// Duplicate edges collapse to one; duplicate attribute entries are
    /// summed.
    pub fn new(
        n: usize,
        d: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        attrs: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(s, t)) = edges.iter().find(|&&(s, t)| s >= n || t >= n) {
            return Err(Error::validation(format!("edge ({s}, {t}) references a node outside 0..{n}")));
        }
        edges.sort_unstable();
        edges.dedup();

        let attrs: Vec<(usize, usize, f64)> = attrs.into_iter().collect();
        for &(v, a, w) in &attrs {
            if v >= n || a >= d {
                return Err(Error::validation(format!(
                    "attribute entry ({v}, {a}) outside {n} nodes x {d} attributes"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::validation(format!(
                    "attribute weight {w} for ({v}, {a}) must be finite and non-negative"
                )));
            }
        }

        let adjacency = SparseMatrix::from_triplets(n, n, edges.iter().map(|&(s, t)| (s, t, 1.0)))?;
        let attrs = SparseMatrix::from_triplets(n, d, attrs)?;
        let out_degree: Vec<usize> = (0..n).map(|i| adjacency.row_len(i)).collect();
        let mut in_degree = vec![0usize; n];
        for &(_, t) in &edges {
            in_degree[t] += 1;
        }
        Ok(Self {
            adjacency,
            attrs,
            out_degree,
            in_degree,
        })
    }

    /// Graph without attributes.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(n, 0, edges, std::iter::empty())
    }

    pub fn n(&self) -> usize {
        self.adjacency.rows()
    }

    /// Number of attributes.
    pub fn d(&self) -> usize {
        self.attrs.cols()
    }

    /// Number of directed edges.
    pub fn m(&self) -> usize {
        self.adjacency.nnz()
    }

    /// Number of stored node-attribute entries.
    pub fn attr_entries(&self) -> usize {
        self.attrs.nnz()
    }

    pub fn adjacency(&self) -> &SparseMatrix {
        &self.adjacency
    }

    pub fn attributes(&self) -> &SparseMatrix {
        &self.attrs
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        self.adjacency.row(v).0
    }

    pub fn out_degree(&self) -> &[usize] {
        &self.out_degree
    }

    pub fn in_degree(&self) -> &[usize] {
        &self.in_degree
    }

    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        self.out_neighbors(s).binary_search(&t).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |s| self.out_neighbors(s).iter().map(move |&t| (s, t)))
    }
}
