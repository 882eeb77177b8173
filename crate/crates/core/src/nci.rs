//! Hard cluster assignments.

use serde::{Deserialize, Serialize};

use crate::linalg::DensePanel;
use crate::{Error, Result};

/// Node-cluster indicator: every node belongs to exactly one of `k` clusters.
///
/// Stored as an assignment vector. Clusters may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawNci")]
pub struct Nci {
    k: usize,
    assign: Vec<usize>,
}

#[derive(Deserialize)]
struct RawNci {
    k: usize,
    assign: Vec<usize>,
}

impl TryFrom<RawNci> for Nci {
    type Error = Error;

    fn try_from(raw: RawNci) -> Result<Self> {
        Nci::new(raw.assign, raw.k)
    }
}

impl Nci {
    pub fn new(assign: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::contract("cluster count must be at least 1"));
        }
        if let Some((node, &c)) = assign.iter().enumerate().find(|(_, &c)| c >= k) {
            return Err(Error::contract(format!("node {node} assigned to cluster {c}, but k = {k}")));
        }
        Ok(Self { k, assign })
    }

    /// All `n` nodes in cluster 0.
    pub fn single(n: usize) -> Self {
        Self { k: 1, assign: vec![0; n] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assign
    }

    pub fn into_assignment(self) -> Vec<usize> {
        self.assign
    }

    pub fn cluster_of(&self, node: usize) -> usize {
        self.assign[node]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assign {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn non_empty_clusters(&self) -> usize {
        self.sizes().iter().filter(|&&s| s > 0).count()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.assign[j] == cluster).collect()
    }

    /// The n×k panel whose column `c` is the indicator of cluster `c` scaled
    /// to unit length. Empty clusters give zero columns.
    pub fn normalized_indicator(&self) -> DensePanel {
        let sizes = self.sizes();
        let scale: Vec<f64> = sizes
            .iter()
            .map(|&s| if s > 0 { 1.0 / (s as f64).sqrt() } else { 0.0 })
            .collect();
        let mut h = DensePanel::zeros(self.n(), self.k);
        for (j, &c) in self.assign.iter().enumerate() {
            h[(j, c)] = scale[c];
        }
        h
    }

    /// Relabels clusters by order of first appearance. Two assignments that
    /// describe the same partition map to the same canonical form.
    pub fn canonical(&self) -> Vec<usize> {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        self.assign
            .iter()
            .map(|&c| {
                if map[c] == usize::MAX {
                    map[c] = next;
                    next += 1;
                }
                map[c]
            })
            .collect()
    }
}
