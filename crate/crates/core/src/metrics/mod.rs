//! Clustering quality: accuracy under the best one-to-one label matching,
//! normalized mutual information, directed modularity and the conductance
//! objective.

mod hungarian;

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::cluster::approx_aamc;
use crate::graph::io::load_node_table;
use crate::graph::{AttributedGraph, WalkOperator};
use crate::nci::Nci;
use crate::{Error, Result};

/// Ground-truth classes with ids compacted to `0..classes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    labels: Vec<usize>,
    classes: usize,
}

impl LabelVector {
    /// Compacts arbitrary class ids, keeping their relative order.
    pub fn new(raw: &[usize]) -> Self {
        let mut ids: Vec<usize> = raw.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let labels = raw.iter().map(|l| ids.binary_search(l).unwrap()).collect();
        Self {
            labels,
            classes: ids.len(),
        }
    }

    /// Builds labels for nodes `0..n` from `(node, class name)` rows. Class
    /// names that are all integers sort numerically, otherwise as text.
    pub fn from_rows(n: usize, rows: &[(usize, String)]) -> Result<Self> {
        let mut names: Vec<&str> = rows.iter().map(|r| r.1.as_str()).collect();
        let numeric = names.iter().all(|s| s.parse::<i64>().is_ok());
        if numeric {
            names.sort_by_key(|s| s.parse::<i64>().unwrap());
        } else {
            names.sort_unstable();
        }
        names.dedup();
        let mut labels = vec![usize::MAX; n];
        for (node, name) in rows {
            if *node >= n {
                return Err(Error::validation(format!("label for node {node} but only {n} nodes")));
            }
            let id = names.iter().position(|s| s == name).unwrap();
            if labels[*node] != usize::MAX && labels[*node] != id {
                return Err(Error::validation(format!("node {node} has two labels")));
            }
            labels[*node] = id;
        }
        if let Some(missing) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::validation(format!("node {missing} has no label")));
        }
        Ok(Self::new(&labels))
    }

    /// Reads a `node<TAB>label` file. With `n = None` the node count is one
    /// more than the largest node id.
    pub fn load(path: impl AsRef<Path>, n: Option<usize>) -> Result<Self> {
        let rows = load_node_table(path)?;
        let n = n.unwrap_or_else(|| rows.iter().map(|r| r.0 + 1).max().unwrap_or(0));
        Self::from_rows(n, &rows)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn contingency(pred: &Nci, truth: &LabelVector) -> Result<Vec<Vec<u64>>> {
    if pred.n() != truth.len() {
        return Err(Error::contract(format!(
            "prediction covers {} nodes, labels cover {}",
            pred.n(),
            truth.len()
        )));
    }
    let mut table = vec![vec![0u64; truth.classes()]; pred.k()];
    for (&p, &t) in pred.assignment().iter().zip(truth.labels()) {
        table[p][t] += 1;
    }
    Ok(table)
}

/// Fraction of nodes whose cluster maps to their class under the best
/// one-to-one matching of clusters to classes.
pub fn clustering_accuracy(pred: &Nci, truth: &LabelVector) -> Result<f64> {
    let table = contingency(pred, truth)?;
    let n = pred.n();
    if n == 0 {
        return Ok(1.0);
    }
    let size = pred.k().max(truth.classes());
    let mut cost = vec![0i64; size * size];
    for (p, row) in table.iter().enumerate() {
        for (t, &count) in row.iter().enumerate() {
            cost[p * size + t] = -(count as i64);
        }
    }
    let matching = hungarian::min_cost_assignment(&cost, size);
    let matched: i64 = matching.iter().enumerate().map(|(r, &c)| -cost[r * size + c]).sum();
    Ok(matched as f64 / n as f64)
}

/// Mutual information over the arithmetic mean of the two entropies
/// (natural log). Identical partitions score 1; otherwise a constant
/// partition on either side scores 0.
pub fn nmi(pred: &Nci, truth: &LabelVector) -> Result<f64> {
    let table = contingency(pred, truth)?;
    let n = pred.n() as f64;
    if pred.canonical() == LabelVector::new(truth.labels()).canonical_form() {
        return Ok(1.0);
    }
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let cols: Vec<f64> = (0..truth.classes())
        .map(|t| table.iter().map(|r| r[t]).sum::<u64>() as f64)
        .collect();
    let entropy = |m: &[f64]| -> f64 {
        m.iter()
            .filter(|&&c| c > 0.0)
            .map(|&c| {
                let p = c / n;
                -p * p.ln()
            })
            .sum()
    };
    let (hp, ht) = (entropy(&rows), entropy(&cols));
    if hp == 0.0 || ht == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (p, row) in table.iter().enumerate() {
        for (t, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (rows[p] * cols[t])).ln();
            }
        }
    }
    Ok((2.0 * mi / (hp + ht)).clamp(0.0, 1.0))
}

impl LabelVector {
    fn canonical_form(&self) -> Vec<usize> {
        Nci::new(self.labels.clone(), self.classes.max(1))
            .map(|y| y.canonical())
            .unwrap_or_default()
    }
}

/// Directed modularity
/// `Q = (1/m) Σ_{ij} [A_ij − d_out(i) d_in(j) / m] δ(c_i, c_j)`.
pub fn modularity(g: &AttributedGraph, y: &Nci) -> Result<f64> {
    if y.n() != g.n() {
        return Err(Error::contract(format!("assignment covers {} nodes, graph has {}", y.n(), g.n())));
    }
    let m = g.m();
    if m == 0 {
        return Err(Error::contract("modularity is undefined on a graph without edges"));
    }
    let a = y.assignment();
    let within = g.edges().filter(|&(s, t)| a[s] == a[t]).count() as f64;
    let mut out_mass = vec![0.0; y.k()];
    let mut in_mass = vec![0.0; y.k()];
    for v in 0..g.n() {
        out_mass[a[v]] += g.out_degree()[v] as f64;
        in_mass[a[v]] += g.in_degree()[v] as f64;
    }
    let m = m as f64;
    let expected: f64 = out_mass.iter().zip(&in_mass).map(|(o, i)| o * i).sum::<f64>() / (m * m);
    Ok(within / m - expected)
}

/// Mean fraction of truncated walk mass that leaves its start cluster,
/// i.e. half of [`approx_aamc`]. This is the scale reported in
/// [`MetricsReport`].
pub fn aamc(op: &WalkOperator<'_>, y: &Nci) -> Result<f64> {
    Ok(approx_aamc(op, y)? / 2.0)
}

/// JSON summary written by the evaluation command.
#[derive(Debug, Clone, Serialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub ca: Option<f64>,
    pub nmi: Option<f64>,
    pub modularity: Option<f64>,
    pub aamc: Option<f64>,
    pub k: usize,
    pub n: usize,
    /// Input files or settings each metric was computed from.
    pub provenance: BTreeMap<String, String>,
}

impl MetricsReport {
    pub fn new(pred: &Nci) -> Self {
        Self {
            schema_version: 1,
            ca: None,
            nmi: None,
            modularity: None,
            aamc: None,
            k: pred.k(),
            n: pred.n(),
            provenance: BTreeMap::new(),
        }
    }
}
