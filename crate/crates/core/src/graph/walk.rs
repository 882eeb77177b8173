use super::{AttributedGraph, SparseMatrix};
use crate::linalg::DensePanel;
use crate::{Error, Result};

/// Row-stochastic topological transition matrix. Each edge `(i, j)` gets
/// `1 / out_degree(i)`; a node without out-edges gets a self-loop.
pub fn build_pv(g: &AttributedGraph) -> SparseMatrix {
    let n = g.n();
    let mut indptr = Vec::with_capacity(n + 1);
    let mut indices = Vec::with_capacity(g.m() + n);
    let mut values = Vec::with_capacity(g.m() + n);
    indptr.push(0);
    for i in 0..n {
        let nbrs = g.out_neighbors(i);
        if nbrs.is_empty() {
            indices.push(i);
            values.push(1.0);
        } else {
            let w = 1.0 / nbrs.len() as f64;
            indices.extend_from_slice(nbrs);
            values.extend(std::iter::repeat_n(w, nbrs.len()));
        }
        indptr.push(indices.len());
    }
    SparseMatrix::from_csr(n, n, indptr, indices, values).expect("adjacency rows are sorted")
}

/// Attribute matrix with row `i` divided by `R[i] · r`, where `r` holds the
/// column sums of `R`. Rows whose normalizer is zero are left empty.
///
/// With this scaling `rhat · Rᵀ` is row-stochastic on every non-empty row.
pub fn build_rhat(g: &AttributedGraph) -> SparseMatrix {
    let r = g.attributes();
    let col_mass = r.col_sums();
    let n = r.rows();
    let mut indptr = Vec::with_capacity(n + 1);
    let mut indices = Vec::with_capacity(r.nnz());
    let mut values = Vec::with_capacity(r.nnz());
    indptr.push(0);
    for i in 0..n {
        let (idx, val) = r.row(i);
        let norm: f64 = idx.iter().zip(val).map(|(&a, &w)| w * col_mass[a]).sum();
        if norm > 0.0 {
            for (&a, &w) in idx.iter().zip(val) {
                indices.push(a);
                values.push(w / norm);
            }
        }
        indptr.push(indices.len());
    }
    SparseMatrix::from_csr(n, r.cols(), indptr, indices, values).expect("attribute rows are sorted")
}

/// Matrix-free attributed random walk transition
/// `W = (1 − β) · P_V + β · R̂ · Rᵀ`.
///
/// For a node with an empty `R̂` row the attributed branch is folded into
/// its topological row, so that row of `W` is its `P_V` row.
#[derive(Debug, Clone)]
pub struct WalkOperator<'g> {
    graph: &'g AttributedGraph,
    pv: SparseMatrix,
    rhat: SparseMatrix,
    topo_weight: Vec<f64>,
    attr_weight: Vec<f64>,
    alpha: f64,
    beta: f64,
}

impl<'g> WalkOperator<'g> {
    /// `alpha` is the per-step stopping probability in `(0, 1]`; `beta` the
    /// probability of an attributed jump in `[0, 1]`.
    pub fn new(graph: &'g AttributedGraph, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::validation(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::validation(format!("beta must lie in [0, 1], got {beta}")));
        }
        let pv = build_pv(graph);
        let rhat = build_rhat(graph);
        let (topo_weight, attr_weight) = (0..graph.n())
            .map(|i| if rhat.row_len(i) > 0 { (1.0 - beta, beta) } else { (1.0, 0.0) })
            .unzip();
        Ok(Self {
            graph,
            pv,
            rhat,
            topo_weight,
            attr_weight,
            alpha,
            beta,
        })
    }

    pub fn graph(&self) -> &'g AttributedGraph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn pv(&self) -> &SparseMatrix {
        &self.pv
    }

    pub fn rhat(&self) -> &SparseMatrix {
        &self.rhat
    }

    pub fn attrs(&self) -> &SparseMatrix {
        self.graph.attributes()
    }

    /// Probability that a non-stopping step from `v` takes the attributed
    /// branch.
    pub fn attr_branch(&self, v: usize) -> f64 {
        self.attr_weight[v]
    }

    /// Number of walk steps summed by the truncated series: `ceil(1 / alpha)`.
    pub fn truncation_depth(&self) -> usize {
        truncation_depth(self.alpha)
    }

    /// `W · x`.
    pub fn apply(&self, x: &DensePanel) -> Result<DensePanel> {
        self.check_rows(x)?;
        let mut out = self.pv.mul_panel(x)?;
        if self.rhat.nnz() == 0 {
            return Ok(out);
        }
        let bridge = self.attrs().t_mul_panel(x)?;
        let attr = self.rhat.mul_panel(&bridge)?;
        for i in 0..self.n() {
            let (tw, aw) = (self.topo_weight[i], self.attr_weight[i]);
            for (o, &a) in out.row_mut(i).iter_mut().zip(attr.row(i)) {
                *o = tw * *o + aw * a;
            }
        }
        Ok(out)
    }

    /// `Wᵀ · x`.
    pub fn apply_transpose(&self, x: &DensePanel) -> Result<DensePanel> {
        self.check_rows(x)?;
        let mut topo = x.clone();
        let mut attr = x.clone();
        for i in 0..self.n() {
            let (tw, aw) = (self.topo_weight[i], self.attr_weight[i]);
            topo.row_mut(i).iter_mut().for_each(|v| *v *= tw);
            attr.row_mut(i).iter_mut().for_each(|v| *v *= aw);
        }
        let mut out = self.pv.t_mul_panel(&topo)?;
        if self.rhat.nnz() > 0 {
            let bridge = self.rhat.t_mul_panel(&attr)?;
            out.axpy(1.0, &self.attrs().mul_panel(&bridge)?)?;
        }
        Ok(out)
    }

    /// `P_V · x`, the topology-only walk.
    pub fn apply_pv(&self, x: &DensePanel) -> Result<DensePanel> {
        self.check_rows(x)?;
        self.pv.mul_panel(x)
    }

    fn check_rows(&self, x: &DensePanel) -> Result<()> {
        if x.rows() != self.n() {
            return Err(Error::contract(format!(
                "walk operator on {} nodes applied to a panel with {} rows",
                self.n(),
                x.rows()
            )));
        }
        Ok(())
    }
}

/// `ceil(1 / alpha)`, treating values within 1e-9 of an integer as that
/// integer.
pub fn truncation_depth(alpha: f64) -> usize {
    let inv = 1.0 / alpha;
    let nearest = inv.round();
    if (inv - nearest).abs() < 1e-9 {
        nearest as usize
    } else {
        inv.ceil() as usize
    }
}
