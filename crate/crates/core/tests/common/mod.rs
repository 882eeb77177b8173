//! Dense reference computations shared by the integration tests. Everything
//! here is rebuilt from the graph's edges and attribute rows with nalgebra,
//! without going through the library's operators.
#![allow(dead_code)]

use acmin::graph::AttributedGraph;
use acmin::linalg::DensePanel;
use acmin::synth;
use acmin::Nci;
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::Rng;

/// Random directed attributed graph with a mix of dangling and
/// attribute-free nodes.
pub fn random_graph(rng: &mut StdRng, n: usize) -> AttributedGraph {
    let edge_p = rng.random_range(0.05..0.4);
    let d = rng.random_range(0..6);
    let attr_p = rng.random_range(0.0..0.6);
    synth::erdos_renyi(n, edge_p, d, attr_p, rng).unwrap()
}

/// Random strongly connected graph in which every node holds at least one
/// attribute.
pub fn connected_graph(rng: &mut StdRng, n: usize) -> AttributedGraph {
    let edge_p = rng.random_range(0.1..0.4);
    let d = rng.random_range(1..6);
    let base = synth::strongly_connected(n, edge_p, d, 0.4, rng).unwrap();
    let mut attrs = attr_triplets(&base);
    for v in 0..n {
        if base.attributes().row(v).0.is_empty() {
            attrs.push((v, rng.random_range(0..d), 1.0));
        }
    }
    AttributedGraph::new(n, d, base.edges().collect::<Vec<_>>(), attrs).unwrap()
}

pub fn attr_triplets(g: &AttributedGraph) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for v in 0..g.n() {
        let (idx, val) = g.attributes().row(v);
        out.extend(idx.iter().zip(val).map(|(&a, &w)| (v, a, w)));
    }
    out
}

pub fn dense_attrs(g: &AttributedGraph) -> DMatrix<f64> {
    let mut r = DMatrix::zeros(g.n(), g.d());
    for (v, a, w) in attr_triplets(g) {
        r[(v, a)] = w;
    }
    r
}

pub fn dense_pv(g: &AttributedGraph) -> DMatrix<f64> {
    let n = g.n();
    let mut pv = DMatrix::zeros(n, n);
    for i in 0..n {
        let out: Vec<usize> = g.edges().filter(|e| e.0 == i).map(|e| e.1).collect();
        if out.is_empty() {
            pv[(i, i)] = 1.0;
        }
        for &j in &out {
            pv[(i, j)] = 1.0 / out.len() as f64;
        }
    }
    pv
}

/// Attributed transition: `P_R[i, j] = R[i]·R[j] / Σ_l R[i]·R[l]`. Rows of
/// nodes whose denominator vanishes are zero.
pub fn dense_pr(g: &AttributedGraph) -> DMatrix<f64> {
    let r = dense_attrs(g);
    let n = g.n();
    let dots = &r * r.transpose();
    let mut pr = DMatrix::zeros(n, n);
    for i in 0..n {
        let denom: f64 = dots.row(i).sum();
        if denom > 0.0 {
            for j in 0..n {
                pr[(i, j)] = dots[(i, j)] / denom;
            }
        }
    }
    pr
}

/// `(1 − β)P_V + βP_R`, with the rows of attribute-free nodes equal to their
/// `P_V` rows.
pub fn dense_w(g: &AttributedGraph, beta: f64) -> DMatrix<f64> {
    let pv = dense_pv(g);
    let pr = dense_pr(g);
    let mut w = DMatrix::zeros(g.n(), g.n());
    for i in 0..g.n() {
        if pr.row(i).sum() > 0.0 {
            w.set_row(i, &(pv.row(i) * (1.0 - beta) + pr.row(i) * beta));
        } else {
            w.set_row(i, &pv.row(i));
        }
    }
    w
}

/// `α Σ_{l=0}^{t} (1 − α)^l W^l`.
pub fn dense_s(w: &DMatrix<f64>, alpha: f64, t: usize) -> DMatrix<f64> {
    let n = w.nrows();
    let mut term = DMatrix::identity(n, n) * alpha;
    let mut s = term.clone();
    for _ in 0..t {
        term = (&term * w) * (1.0 - alpha);
        s += &term;
    }
    s
}

pub fn to_dmatrix(p: &DensePanel) -> DMatrix<f64> {
    DMatrix::from_row_slice(p.rows(), p.cols(), p.as_slice())
}

pub fn to_panel(m: &DMatrix<f64>) -> DensePanel {
    DensePanel::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// n×k matrix whose column `c` is `1/√|C_c|` on the members of cluster `c`.
pub fn indicator(y: &Nci) -> DMatrix<f64> {
    let mut sizes = vec![0usize; y.k()];
    for &c in y.assignment() {
        sizes[c] += 1;
    }
    let mut h = DMatrix::zeros(y.n(), y.k());
    for (v, &c) in y.assignment().iter().enumerate() {
        h[(v, c)] = 1.0 / (sizes[c] as f64).sqrt();
    }
    h
}

/// `(2/k) · trace(Hᵀ (I − S) H)`.
pub fn trace_form(s: &DMatrix<f64>, y: &Nci) -> f64 {
    let h = indicator(y);
    let n = s.nrows();
    let m = h.transpose() * (DMatrix::identity(n, n) - s) * &h;
    2.0 / y.k() as f64 * m.trace()
}

/// Direct evaluation: the mean over clusters of the stopping mass
/// that leaves the cluster, divided by the cluster size.
pub fn direct_aamc(s: &DMatrix<f64>, y: &Nci) -> f64 {
    let a = y.assignment();
    let mut total = 0.0;
    for c in 0..y.k() {
        let members: Vec<usize> = (0..a.len()).filter(|&v| a[v] == c).collect();
        if members.is_empty() {
            continue;
        }
        let mut out = 0.0;
        for &j in &members {
            for l in 0..a.len() {
                if a[l] != c {
                    out += s[(j, l)];
                }
            }
        }
        total += out / members.len() as f64;
    }
    total / y.k() as f64
}

pub fn random_nci(rng: &mut StdRng, n: usize, k: usize) -> Nci {
    Nci::new((0..n).map(|_| rng.random_range(0..k)).collect(), k).unwrap()
}

/// Largest principal angle sine between the column spans of two matrices
/// with orthonormal columns.
pub fn subspace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let resid = (DMatrix::identity(n, n) - b * b.transpose()) * a;
    resid.singular_values().max()
}

/// Orthonormal basis (n×k) of the span of the eigenvectors belonging to the
/// k largest eigenvalues of `w`. Returns `None` unless the k+1 (or n)
/// largest eigenvalues are real and separated by at least `gap`.
pub fn top_eigenspace(w: &DMatrix<f64>, k: usize, gap: f64) -> Option<(DMatrix<f64>, Vec<f64>)> {
    let n = w.nrows();
    let eig = w.clone().complex_eigenvalues();
    let mut vals: Vec<_> = eig.iter().copied().collect();
    vals.sort_by(|a, b| b.re.total_cmp(&a.re));
    let need = (k + 1).min(n);
    for v in &vals[..need] {
        if v.im.abs() > 1e-9 {
            return None;
        }
    }
    for pair in vals[..need].windows(2) {
        if pair[0].re - pair[1].re < gap {
            return None;
        }
    }
    let top: Vec<f64> = vals[..k].iter().map(|v| v.re).collect();
    let mut vecs = DMatrix::zeros(n, k);
    for (c, &lambda) in top.iter().enumerate() {
        let shifted = w - DMatrix::identity(n, n) * lambda;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.unwrap();
        let (min_idx, _) = svd.singular_values.argmin();
        vecs.set_column(c, &v_t.row(min_idx).transpose());
    }
    let q = vecs.qr().q();
    Some((q, top))
}

/// Random k×k orthogonal matrix from the QR factor of a Gaussian matrix.
pub fn random_orthogonal(rng: &mut StdRng, k: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(k, k, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
    g.qr().q()
}
