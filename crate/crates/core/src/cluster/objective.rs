use crate::graph::WalkOperator;
use crate::nci::Nci;
use crate::{Error, Result};

/// Truncated multi-hop conductance objective of a clustering.
///
/// Evaluates `(2/k) · trace(Hᵀ (I − S_t) H)` where `H` is the normalized
/// indicator panel of `y` and `S_t = α Σ_{l ≤ t} (1 − α)^l W^l` with
/// `t = ceil(1/α)`, using `t` operator applications and no dense `S`.
///
/// The value lies in `[0, 2]`. For a single cluster it is exactly the
/// truncation residue `2 (1 − α)^{t+1}`. Halving it gives the mean fraction
/// of walk mass that leaves its start cluster (plus half that residue).
pub fn approx_aamc(op: &WalkOperator<'_>, y: &Nci) -> Result<f64> {
    if y.n() != op.n() {
        return Err(Error::contract(format!(
            "assignment covers {} nodes, graph has {}",
            y.n(),
            op.n()
        )));
    }
    let alpha = op.alpha();
    let h0 = y.normalized_indicator();
    let mut h = h0.clone();
    for _ in 0..op.truncation_depth() {
        let mut next = op.apply(&h)?;
        next.scale(1.0 - alpha);
        next.axpy(1.0, &h0)?;
        h = next;
    }
    let k = y.k();
    let mut total = 0.0;
    for j in 0..y.n() {
        let c = y.cluster_of(j);
        let h0v = h0[(j, c)];
        total += h0v * (h0v - alpha * h[(j, c)]);
    }
    Ok(2.0 * total / k as f64)
}
