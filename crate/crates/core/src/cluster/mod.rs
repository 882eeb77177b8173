//! The clustering algorithm: seed an assignment, refine a k-dimensional
//! invariant subspace of the walk operator by orthogonal iteration, round
//! each iterate to a hard assignment and keep the one with the lowest
//! truncated conductance objective.

mod init;
mod objective;
mod ortho;
mod rounding;

pub use init::{init_nci, random_nci, CANDIDATES_PER_CLUSTER};
pub use objective::approx_aamc;
pub use ortho::{has_converged, ortho_step, OrthoStep, CONVERGENCE_TOL};
pub use rounding::{gen_nci, rounding_objective, rounding_objective_best_rotation, ROTATION_TOL};

use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::graph::{truncation_depth, AttributedGraph, WalkOperator};
use crate::linalg::qr_thin;
use crate::nci::Nci;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitStrategy {
    /// In-degree candidates scored by truncated random walks with restart.
    #[default]
    Greedy,
    /// Uniformly random assignment drawn from the run seed.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcminParams {
    pub k: usize,
    /// Stopping probability of the random walk.
    pub alpha: f64,
    /// Probability of an attributed jump at each non-stopping step.
    pub beta: f64,
    /// Upper bound on orthogonal iterations.
    pub max_iterations: usize,
    /// Upper bound on rounding sweeps per iteration.
    pub rounding_iterations: usize,
    pub seed: u64,
    #[serde(default)]
    pub init: InitStrategy,
}

impl AcminParams {
    pub const DEFAULT_ALPHA: f64 = 0.2;
    pub const DEFAULT_BETA: f64 = 0.35;
    pub const DEFAULT_MAX_ITERATIONS: usize = 200;
    pub const DEFAULT_ROUNDING_ITERATIONS: usize = 50;

    pub fn new(k: usize) -> Self {
        Self {
            k,
            alpha: Self::DEFAULT_ALPHA,
            beta: Self::DEFAULT_BETA,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            rounding_iterations: Self::DEFAULT_ROUNDING_ITERATIONS,
            seed: 0,
            init: InitStrategy::Greedy,
        }
    }

    pub fn truncation_depth(&self) -> usize {
        truncation_depth(self.alpha)
    }

    /// Parameter ranges only; `k <= n` is checked against the graph by
    /// [`acmin`].
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::validation("k must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::validation(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::validation(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        Ok(())
    }
}

/// Wall-clock seconds spent per phase.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PhaseTimings {
    pub setup: f64,
    pub init: f64,
    pub orthogonal_iteration: f64,
    pub rounding: f64,
    pub objective: f64,
    pub total: f64,
}

/// Result of [`acmin`]. Its JSON form leaves out the timings so that two
/// runs with the same inputs serialize identically.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterReport {
    pub best_nci: Nci,
    pub best_aamc: f64,
    /// 0 when the initial assignment was never improved on.
    pub best_iteration: usize,
    /// Objective of the initial assignment followed by one entry per
    /// rounded iterate.
    pub aamc_trace: Vec<f64>,
    pub iterations_run: usize,
    /// Iteration at which the basis stopped moving, if it did.
    pub converged_at: Option<usize>,
    /// Iterations whose QR step replaced a collapsed direction.
    pub rank_deficient_steps: usize,
    /// Trace indices whose assignment left a cluster empty. Such an
    /// assignment is not a k-way partition and never replaces one that is.
    pub incomplete_iterations: Vec<usize>,
    #[serde(skip)]
    pub timings: PhaseTimings,
}

impl ClusterReport {
    /// Objective of the assignment kept so far, after each trace entry.
    pub fn running_best(&self) -> Vec<f64> {
        let mut best: Option<(bool, f64)> = None;
        self.aamc_trace
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let entry = (!self.incomplete_iterations.contains(&i), v);
                if best.is_none_or(|b| prefer(entry, b)) {
                    best = Some(entry);
                }
                best.expect("set above").1
            })
            .collect()
    }
}

/// Whether `(complete, value)` should replace the current best: complete
/// partitions win over incomplete ones, then the smaller objective wins.
fn prefer(candidate: (bool, f64), best: (bool, f64)) -> bool {
    (candidate.0 && !best.0) || (candidate.0 == best.0 && candidate.1 < best.1)
}

/// Clusters the nodes of `graph` into `params.k` groups.
pub fn acmin(graph: &AttributedGraph, params: &AcminParams) -> Result<ClusterReport> {
    let start = Instant::now();
    params.validate()?;
    let (n, k) = (graph.n(), params.k);
    if k > n {
        return Err(Error::contract(format!("k = {k} exceeds the node count {n}")));
    }
    let mut timings = PhaseTimings::default();
    let mut rng = StdRng::seed_from_u64(params.seed);

    let op = WalkOperator::new(graph, params.alpha, params.beta)?;
    timings.setup = start.elapsed().as_secs_f64();

    let clock = Instant::now();
    let initial = match params.init {
        InitStrategy::Greedy => init_nci(&op, k)?,
        InitStrategy::Random => random_nci(n, k, &mut rng)?,
    };
    // Empty clusters leave zero columns; QR fills them in.
    let mut basis = qr_thin(&initial.normalized_indicator())?.q.transpose();
    timings.init = clock.elapsed().as_secs_f64();

    let clock = Instant::now();
    let mut best_aamc = approx_aamc(&op, &initial)?;
    timings.objective += clock.elapsed().as_secs_f64();

    let mut best_complete = initial.non_empty_clusters() == k;
    let mut incomplete_iterations = if best_complete { Vec::new() } else { vec![0] };
    let mut best_nci = initial;
    let mut best_iteration = 0;
    let mut trace = vec![best_aamc];
    let mut iterations_run = 0;
    let mut converged_at = None;
    let mut rank_deficient_steps = 0;

    for iteration in 1..=params.max_iterations {
        let clock = Instant::now();
        let step = ortho_step(&op, &basis)?;
        timings.orthogonal_iteration += clock.elapsed().as_secs_f64();
        iterations_run = iteration;
        if !step.deficient.is_empty() {
            rank_deficient_steps += 1;
        }
        if has_converged(&step.basis, &basis, CONVERGENCE_TOL) {
            converged_at = Some(iteration);
            break;
        }
        basis = step.basis;

        let clock = Instant::now();
        let candidate = gen_nci(&basis, params.rounding_iterations, &mut rng)?;
        timings.rounding += clock.elapsed().as_secs_f64();

        let clock = Instant::now();
        let value = approx_aamc(&op, &candidate)?;
        timings.objective += clock.elapsed().as_secs_f64();

        trace.push(value);
        let complete = candidate.non_empty_clusters() == k;
        if !complete {
            incomplete_iterations.push(iteration);
        }
        if prefer((complete, value), (best_complete, best_aamc)) {
            best_aamc = value;
            best_complete = complete;
            best_nci = candidate;
            best_iteration = iteration;
        }
    }
    timings.total = start.elapsed().as_secs_f64();

    Ok(ClusterReport {
        best_nci,
        best_aamc,
        best_iteration,
        aamc_trace: trace,
        iterations_run,
        converged_at,
        rank_deficient_steps,
        incomplete_iterations,
        timings,
    })
}
