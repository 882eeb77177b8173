//! Reference computations that materialize or enumerate what the main
//! algorithm avoids, plus the dense spectral clustering baseline.
//!
//! Everything here is quadratic in `n` or worse and refuses to run above a
//! size cap.

mod conductance;
mod dense;
mod simulate;
mod usc;

pub use conductance::{
    brute_force_min_aamc, classic_conductance, exact_aamc, for_each_partition, partition_aamc_values,
    trace_form_aamc, BruteForce, BRUTE_FORCE_MAX_N,
};
pub use dense::{materialize_s, materialize_s_capped, DenseS, DENSE_MAX_N};
pub use simulate::{simulate_walks, simulate_walks_parallel, WalkSampler, WalkTrace, DEFAULT_MAX_LEN};
pub use usc::{usc, usc_capped, UscResult};
