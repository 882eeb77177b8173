//! Attributed graph clustering by minimizing average attributed multi-hop
//! conductance (AAMC).
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the attributed graph, its file formats and the
//!   matrix-free attributed random walk operator.
//! * [`linalg`] has the dense panel type plus thin QR, small SVD and k-means.
//! * [`cluster`] is the clustering algorithm itself: greedy seeding,
//!   orthogonal iterations, indicator rounding and the truncated AAMC.
//! * [`oracle`] contains dense and brute-force reference implementations and
//!   the spectral clustering baseline.
//! * [`metrics`] scores a clustering against labels or the graph.
//!
//! ```no_run
//! use acmin::cluster::{acmin, AcminParams};
//! use acmin::graph::io::load_graph;
//!
//! let graph = load_graph("cora.edges", "cora.attrs")?;
//! let report = acmin(&graph, &AcminParams::new(7))?;
//! println!("AAMC = {}", report.best_aamc);
//! # Ok::<(), acmin::Error>(())
//! ```

pub mod cluster;
mod error;
pub mod graph;
pub mod linalg;
pub mod metrics;
pub mod nci;
pub mod oracle;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{AttributedGraph, SparseMatrix, WalkOperator};
pub use linalg::DensePanel;
pub use nci::Nci;
