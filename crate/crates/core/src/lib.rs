//! Round-based simulation of hierarchical sensor-network clustering.
//!
//! Three cluster-formation protocols are implemented over a shared field,
//! radio and topology model:
//!
//! - **LEACH**: every round, nodes volunteer as cluster heads with the rotating
//!   threshold `T(n)` and members join the nearest head.
//! - **LEACH-C**: every round, the base station picks `k` heads among the
//!   above-average-energy nodes so that the total head-member distance is small.
//! - **RCFT**: heads are drawn at random once, then each head walks along the
//!   hop graph to balance the hop distance to its closest peer head against the
//!   hop distance to its farthest member. The resulting clusters stay fixed for
//!   the rest of the run.
//!
//! [`engine::run_experiment`] drives one (protocol, seed) run; [`batch`] fans a
//! set of runs out over a rayon pool when the `parallel` feature is enabled and
//! runs them in order otherwise.

pub mod batch;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod model;
pub mod protocols;
pub mod rng;
pub mod topology;

pub use engine::{run_experiment, ExperimentLog, RoundReport};
pub use error::{Error, Result};
pub use model::{generate_field, NetworkConfig, NodeId, Point, RadioModel, SensorNode};
pub use protocols::{Clustering, MoveRule, Protocol, ProtocolParams};
pub use rng::RngStream;
pub use topology::{ConnectivityGraph, HopField};
