//! Byzantine-robust rank aggregation from pairwise comparisons.
//!
//! Objects are compared along the edges of an Erdős–Rényi graph by a
//! population of voters, some of which are Byzantine. The crate provides
//!
//! * [`spectral`]: the Rank-Centrality transition matrix and its stationary
//!   distribution,
//! * [`filter`]: the voter-filtering front ends (BSR and the bucketed FBSR),
//! * [`voting`]: weight generators, the voter population with its adversary
//!   strategies, voter assignment and the vote ledger,
//! * [`metrics`]: relative L2 error and Kendall's tau,
//! * [`harness`]: seeded experiment sweeps that emit CSV tables.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix it to `f64`,
//! which is what the harness uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod filter;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod scalar;
pub mod spectral;
pub mod stream;
pub mod voting;

pub use error::{Error, Result};
pub use filter::{FilterMode, FilterParams, FilterReport};
pub use graph::ComparisonGraph;
pub use scalar::Scalar;
pub use spectral::{SpectralOptions, StationaryDistribution, TransitionMatrix};
pub use voting::{Strategy, VoteLedger, VoterPopulation, WeightVector};

/// Weight vector over `f64`.
pub type Weights = WeightVector<f64>;
/// Rank-Centrality transition matrix over `f64`.
pub type Transition = TransitionMatrix<f64>;
/// Stationary distribution over `f64`.
pub type Stationary = StationaryDistribution<f64>;
/// Power-iteration options over `f64`.
pub type Spectral = SpectralOptions<f64>;
