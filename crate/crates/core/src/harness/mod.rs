//! Seeded experiment drivers.
//!
//! Every run is a pure function of its [`ExperimentConfig`]: trials fan out
//! over rayon and are merged back in a fixed order, so the CSV bytes depend
//! only on the configuration and seed.

pub mod config;
pub mod dataset;
pub mod demos;
pub mod plot;
pub mod synthetic;
pub mod table;

pub use config::{Algorithm, DatasetReference, ExperimentConfig, WeightGenerator};
pub use dataset::{dataset_truth, run_ranking_dataset};
pub use demos::{pearson, run_failure_demo, run_indistinguishability_demo, FailureDemo, IndistinguishabilityReport};
pub use synthetic::{build_instance, run_algorithm, run_scaling_sweep, run_synthetic_sweep, trial_seed, TrialInstance};
pub use table::{CellSummary, ResultTable, TrialScore};
