//! Experiment harness: runs seeded batches of the dispatch optimizers,
//! persists their fronts, and derives metric, statistics and dispatch tables.

pub mod config;
pub mod experiment;
pub mod report;
pub mod store;

pub use config::{ExperimentConfig, Mode, OUTPUT_ROOT_ENV};
pub use experiment::{run_experiment, Experiment, RunRecord};
pub use report::{emit_reports, BoundsChoice, ComparisonRow, MetricsRow};
