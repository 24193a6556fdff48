//! Experiment harness for the QDDS optimiser: configuration, seeded trials,
//! CSV traces, SVG plots and JSON reports.

pub mod config;
pub mod error;
pub mod experiment;
pub mod plot;
pub mod presets;
pub mod report;
pub mod stats;
pub mod trace;
pub mod validate;

pub use config::{EmitFlags, ExperimentConfig, ExperimentObjective, Function};
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, ExperimentOutcome};
pub use presets::{all_presets, find_preset, Preset};
pub use report::{read_report, Report, TrialRecord};
pub use stats::{aggregate_stats, TrialStats};
