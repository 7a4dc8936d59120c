//! Experiment harness for `ttsketch-core`.
//!
//! Each experiment draws random targets, decomposes them with the
//! deterministic and the randomized TT-SVD (or an ALS half-sweep) at
//! identical final ranks, and reports one [`SampleRecord`] per sample and
//! parameter value.

pub mod config;
pub mod error;
pub mod experiments;
pub mod record;
pub mod stats;

pub use config::{Experiment, ExperimentConfig};
pub use error::{CliError, Result};
pub use experiments::run;
pub use record::SampleRecord;
