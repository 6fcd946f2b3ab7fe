//! Classification bias measured as the per-group sample size a statistical
//! test needs to detect the gap between a classifier's error rates on
//! different demographics. Larger sample sizes mean less bias.
//!
//! The crate also provides the difference and ratio baselines, per-group
//! rankings of classifiers, a seeded Monte Carlo power oracle that extends
//! the measure to any number of demographics, and the `bias-gauge` CLI.

pub mod error;
pub mod ingestion;
pub mod metrics;
pub mod oracle;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
pub use stats::{ErrorRate, SampleSize, SampleSizeResult, Sided, TestParams};
