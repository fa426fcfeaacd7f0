//! Simulation-based correction of confidence and credible interval endpoints.
//!
//! An interval method that misses its nominal coverage is repaired by
//! simulating replicate datasets at a consistent estimate, applying the same
//! method to each replicate, and shifting the observed endpoints by empirical
//! quantiles of `estimate - endpoint`. See [`engine`] for the procedure,
//! [`models`] for the worked models, [`bootstrap`] for the baselines it is
//! compared with, [`abc`] for the likelihood-free demonstration and
//! [`harness`] for coverage studies.

pub mod abc;
pub mod bootstrap;
pub mod engine;
pub mod error;
pub mod harness;
pub mod models;
pub mod rng;
pub mod stats;

pub use engine::{correct_interval, correct_margins, CorrectionResult, CorrectionSettings, Interval, ModelBinding};
pub use error::{Error, Result};
pub use rng::{sample_std_normal, RngStream};
pub use stats::EmpiricalDistribution;
