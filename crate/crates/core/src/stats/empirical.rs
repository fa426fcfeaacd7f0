use super::check_probability;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// 1-based rank `ceil(n p)` clamped to `[1, n]`.
///
/// `n p` is nudged down by a relative 1e-12 before the ceiling so that a
/// product such as `1000 * 0.025`, which is not exact in binary, still lands on
/// its intended integer.
pub fn quantile_rank(n: usize, p: f64) -> usize {
    let x = n as f64 * p;
    let r = (x - x.abs() * 1e-12).ceil();
    (r.max(1.0) as usize).min(n)
}

/// Sorted sample with order-statistic quantile lookup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("empirical distribution needs at least one sample"));
        }
        if let Some(bad) = samples.iter().find(|x| x.is_nan()) {
            return Err(Error::domain(format!("non-numeric sample {bad}")));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Order statistic of rank `max(1, ceil(n p))`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        check_probability(p)?;
        Ok(self.samples[quantile_rank(self.samples.len(), p) - 1])
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.samples.len() as f64
    }
}
