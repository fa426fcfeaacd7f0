//! Simulation-based correction of interval endpoints.
//!
//! Given observed data `x`, an estimate `theta_tilde` and an interval method
//! producing `(L(x), U(x))`, the engine simulates `n` datasets at
//! `theta_tilde`, applies the same interval method to each, and shifts the raw
//! endpoints:
//!
//! ```text
//! L_c(x) = L(x) + q_{alpha/2}   { theta_tilde - L(y_i) }
//! U_c(x) = U(x) + q_{1-alpha/2} { theta_tilde - U(y_i) }
//! ```
//!
//! where `q_p` is the order statistic of rank `ceil(n p)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::EmpiricalDistribution;

/// Smallest replicate count the engine accepts.
pub const MIN_REPLICATES: usize = 20;
/// Replicate count used when none is configured.
pub const DEFAULT_REPLICATES: usize = 500;

// Substream layout below the caller's stream.
const RAW_INTERVAL: u64 = 0;
const REPLICATE_DATA: u64 = 1;
const REPLICATE_INTERVAL: u64 = 2;

/// An interval at nominal level `1 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    /// Nominal coverage `1 - alpha`.
    pub level: f64,
}

impl Interval {
    /// Builds an interval, rejecting `lower > upper` and non-finite endpoints.
    pub fn new(lower: f64, upper: f64, level: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::run(format!("non-finite interval ({lower}, {upper})")));
        }
        if lower > upper {
            return Err(Error::run(format!(
                "interval endpoints out of order ({lower}, {upper})"
            )));
        }
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::domain(format!("interval level {level} outside (0, 1)")));
        }
        Ok(Self { lower, upper, level })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// The pluggable model: simulator, estimator and interval method.
///
/// `intervals` returns one interval per parameter margin. Interval methods
/// that are themselves stochastic (bootstrap, ABC) draw only from the stream
/// they are handed.
pub trait ModelBinding: Sync {
    type Data: Send + Sync;

    /// Number of parameter margins.
    fn dim(&self) -> usize;

    fn simulate(&self, theta: &[f64], stream: &RngStream) -> Result<Self::Data>;

    fn estimate(&self, data: &Self::Data) -> Result<Vec<f64>>;

    fn intervals(&self, data: &Self::Data, alpha: f64, stream: &RngStream) -> Result<Vec<Interval>>;

    fn interval(&self, data: &Self::Data, alpha: f64, margin: usize, stream: &RngStream) -> Result<Interval> {
        let all = self.intervals(data, alpha, stream)?;
        all.get(margin)
            .copied()
            .ok_or_else(|| Error::config(format!("margin {margin} out of range for {} margins", all.len())))
    }
}

/// Correction settings shared by every margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionSettings {
    pub alpha: f64,
    /// Number of simulated datasets.
    pub n: usize,
    /// Replaces `estimate(x)` as the simulation parameter when set.
    pub theta_override: Option<Vec<f64>>,
}

impl CorrectionSettings {
    pub fn new(alpha: f64, n: usize) -> Self {
        Self {
            alpha,
            n,
            theta_override: None,
        }
    }

    pub fn with_theta(mut self, theta: Vec<f64>) -> Self {
        self.theta_override = Some(theta);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if self.n < MIN_REPLICATES {
            return Err(Error::config(format!(
                "replicate count {} below minimum {MIN_REPLICATES}",
                self.n
            )));
        }
        Ok(())
    }
}

impl Default for CorrectionSettings {
    fn default() -> Self {
        Self::new(0.05, DEFAULT_REPLICATES)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionResult {
    pub margin: usize,
    pub raw: Interval,
    /// `raw` shifted by the two empirical quantiles. May be out of order when
    /// `degenerate` is set.
    pub corrected: Interval,
    pub shift_lower: f64,
    pub shift_upper: f64,
    pub n: usize,
    pub theta_tilde: Vec<f64>,
    /// Set when the shifted endpoints cross.
    pub degenerate: bool,
}

/// Replicate shift samples for every margin, before quantile extraction.
#[derive(Debug, Clone)]
pub struct ShiftSamples {
    /// `lower[j]` holds `theta_tilde[j] - L_j(y_i)` over replicates `i`.
    pub lower: Vec<Vec<f64>>,
    /// `upper[j]` holds `theta_tilde[j] - U_j(y_i)`.
    pub upper: Vec<Vec<f64>>,
}

/// Simulates `n` datasets at `theta_tilde` and collects the shift samples.
///
/// Replicate `i` uses substreams derived from `(stream, i)` only, so the
/// result does not depend on evaluation order.
pub fn shift_samples<B: ModelBinding>(
    binding: &B,
    theta_tilde: &[f64],
    alpha: f64,
    n: usize,
    stream: &RngStream,
) -> Result<ShiftSamples> {
    let dim = binding.dim();
    if theta_tilde.len() != dim {
        return Err(Error::config(format!(
            "estimate has {} components, model has {dim} margins",
            theta_tilde.len()
        )));
    }
    let per_replicate: Vec<Vec<Interval>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let y = binding
                .simulate(theta_tilde, &stream.descend(&[REPLICATE_DATA, i as u64]))
                .map_err(|e| e.at_replicate(i))?;
            let ints = binding
                .intervals(&y, alpha, &stream.descend(&[REPLICATE_INTERVAL, i as u64]))
                .map_err(|e| e.at_replicate(i))?;
            if ints.len() != dim {
                return Err(Error::run(format!("interval method returned {} margins", ints.len())).at_replicate(i));
            }
            Ok(ints)
        })
        .collect::<Result<_>>()?;

    let mut lower = vec![Vec::with_capacity(n); dim];
    let mut upper = vec![Vec::with_capacity(n); dim];
    for ints in &per_replicate {
        for (j, int) in ints.iter().enumerate() {
            lower[j].push(theta_tilde[j] - int.lower);
            upper[j].push(theta_tilde[j] - int.upper);
        }
    }
    Ok(ShiftSamples { lower, upper })
}

/// Applies the shift rule to one raw interval.
pub fn apply_shifts(
    margin: usize,
    raw: Interval,
    lower_samples: Vec<f64>,
    upper_samples: Vec<f64>,
    alpha: f64,
    theta_tilde: &[f64],
) -> Result<CorrectionResult> {
    let n = lower_samples.len();
    let shift_lower = EmpiricalDistribution::new(lower_samples)?.quantile(alpha / 2.0)?;
    let shift_upper = EmpiricalDistribution::new(upper_samples)?.quantile(1.0 - alpha / 2.0)?;
    let corrected = Interval {
        lower: raw.lower + shift_lower,
        upper: raw.upper + shift_upper,
        level: raw.level,
    };
    Ok(CorrectionResult {
        margin,
        raw,
        corrected,
        shift_lower,
        shift_upper,
        n,
        theta_tilde: theta_tilde.to_vec(),
        degenerate: corrected.lower > corrected.upper,
    })
}

/// Corrects every margin from precomputed raw intervals and a fixed estimate.
pub fn correct_from_raw<B: ModelBinding>(
    binding: &B,
    raw: &[Interval],
    theta_tilde: &[f64],
    settings: &CorrectionSettings,
    stream: &RngStream,
) -> Result<Vec<CorrectionResult>> {
    settings.validate()?;
    if raw.len() != binding.dim() {
        return Err(Error::config(format!(
            "{} raw intervals for {} margins",
            raw.len(),
            binding.dim()
        )));
    }
    let samples = shift_samples(binding, theta_tilde, settings.alpha, settings.n, stream)?;
    raw.iter()
        .zip(samples.lower.into_iter().zip(samples.upper))
        .enumerate()
        .map(|(j, (r, (lo, up)))| apply_shifts(j, *r, lo, up, settings.alpha, theta_tilde))
        .collect()
}

fn resolve_theta<B: ModelBinding>(binding: &B, x: &B::Data, settings: &CorrectionSettings) -> Result<Vec<f64>> {
    match &settings.theta_override {
        Some(t) => Ok(t.clone()),
        None => binding.estimate(x),
    }
}

/// Corrects every margin's interval, reusing one set of simulated datasets.
pub fn correct_margins<B: ModelBinding>(
    binding: &B,
    x: &B::Data,
    settings: &CorrectionSettings,
    stream: &RngStream,
) -> Result<Vec<CorrectionResult>> {
    settings.validate()?;
    let theta_tilde = resolve_theta(binding, x, settings)?;
    let raw = binding.intervals(x, settings.alpha, &stream.child(RAW_INTERVAL))?;
    correct_from_raw(binding, &raw, &theta_tilde, settings, stream)
}

/// Corrects a single margin's interval.
pub fn correct_interval<B: ModelBinding>(
    binding: &B,
    x: &B::Data,
    settings: &CorrectionSettings,
    margin: usize,
    stream: &RngStream,
) -> Result<CorrectionResult> {
    if margin >= binding.dim() {
        return Err(Error::config(format!(
            "margin {margin} out of range for {} margins",
            binding.dim()
        )));
    }
    let mut all = correct_margins(binding, x, settings, stream)?;
    Ok(all.swap_remove(margin))
}
