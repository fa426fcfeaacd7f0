//! Boxplot summaries of corrected endpoints along one configuration axis.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ModelConfig;
use crate::engine::{correct_interval, CorrectionResult, CorrectionSettings};
use crate::error::{Error, Result};
use crate::models::{NormalLocationSpec, NormalScaleSpec};
use crate::rng::RngStream;
use crate::stats::EmpiricalDistribution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepAxis {
    Epsilon(Vec<f64>),
    /// Fixed simulation parameter in place of the estimate.
    ThetaTilde(Vec<f64>),
    M(Vec<usize>),
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Epsilon(_) => "epsilon",
            SweepAxis::ThetaTilde(_) => "theta_tilde",
            SweepAxis::M(_) => "m",
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            SweepAxis::Epsilon(v) | SweepAxis::ThetaTilde(v) => v.clone(),
            SweepAxis::M(v) => v.iter().map(|&m| m as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

impl Quartiles {
    pub fn of(values: Vec<f64>) -> Result<Self> {
        let d = EmpiricalDistribution::new(values)?;
        Ok(Self {
            q1: d.quantile(0.25)?,
            median: d.quantile(0.5)?,
            q3: d.quantile(0.75)?,
        })
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub raw_lower: Quartiles,
    pub corrected_lower: Quartiles,
    pub corrected_upper: Quartiles,
    /// Corrected minus exactly corrected lower endpoint.
    pub lower_error: Quartiles,
    pub upper_error: Quartiles,
}

/// Fixed part of a sweep; the axis overrides one field per value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub model: ModelConfig,
    pub alpha: f64,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub theta_true: f64,
}

enum Normal {
    Location(NormalLocationSpec),
    Scale(NormalScaleSpec),
}

impl Normal {
    fn correct(&self, x: &[f64], s: &CorrectionSettings, stream: &RngStream) -> Result<CorrectionResult> {
        let x = x.to_vec();
        match self {
            Normal::Location(spec) => correct_interval(spec, &x, s, 0, stream),
            Normal::Scale(spec) => correct_interval(spec, &x, s, 0, stream),
        }
    }

    fn simulate(&self, theta: f64, stream: &RngStream) -> Result<Vec<f64>> {
        match self {
            Normal::Location(spec) => Ok(spec.simulate(theta, stream)),
            Normal::Scale(spec) => spec.simulate(theta, stream),
        }
    }

    /// Exact `(lower, upper)` shifts.
    fn exact_shifts(&self, alpha: f64) -> Result<(f64, f64)> {
        match self {
            Normal::Location(spec) => {
                let s = spec.exact_lower_shift(alpha)?;
                Ok((s, -s))
            }
            Normal::Scale(spec) => Ok((spec.exact_shift(), spec.exact_shift())),
        }
    }
}

/// Per axis value, `reps` replicate analyses at `theta_true`, summarized by
/// quartiles. Replicate `r` uses the same substreams at every axis value.
pub fn sweep(cfg: &SweepConfig, axis: &SweepAxis) -> Result<Vec<SweepRow>> {
    let values = axis.values();
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::config("sweep axis values must be finite and nonempty"));
    }
    if cfg.reps < 1 {
        return Err(Error::config("sweep needs at least one replicate"));
    }
    let (base_m, base_eps) = match cfg.model {
        ModelConfig::NormalLocation { m, epsilon } | ModelConfig::NormalScale { m, epsilon } => (m, epsilon),
        ModelConfig::GkMa1 { .. } => return Err(Error::config("sweeps support the normal models only")),
    };
    let root = RngStream::new(cfg.seed);

    values
        .iter()
        .map(|&v| {
            let (m, eps) = match axis {
                SweepAxis::Epsilon(_) => (base_m, v),
                SweepAxis::M(_) => (v as usize, base_eps),
                SweepAxis::ThetaTilde(_) => (base_m, base_eps),
            };
            let model = match cfg.model {
                ModelConfig::NormalLocation { .. } => Normal::Location(NormalLocationSpec::new(m, eps)?),
                _ => Normal::Scale(NormalScaleSpec::new(m, eps)?),
            };
            let mut settings = CorrectionSettings::new(cfg.alpha, cfg.n);
            if let SweepAxis::ThetaTilde(_) = axis {
                settings = settings.with_theta(vec![v]);
            }
            settings.validate()?;
            let (exact_lo, exact_hi) = model.exact_shifts(cfg.alpha)?;

            let results: Vec<CorrectionResult> = (0..cfg.reps)
                .into_par_iter()
                .map(|r| {
                    let s = root.child(r as u64);
                    let x = model.simulate(cfg.theta_true, &s.child(0))?;
                    model.correct(&x, &settings, &s.child(1)).map_err(|e| e.at_replicate(r))
                })
                .collect::<Result<_>>()?;

            let col = |f: &dyn Fn(&CorrectionResult) -> f64| Quartiles::of(results.iter().map(f).collect());
            Ok(SweepRow {
                value: v,
                raw_lower: col(&|r| r.raw.lower)?,
                corrected_lower: col(&|r| r.corrected.lower)?,
                corrected_upper: col(&|r| r.corrected.upper)?,
                lower_error: col(&|r| r.corrected.lower - (r.raw.lower + exact_lo))?,
                upper_error: col(&|r| r.corrected.upper - (r.raw.upper + exact_hi))?,
            })
        })
        .collect()
}
