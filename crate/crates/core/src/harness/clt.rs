//! Sampling behaviour of the estimated lower shift as `n` grows.
//!
//! For the normal-location model `theta_tilde - L(y) ~ N(z (1 + eps) / sqrt(m), 1/m)`,
//! so the `p = alpha/2` quantile is `xi = z eps / sqrt(m)` and the density there is
//! `G'(xi) = sqrt(m) phi(z)`, with `z = z_{1-alpha/2}`. The scaled error
//! `sqrt(n) (xi_hat - xi) G'(xi)` should be approximately `N(0, p (1 - p))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{correct_interval, CorrectionSettings};
use crate::error::{Error, Result};
use crate::models::NormalLocationSpec;
use crate::rng::RngStream;
use crate::stats::{mean, sample_variance, std_normal_pdf, std_normal_quantile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltConfig {
    pub m: usize,
    pub epsilon: f64,
    pub n_values: Vec<usize>,
    pub reps: usize,
    pub alpha: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CltRow {
    pub n: usize,
    pub reps: usize,
    /// Sample variance of the scaled errors.
    pub variance: f64,
    /// `p (1 - p)` at `p = alpha / 2`.
    pub target: f64,
    /// Sample mean of `sqrt(n) (xi_hat - xi)`.
    pub mean: f64,
    /// Standard error of `mean`.
    pub mean_se: f64,
}

impl CltRow {
    pub fn relative_variance_error(&self) -> f64 {
        (self.variance - self.target).abs() / self.target
    }
}

/// For each `n`, `reps` corrections of fresh Example-1 data at zero, scaled
/// as `sqrt(n) (xi_hat - xi) G'(xi)`. Repetition `r` at size `n` draws from
/// `(seed, n, r)`, so a row does not depend on the other sizes requested.
pub fn clt_check(cfg: &CltConfig) -> Result<Vec<CltRow>> {
    let spec = NormalLocationSpec::new(cfg.m, cfg.epsilon)?;
    if cfg.reps < 2 {
        return Err(Error::config("clt check needs at least two repetitions"));
    }
    if cfg.n_values.is_empty() {
        return Err(Error::config("clt check needs at least one n"));
    }
    let p = cfg.alpha / 2.0;
    let z = std_normal_quantile(1.0 - p)?;
    let sqrt_m = (cfg.m as f64).sqrt();
    let xi = z * cfg.epsilon / sqrt_m;
    let density = sqrt_m * std_normal_pdf(z);
    let root = RngStream::new(cfg.seed);

    cfg.n_values
        .iter()
        .map(|&n| {
            let settings = CorrectionSettings::new(cfg.alpha, n);
            settings.validate()?;
            let errors: Vec<f64> = (0..cfg.reps)
                .into_par_iter()
                .map(|r| {
                    let s = root.descend(&[n as u64, r as u64]);
                    let x = spec.simulate(0.0, &s.child(0));
                    let res = correct_interval(&spec, &x, &settings, 0, &s.child(1))?;
                    Ok((n as f64).sqrt() * (res.shift_lower - xi))
                })
                .collect::<Result<_>>()?;
            let scaled: Vec<f64> = errors.iter().map(|e| e * density).collect();
            let variance = sample_variance(&scaled).unwrap_or(f64::NAN);
            let mean_err = mean(&errors).unwrap_or(f64::NAN);
            let mean_se = (sample_variance(&errors).unwrap_or(f64::NAN) / cfg.reps as f64).sqrt();
            Ok(CltRow {
                n,
                reps: cfg.reps,
                variance,
                target: p * (1.0 - p),
                mean: mean_err,
                mean_se,
            })
        })
        .collect()
}
