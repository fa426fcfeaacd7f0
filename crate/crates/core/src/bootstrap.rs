//! Parametric bootstrap baselines: percentile intervals, the prepivoted
//! double bootstrap, and the simulation correction applied on top of
//! percentile intervals.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{correct_interval, CorrectionResult, CorrectionSettings, Interval, ModelBinding};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::stats::EmpiricalDistribution;

pub const MIN_OUTER: usize = 50;
pub const MIN_INNER: usize = 20;
pub const DEFAULT_OUTER: usize = 400;
pub const DEFAULT_INNER: usize = 25;
/// Outer replicates per interval when the bootstrap is the raw method of a correction.
pub const DEFAULT_CORRECTED_OUTER: usize = 99;

const OUTER: u64 = 0;
const INNER: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Outer replicates `B`.
    pub outer: usize,
    /// Inner replicates `B2` per outer replicate; double bootstrap only.
    pub inner: usize,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            outer: DEFAULT_OUTER,
            inner: DEFAULT_INNER,
        }
    }
}

impl BootstrapConfig {
    pub fn new(outer: usize, inner: usize) -> Self {
        Self { outer, inner }
    }

    pub fn validate(&self, double: bool) -> Result<()> {
        if self.outer < MIN_OUTER {
            return Err(Error::config(format!(
                "bootstrap replicates B={} below minimum {MIN_OUTER}",
                self.outer
            )));
        }
        if double && self.inner < MIN_INNER {
            return Err(Error::config(format!(
                "inner bootstrap replicates B2={} below minimum {MIN_INNER}",
                self.inner
            )));
        }
        Ok(())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::config(format!("alpha {alpha} outside (0, 1)")))
    }
}

/// Re-estimates from `count` datasets simulated at `theta`, one row per replicate.
fn re_estimates<B: ModelBinding>(
    binding: &B,
    theta: &[f64],
    count: usize,
    stream: &RngStream,
) -> Result<Vec<Vec<f64>>> {
    (0..count)
        .into_par_iter()
        .map(|b| {
            let y = binding
                .simulate(theta, &stream.child(b as u64))
                .map_err(|e| e.at_replicate(b))?;
            binding.estimate(&y).map_err(|e| e.at_replicate(b))
        })
        .collect()
}

fn margin_column(rows: &[Vec<f64>], margin: usize) -> Result<Vec<f64>> {
    rows.iter()
        .map(|r| {
            r.get(margin)
                .copied()
                .ok_or_else(|| Error::config(format!("margin {margin} out of range")))
        })
        .collect()
}

fn percentile(column: Vec<f64>, lo: f64, hi: f64, level: f64) -> Result<Interval> {
    let d = EmpiricalDistribution::new(column)?;
    Interval::new(d.quantile(lo)?, d.quantile(hi)?, level)
}

/// Percentile intervals for every margin from one set of `B` bootstrap datasets.
pub fn parametric_bootstrap_intervals<B: ModelBinding>(
    binding: &B,
    x: &B::Data,
    alpha: f64,
    cfg: &BootstrapConfig,
    stream: &RngStream,
) -> Result<Vec<Interval>> {
    check_alpha(alpha)?;
    cfg.validate(false)?;
    let theta_hat = binding.estimate(x)?;
    let rows = re_estimates(binding, &theta_hat, cfg.outer, &stream.child(OUTER))?;
    (0..binding.dim())
        .map(|j| percentile(margin_column(&rows, j)?, alpha / 2.0, 1.0 - alpha / 2.0, 1.0 - alpha))
        .collect()
}

/// Percentile interval: the `(alpha/2, 1 - alpha/2)` empirical quantiles of
/// `B` re-estimates from datasets simulated at the fitted parameter.
pub fn parametric_bootstrap_interval<B: ModelBinding>(
    binding: &B,
    x: &B::Data,
    alpha: f64,
    cfg: &BootstrapConfig,
    margin: usize,
    stream: &RngStream,
) -> Result<Interval> {
    parametric_bootstrap_intervals(binding, x, alpha, cfg, stream)?
        .get(margin)
        .copied()
        .ok_or_else(|| Error::config(format!("margin {margin} out of range")))
}

/// Double-bootstrap interval together with the calibrated percentile levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleBootstrapInterval {
    pub interval: Interval,
    pub adjusted_lower_level: f64,
    pub adjusted_upper_level: f64,
}

/// Calibrated percentile interval by prepivoting.
///
/// For each outer re-estimate `t_b`, an inner bootstrap at `t_b` gives
/// `u_b`, the fraction of inner re-estimates at or below the original
/// estimate. The `(alpha/2, 1 - alpha/2)` empirical quantiles of the `u_b`
/// replace the nominal levels of the outer percentile interval. Levels are
/// clamped to `[1/(2B), 1 - 1/(2B)]`, which maps them onto the extreme outer
/// order statistics when the calibration asks for more.
pub fn double_bootstrap<B: ModelBinding>(
    binding: &B,
    x: &B::Data,
    alpha: f64,
    cfg: &BootstrapConfig,
    margin: usize,
    stream: &RngStream,
) -> Result<DoubleBootstrapInterval> {
    check_alpha(alpha)?;
    cfg.validate(true)?;
    if margin >= binding.dim() {
        return Err(Error::config(format!("margin {margin} out of range")));
    }
    let theta_hat = binding.estimate(x)?;
    let target = theta_hat[margin];
    let outer_stream = stream.child(OUTER);
    let inner_stream = stream.child(INNER);

    let pairs: Vec<(f64, f64)> = (0..cfg.outer)
        .into_par_iter()
        .map(|b| {
            let fail = |e: Error| e.at_replicate(b);
            let y = binding
                .simulate(&theta_hat, &outer_stream.child(b as u64))
                .map_err(fail)?;
            let t_b = binding.estimate(&y).map_err(fail)?;
            let inner = inner_stream.child(b as u64);
            let mut below = 0usize;
            for j in 0..cfg.inner {
                let yy = binding.simulate(&t_b, &inner.child(j as u64)).map_err(fail)?;
                if binding.estimate(&yy).map_err(fail)?[margin] <= target {
                    below += 1;
                }
            }
            Ok((t_b[margin], below as f64 / cfg.inner as f64))
        })
        .collect::<Result<_>>()?;

    let (outer, u): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let u = EmpiricalDistribution::new(u)?;
    let floor = 0.5 / cfg.outer as f64;
    let lo = u.quantile(alpha / 2.0)?.clamp(floor, 1.0 - floor);
    let hi = u.quantile(1.0 - alpha / 2.0)?.clamp(floor, 1.0 - floor);
    Ok(DoubleBootstrapInterval {
        interval: percentile(outer, lo, hi, 1.0 - alpha)?,
        adjusted_lower_level: lo,
        adjusted_upper_level: hi,
    })
}

pub fn double_bootstrap_interval<B: ModelBinding>(
    binding: &B,
    x: &B::Data,
    alpha: f64,
    cfg: &BootstrapConfig,
    margin: usize,
    stream: &RngStream,
) -> Result<Interval> {
    Ok(double_bootstrap(binding, x, alpha, cfg, margin, stream)?.interval)
}

/// Adapter that makes the percentile bootstrap the interval method of a model.
#[derive(Debug, Clone)]
pub struct PercentileBootstrap<'a, B> {
    pub model: &'a B,
    pub cfg: BootstrapConfig,
}

impl<'a, B: ModelBinding> PercentileBootstrap<'a, B> {
    pub fn new(model: &'a B, cfg: BootstrapConfig) -> Self {
        Self { model, cfg }
    }
}

impl<B: ModelBinding> ModelBinding for PercentileBootstrap<'_, B> {
    type Data = B::Data;

    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn simulate(&self, theta: &[f64], stream: &RngStream) -> Result<B::Data> {
        self.model.simulate(theta, stream)
    }

    fn estimate(&self, data: &B::Data) -> Result<Vec<f64>> {
        self.model.estimate(data)
    }

    fn intervals(&self, data: &B::Data, alpha: f64, stream: &RngStream) -> Result<Vec<Interval>> {
        parametric_bootstrap_intervals(self.model, data, alpha, &self.cfg, stream)
    }
}

/// The simulation correction with percentile-bootstrap intervals (at
/// `cfg.outer` replicates) as the raw method.
pub fn corrected_bootstrap_interval<B: ModelBinding>(
    binding: &B,
    x: &B::Data,
    alpha: f64,
    cfg: &BootstrapConfig,
    n: usize,
    margin: usize,
    stream: &RngStream,
) -> Result<CorrectionResult> {
    let boot = PercentileBootstrap::new(binding, *cfg);
    correct_interval(&boot, x, &CorrectionSettings::new(alpha, n), margin, stream)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::NormalLocationSpec;

    /// Every simulated dataset re-estimates to the same value.
    struct Constant(f64);

    impl ModelBinding for Constant {
        type Data = f64;

        fn dim(&self) -> usize {
            1
        }

        fn simulate(&self, _: &[f64], _: &RngStream) -> Result<f64> {
            Ok(self.0)
        }

        fn estimate(&self, d: &f64) -> Result<Vec<f64>> {
            Ok(vec![*d])
        }

        fn intervals(&self, d: &f64, alpha: f64, _: &RngStream) -> Result<Vec<Interval>> {
            Ok(vec![Interval::new(d - 0.5, d + 0.5, 1.0 - alpha)?])
        }
    }

    #[test]
    fn zero_variance_bootstrap_collapses() {
        let b = Constant(3.0);
        let cfg = BootstrapConfig::new(60, 20);
        let s = RngStream::new(0);
        let p = parametric_bootstrap_interval(&b, &3.0, 0.05, &cfg, 0, &s).unwrap();
        assert_eq!((p.lower, p.upper), (3.0, 3.0));
        let d = double_bootstrap_interval(&b, &3.0, 0.05, &cfg, 0, &s).unwrap();
        assert_eq!((d.lower, d.upper), (3.0, 3.0));
        let c = corrected_bootstrap_interval(&b, &3.0, 0.05, &cfg, 20, 0, &s).unwrap();
        assert_eq!((c.corrected.lower, c.corrected.upper), (3.0, 3.0));
        assert_eq!((c.shift_lower, c.shift_upper), (0.0, 0.0));
    }

    #[test]
    fn percentile_endpoints_are_order_statistics() {
        let spec = NormalLocationSpec::new(10, 0.0).unwrap();
        let x = spec.simulate(0.0, &RngStream::new(1));
        let cfg = BootstrapConfig::new(200, 20);
        let s = RngStream::new(2);
        let int = parametric_bootstrap_interval(&spec, &x, 0.1, &cfg, 0, &s).unwrap();

        let xbar = x.iter().sum::<f64>() / x.len() as f64;
        let mut oracle: Vec<f64> = (0..200)
            .map(|b| {
                let y = spec.simulate(xbar, &s.child(OUTER).child(b));
                y.iter().sum::<f64>() / y.len() as f64
            })
            .collect();
        oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // ranks ceil(200 * 0.05) = 10 and ceil(200 * 0.95) = 190
        assert_eq!(int.lower, oracle[9]);
        assert_eq!(int.upper, oracle[189]);
    }

    #[test]
    fn configuration_checks() {
        let b = Constant(0.0);
        let s = RngStream::new(0);
        assert!(
            parametric_bootstrap_interval(&b, &0.0, 0.05, &BootstrapConfig::new(49, 20), 0, &s)
                .unwrap_err()
                .is_config()
        );
        assert!(
            double_bootstrap_interval(&b, &0.0, 0.05, &BootstrapConfig::new(100, 1), 0, &s)
                .unwrap_err()
                .is_config()
        );
        assert!(
            double_bootstrap_interval(&b, &0.0, 0.05, &BootstrapConfig::new(100, 19), 0, &s)
                .unwrap_err()
                .is_config()
        );
        // B2 is irrelevant to the single bootstrap.
        assert!(parametric_bootstrap_interval(&b, &0.0, 0.05, &BootstrapConfig::new(100, 1), 0, &s).is_ok());
    }

    #[test]
    fn pivotal_model_keeps_nominal_levels() {
        // For a correctly specified location family, u_b is uniform, so the
        // calibrated levels sit near (alpha/2, 1 - alpha/2).
        let spec = NormalLocationSpec::new(20, 0.0).unwrap();
        let x = spec.simulate(0.0, &RngStream::new(5));
        let cfg = BootstrapConfig::new(1000, 100);
        let r = double_bootstrap(&spec, &x, 0.1, &cfg, 0, &RngStream::new(6)).unwrap();
        assert!(r.adjusted_lower_level > 0.0 && r.adjusted_upper_level < 1.0);
        assert!(r.adjusted_lower_level <= r.adjusted_upper_level);
        assert!((r.adjusted_lower_level - 0.05).abs() < 0.03, "{r:?}");
        assert!((r.adjusted_upper_level - 0.95).abs() < 0.03, "{r:?}");
        let plain = parametric_bootstrap_interval(&spec, &x, 0.1, &cfg, 0, &RngStream::new(6)).unwrap();
        assert!((r.interval.lower - plain.lower).abs() < 0.05);
        assert!((r.interval.upper - plain.upper).abs() < 0.05);
    }
}
