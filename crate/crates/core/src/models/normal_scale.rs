//! Normal variance model with known zero mean.
//!
//! The interval method is the chi-square pivot interval with both endpoints
//! pulled down by `epsilon`. The estimator is the sample variance with the
//! sample mean subtracted, even though the true mean is known.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{check_epsilon, check_sample_size, scalar};
use crate::engine::{Interval, ModelBinding};
use crate::error::{Error, Result};
use crate::rng::{sample_std_normal, RngStream};
use crate::stats::{chi_square_quantile, sample_variance};

#[derive(Debug, Serialize, Deserialize)]
pub struct NormalScaleSpec {
    pub m: usize,
    pub epsilon: f64,
    #[serde(skip)]
    pivots: Mutex<Option<PivotCache>>,
}

#[derive(Debug, Clone, Copy)]
struct PivotCache {
    alpha: f64,
    m: usize,
    lower_q: f64,
    upper_q: f64,
}

impl Clone for NormalScaleSpec {
    fn clone(&self) -> Self {
        Self {
            m: self.m,
            epsilon: self.epsilon,
            pivots: Mutex::new(None),
        }
    }
}

impl PartialEq for NormalScaleSpec {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.epsilon == other.epsilon
    }
}

impl NormalScaleSpec {
    pub fn new(m: usize, epsilon: f64) -> Result<Self> {
        check_sample_size(m)?;
        check_epsilon(epsilon)?;
        Ok(Self {
            m,
            epsilon,
            pivots: Mutex::new(None),
        })
    }

    /// `m` i.i.d. draws from N(0, theta).
    pub fn simulate(&self, theta: f64, stream: &RngStream) -> Result<Vec<f64>> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::domain(format!("variance {theta} must be positive")));
        }
        let sd = theta.sqrt();
        Ok(sample_std_normal(stream, self.m).into_iter().map(|z| sd * z).collect())
    }

    /// `((m-1) S^2 / chi2_{1-alpha/2; m-1} - eps, (m-1) S^2 / chi2_{alpha/2; m-1} - eps)`
    /// with `m` the length of `x`.
    pub fn interval(&self, x: &[f64], alpha: f64) -> Result<Interval> {
        let s2 = estimate(x)?;
        let (lo_q, hi_q) = self.pivot_quantiles(x.len(), alpha)?;
        let ss = (x.len() - 1) as f64 * s2;
        Interval::new(ss / hi_q - self.epsilon, ss / lo_q - self.epsilon, 1.0 - alpha)
    }

    fn pivot_quantiles(&self, m: usize, alpha: f64) -> Result<(f64, f64)> {
        let mut guard = self.pivots.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(c) = *guard {
            if c.alpha == alpha && c.m == m {
                return Ok((c.lower_q, c.upper_q));
            }
        }
        let df = u32::try_from(m - 1).map_err(|_| Error::domain("sample too large"))?;
        let lower_q = chi_square_quantile(alpha / 2.0, df)?;
        let upper_q = chi_square_quantile(1.0 - alpha / 2.0, df)?;
        *guard = Some(PivotCache {
            alpha,
            m,
            lower_q,
            upper_q,
        });
        Ok((lower_q, upper_q))
    }

    /// Shift that makes both endpoints exact. The pivot is exact for any
    /// variance, so the bias is undone by adding back `epsilon`.
    pub fn exact_shift(&self) -> f64 {
        self.epsilon
    }
}

/// Sample variance `S^2` with divisor `m - 1`.
pub fn estimate(x: &[f64]) -> Result<f64> {
    sample_variance(x).ok_or_else(|| Error::domain("sample variance needs at least two observations"))
}

impl ModelBinding for NormalScaleSpec {
    type Data = Vec<f64>;

    fn dim(&self) -> usize {
        1
    }

    fn simulate(&self, theta: &[f64], stream: &RngStream) -> Result<Vec<f64>> {
        NormalScaleSpec::simulate(self, scalar(theta)?, stream)
    }

    fn estimate(&self, data: &Vec<f64>) -> Result<Vec<f64>> {
        Ok(vec![estimate(data)?])
    }

    fn intervals(&self, data: &Vec<f64>, alpha: f64, _: &RngStream) -> Result<Vec<Interval>> {
        Ok(vec![self.interval(data, alpha)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::shift_samples;

    #[test]
    fn rejects_bad_inputs() {
        assert!(NormalScaleSpec::new(1, 0.0).is_err());
        assert!(NormalScaleSpec::new(20, -1.0).is_err());
        let spec = NormalScaleSpec::new(20, 0.0).unwrap();
        assert!(spec.simulate(0.0, &RngStream::new(0)).is_err());
        assert!(spec.simulate(-1.0, &RngStream::new(0)).is_err());
    }

    #[test]
    fn simulate_is_a_scale_family() {
        let spec = NormalScaleSpec::new(40, 0.0).unwrap();
        let s = RngStream::new(6);
        let one = spec.simulate(1.0, &s).unwrap();
        let four = spec.simulate(4.0, &s).unwrap();
        for (a, b) in one.iter().zip(&four) {
            assert_eq!(*b, 2.0 * a);
        }
        assert_eq!(
            NormalScaleSpec::new(2, 0.0).unwrap().simulate(1.0, &s).unwrap().len(),
            2
        );
    }

    #[test]
    fn large_sample_variance() {
        let spec = NormalScaleSpec::new(1_000_000, 0.0).unwrap();
        let x = spec.simulate(1.0, &RngStream::new(12)).unwrap();
        assert!((estimate(&x).unwrap() - 1.0).abs() < 0.01);
    }

    #[test]
    fn sample_variance_by_hand() {
        assert_eq!(estimate(&[1.0, -1.0]).unwrap(), 2.0);
        assert_eq!(estimate(&[3.0; 7]).unwrap(), 0.0);
        assert!(estimate(&[1.0]).is_err());
    }

    #[test]
    fn pivot_interval_at_unit_variance() {
        // A dataset with S^2 = 1 exactly: m = 20, values +/- sqrt(19/20).
        let v = (19.0_f64 / 20.0).sqrt();
        let x: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { v } else { -v }).collect();
        assert!((estimate(&x).unwrap() - 1.0).abs() < 1e-14);
        let int = NormalScaleSpec::new(20, 0.0).unwrap().interval(&x, 0.05).unwrap();
        // 19 / scipy chi2.ppf(0.975, 19), 19 / chi2.ppf(0.025, 19)
        assert!((int.lower - 0.578_345_639_868_007_8).abs() < 1e-9);
        assert!((int.upper - 2.133_269_504_235_973).abs() < 1e-9);

        let biased = NormalScaleSpec::new(20, 0.2).unwrap().interval(&x, 0.05).unwrap();
        assert!((int.lower - biased.lower - 0.2).abs() < 1e-14);
        assert!((int.upper - biased.upper - 0.2).abs() < 1e-14);
    }

    #[test]
    fn cache_follows_alpha() {
        let spec = NormalScaleSpec::new(10, 0.0).unwrap();
        let x = spec.simulate(1.0, &RngStream::new(1)).unwrap();
        let a = spec.interval(&x, 0.05).unwrap();
        let b = spec.interval(&x, 0.2).unwrap();
        let c = spec.interval(&x, 0.05).unwrap();
        assert_eq!(a, c);
        assert!(b.width() < a.width());
    }

    #[test]
    fn shift_samples_scale_with_theta_tilde() {
        // theta - L(y) = theta (1 - W / chi2_hi) + eps with W free of theta, so
        // (shift at 4) - eps = 4 ((shift at 1) - eps).
        let eps = 0.2;
        let spec = NormalScaleSpec::new(20, eps).unwrap();
        let stream = RngStream::new(31);
        let one = shift_samples(&spec, &[1.0], 0.05, 100, &stream).unwrap();
        let four = shift_samples(&spec, &[4.0], 0.05, 100, &stream).unwrap();
        for (a, b) in one.lower[0].iter().zip(&four.lower[0]) {
            assert!(((b - eps) - 4.0 * (a - eps)).abs() < 1e-12);
        }
        for (a, b) in one.upper[0].iter().zip(&four.upper[0]) {
            assert!(((b - eps) - 4.0 * (a - eps)).abs() < 1e-12);
        }
    }
}
