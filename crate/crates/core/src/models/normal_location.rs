//! Normal location model with unit variance.
//!
//! The interval method inflates the half-width by `1 + epsilon`, so the raw
//! interval over-covers for `epsilon > 0`. The exact correction moves both
//! endpoints inward by `z_{1-alpha/2} epsilon / sqrt(m)`.

use serde::{Deserialize, Serialize};

use super::{check_epsilon, check_sample_size, scalar};
use crate::engine::{Interval, ModelBinding};
use crate::error::{Error, Result};
use crate::rng::{sample_std_normal, RngStream};
use crate::stats::{mean, std_normal_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalLocationSpec {
    pub m: usize,
    pub epsilon: f64,
}

impl NormalLocationSpec {
    pub fn new(m: usize, epsilon: f64) -> Result<Self> {
        check_sample_size(m)?;
        check_epsilon(epsilon)?;
        Ok(Self { m, epsilon })
    }

    /// `m` i.i.d. draws from N(theta, 1).
    pub fn simulate(&self, theta: f64, stream: &RngStream) -> Vec<f64> {
        sample_std_normal(stream, self.m)
            .into_iter()
            .map(|z| theta + z)
            .collect()
    }

    /// `xbar -/+ z_{1-alpha/2} (1 + epsilon) / sqrt(m)`, with `m` the length of `x`.
    pub fn interval(&self, x: &[f64], alpha: f64) -> Result<Interval> {
        let centre = estimate(x)?;
        let half = self.half_width(x.len(), alpha)?;
        Interval::new(centre - half, centre + half, 1.0 - alpha)
    }

    fn half_width(&self, m: usize, alpha: f64) -> Result<f64> {
        let z = std_normal_quantile(1.0 - alpha / 2.0)?;
        Ok(z * (1.0 + self.epsilon) / (m as f64).sqrt())
    }

    /// Shift that makes the lower endpoint exact: `z_{1-alpha/2} epsilon / sqrt(m)`.
    /// The upper endpoint needs its negative.
    pub fn exact_lower_shift(&self, alpha: f64) -> Result<f64> {
        Ok(std_normal_quantile(1.0 - alpha / 2.0)? * self.epsilon / (self.m as f64).sqrt())
    }
}

/// Sample mean.
pub fn estimate(x: &[f64]) -> Result<f64> {
    mean(x).ok_or_else(|| Error::domain("cannot estimate a location from an empty dataset"))
}

impl ModelBinding for NormalLocationSpec {
    type Data = Vec<f64>;

    fn dim(&self) -> usize {
        1
    }

    fn simulate(&self, theta: &[f64], stream: &RngStream) -> Result<Vec<f64>> {
        Ok(NormalLocationSpec::simulate(self, scalar(theta)?, stream))
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
    use crate::engine::{correct_interval, shift_samples, CorrectionSettings};

    #[test]
    fn rejects_bad_spec() {
        assert!(NormalLocationSpec::new(1, 0.0).is_err());
        assert!(NormalLocationSpec::new(20, -0.1).is_err());
        assert!(NormalLocationSpec::new(20, f64::NAN).is_err());
    }

    #[test]
    fn simulate_is_a_location_family() {
        let spec = NormalLocationSpec::new(50, 0.0).unwrap();
        let s = RngStream::new(4).child(2);
        let a = spec.simulate(0.0, &s);
        let b = spec.simulate(5.0, &s);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(*y, x + 5.0);
        }
        assert_eq!(NormalLocationSpec::new(2, 0.0).unwrap().simulate(1.0, &s).len(), 2);
    }

    #[test]
    fn large_sample_mean() {
        let spec = NormalLocationSpec::new(1_000_000, 0.0).unwrap();
        let x = spec.simulate(0.0, &RngStream::new(10));
        assert!(estimate(&x).unwrap().abs() < 0.005);
    }

    #[test]
    fn estimate_is_the_mean() {
        assert_eq!(estimate(&[1.0, 2.0, 3.0]).unwrap(), 2.0);
        assert_eq!(estimate(&[1.5, 2.5, 3.5]).unwrap(), 2.5);
        assert!(estimate(&[]).is_err());
    }

    #[test]
    fn interval_half_width() {
        let spec = NormalLocationSpec::new(20, 0.0).unwrap();
        let x = vec![0.0; 20];
        let int = spec.interval(&x, 0.05).unwrap();
        // 1.959963984540054 / sqrt(20)
        assert!((int.upper - 0.438_261_270_288_290_76).abs() < 1e-12);
        assert_eq!(int.lower, -int.upper);

        let wide = NormalLocationSpec::new(20, 1.0).unwrap().interval(&x, 0.05).unwrap();
        assert!((wide.width() - 2.0 * int.width()).abs() < 1e-14);
    }

    #[test]
    fn interval_is_symmetric_about_the_mean() {
        let spec = NormalLocationSpec::new(30, 0.4).unwrap();
        let x = spec.simulate(1.3, &RngStream::new(8));
        let xbar = estimate(&x).unwrap();
        let int = spec.interval(&x, 0.1).unwrap();
        assert!(int.contains(xbar));
        assert!(((xbar - int.lower) - (int.upper - xbar)).abs() < 1e-12);
    }

    #[test]
    fn shift_samples_do_not_depend_on_theta_tilde() {
        let spec = NormalLocationSpec::new(20, 1.0).unwrap();
        let stream = RngStream::new(21);
        let base = shift_samples(&spec, &[0.0], 0.05, 200, &stream).unwrap();
        for t in [-2.0, 2.0] {
            let other = shift_samples(&spec, &[t], 0.05, 200, &stream).unwrap();
            for (a, b) in base.lower[0].iter().zip(&other.lower[0]) {
                assert!((a - b).abs() < 1e-12);
            }
            for (a, b) in base.upper[0].iter().zip(&other.upper[0]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shifts_converge_to_the_exact_correction() {
        let spec = NormalLocationSpec::new(20, 1.0).unwrap();
        let x = spec.simulate(0.0, &RngStream::new(1));
        let r = correct_interval(&spec, &x, &CorrectionSettings::new(0.05, 20_000), 0, &RngStream::new(2)).unwrap();
        let exact = spec.exact_lower_shift(0.05).unwrap();
        assert!((exact - 0.438_261_270_288_290_76).abs() < 1e-12);
        // sd of the quantile estimate is about 0.005 at n = 2e4
        assert!((r.shift_lower - exact).abs() < 0.02, "{}", r.shift_lower);
        assert!((r.shift_upper + exact).abs() < 0.02, "{}", r.shift_upper);
    }

    #[test]
    fn calibrated_method_needs_no_shift() {
        // sd of each shift is about 0.0042 at n = 2e4
        let spec = NormalLocationSpec::new(20, 0.0).unwrap();
        let x = spec.simulate(0.0, &RngStream::new(3));
        let r = correct_interval(&spec, &x, &CorrectionSettings::new(0.05, 20_000), 0, &RngStream::new(4)).unwrap();
        assert!(r.shift_lower.abs() < 0.02 && r.shift_upper.abs() < 0.02, "{r:?}");
    }

    #[test]
    fn translation_equivariance_of_the_correction() {
        let spec = NormalLocationSpec::new(20, 0.5).unwrap();
        let x = spec.simulate(0.0, &RngStream::new(3));
        let xt: Vec<f64> = x.iter().map(|v| v + 3.0).collect();
        let s = CorrectionSettings::new(0.05, 300);
        let a = correct_interval(&spec, &x, &s, 0, &RngStream::new(9)).unwrap();
        let b = correct_interval(&spec, &xt, &s, 0, &RngStream::new(9)).unwrap();
        assert!((b.raw.lower - a.raw.lower - 3.0).abs() < 1e-12);
        assert!((b.corrected.lower - a.corrected.lower - 3.0).abs() < 1e-12);
        assert!((b.corrected.upper - a.corrected.upper - 3.0).abs() < 1e-12);
        assert!((b.shift_lower - a.shift_lower).abs() < 1e-12);
        assert!((b.shift_upper - a.shift_upper).abs() < 1e-12);
    }
}
