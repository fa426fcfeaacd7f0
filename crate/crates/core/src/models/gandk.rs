//! g-and-k quantile distribution driven by an MA(1) latent Gaussian series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{sample_std_normal, RngStream};

/// Overlap constant, fixed by convention.
pub const GK_C: f64 = 0.8;

/// Parameter names in vector order.
pub const GK_PARAM_NAMES: [&str; 5] = ["a", "b", "g", "k", "ma"];

/// `(a, b, g, k)` of the g-and-k quantile function plus the MA(1)
/// coefficient of the latent series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GandKTheta {
    pub a: f64,
    pub b: f64,
    pub g: f64,
    pub k: f64,
    pub ma_coef: f64,
}

impl GandKTheta {
    pub fn new(a: f64, b: f64, g: f64, k: f64, ma_coef: f64) -> Result<Self> {
        let t = Self { a, b, g, k, ma_coef };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.a, self.b, self.g, self.k, self.ma_coef]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::domain("g-and-k parameters must be finite"));
        }
        if self.b <= 0.0 {
            return Err(Error::domain(format!("g-and-k scale b={} must be positive", self.b)));
        }
        if self.k <= -0.5 {
            return Err(Error::domain(format!("g-and-k kurtosis k={} must exceed -0.5", self.k)));
        }
        Ok(())
    }

    pub fn from_slice(theta: &[f64]) -> Result<Self> {
        match *theta {
            [a, b, g, k, ma] => Self::new(a, b, g, k, ma),
            _ => Err(Error::config(format!(
                "g-and-k MA(1) needs 5 parameters, got {}",
                theta.len()
            ))),
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.a, self.b, self.g, self.k, self.ma_coef]
    }
}

/// `Q(z) = a + b (1 + c (1 - e^{-gz}) / (1 + e^{-gz})) (1 + z^2)^k z`.
///
/// The skew factor is evaluated as `tanh(gz/2)`, which is the same ratio
/// without overflow for large `|gz|`.
pub fn gk_quantile(z: f64, theta: &GandKTheta) -> f64 {
    let skew = 1.0 + GK_C * (0.5 * theta.g * z).tanh();
    theta.a + theta.b * skew * (1.0 + z * z).powf(theta.k) * z
}

/// Latent series `z_i = (eta_i + rho eta_{i-1}) / sqrt(1 + rho^2)`, `i = 1..=len`.
pub fn gk_ma1_latent(ma_coef: f64, len: usize, stream: &RngStream) -> Vec<f64> {
    let eta = sample_std_normal(stream, len + 1);
    let norm = (1.0 + ma_coef * ma_coef).sqrt();
    eta.windows(2).map(|w| (w[1] + ma_coef * w[0]) / norm).collect()
}

/// `len` observations `Q(z_i; theta)` over the MA(1) latent series.
pub fn gk_ma1_simulate(theta: &GandKTheta, len: usize, stream: &RngStream) -> Result<Vec<f64>> {
    if len < 2 {
        return Err(Error::config(format!("series length {len} must be at least 2")));
    }
    theta.validate()?;
    Ok(gk_ma1_latent(theta.ma_coef, len, stream)
        .into_iter()
        .map(|z| gk_quantile(z, theta))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theta(a: f64, b: f64, g: f64, k: f64) -> GandKTheta {
        GandKTheta::new(a, b, g, k, 0.0).unwrap()
    }

    /// Direct transcription with exponentials, kept separate from `gk_quantile`.
    fn reference(z: f64, t: &GandKTheta) -> f64 {
        let e = (-t.g * z).exp();
        t.a + t.b * (1.0 + 0.8 * (1.0 - e) / (1.0 + e)) * (1.0 + z * z).powf(t.k) * z
    }

    #[test]
    fn zero_deviate_gives_location() {
        for t in [theta(0.3, 1.0, 2.0, 0.5), theta(-1.0, 0.01, 0.0, 0.9)] {
            assert_eq!(gk_quantile(0.0, &t), t.a);
        }
    }

    #[test]
    fn no_skew_no_kurtosis_is_affine() {
        let t = theta(0.5, 2.0, 0.0, 0.0);
        for z in [-3.0, -0.2, 1.7] {
            assert!((gk_quantile(z, &t) - (0.5 + 2.0 * z)).abs() < 1e-15);
        }
    }

    #[test]
    fn high_precision_value() {
        // mpmath at 30 digits
        let t = theta(0.0, 1.0, 2.0, 0.5);
        assert!((gk_quantile(1.0, &t) - 2.275_858_989_874_481_3).abs() < 1e-12);
        let t = theta(0.05, 0.08, 0.7, 0.3);
        assert!((gk_quantile(-1.5, &t) + 0.055_063_525_589_974_02).abs() < 1e-14);
    }

    #[test]
    fn tanh_form_matches_exponential_form() {
        let t = theta(0.01, 0.05, 0.8, 0.3);
        for i in -60..=60 {
            let z = i as f64 / 10.0;
            assert!((gk_quantile(z, &t) - reference(z, &t)).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_theta() {
        assert!(GandKTheta::new(0.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(GandKTheta::new(0.0, 1.0, 0.0, -0.5, 0.0).is_err());
        assert!(GandKTheta::from_slice(&[0.0, 1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn zero_ma_coefficient_gives_independent_quantiles() {
        let s = RngStream::new(3);
        let z = gk_ma1_latent(0.0, 10, &s);
        let eta = sample_std_normal(&s, 11);
        assert_eq!(z, eta[1..].to_vec());
    }

    #[test]
    fn latent_has_unit_variance() {
        for rho in [0.0, 0.5, 0.9, -0.7] {
            let z = gk_ma1_latent(rho, 200_000, &RngStream::new(17));
            let v = z.iter().map(|x| x * x).sum::<f64>() / z.len() as f64;
            assert!((v - 1.0).abs() < 0.015, "rho={rho} var={v}");
        }
    }

    #[test]
    fn simulate_rejects_short_series() {
        let t = theta(0.0, 1.0, 0.0, 0.0);
        assert!(gk_ma1_simulate(&t, 1, &RngStream::new(0)).is_err());
        assert_eq!(gk_ma1_simulate(&t, 2, &RngStream::new(0)).unwrap().len(), 2);
    }

    fn increasing_on_grid(t: &GandKTheta) -> bool {
        let q: Vec<f64> = (-6000..=6000).map(|i| gk_quantile(i as f64 * 1e-3, t)).collect();
        q.windows(2).all(|w| w[1] > w[0])
    }

    #[test]
    fn increasing_for_nonnegative_k() {
        for b in [0.05, 1.0, 4.0] {
            for gi in -10..=10 {
                for k in [0.0, 0.25, 1.0, 3.0] {
                    let t = theta(0.1, b, gi as f64 * 0.5, k);
                    assert!(increasing_on_grid(&t), "{t:?}");
                }
            }
        }
    }

    #[test]
    fn strong_skew_with_negative_k_is_not_monotone() {
        // Q decreases on roughly [-0.66, -0.40] here.
        assert!(!increasing_on_grid(&theta(0.0, 1.0, 5.0, -0.49)));
        let t = theta(0.0, 1.0, 5.0, -0.49);
        assert!(gk_quantile(-0.6, &t) > gk_quantile(-0.45, &t));
    }
}
