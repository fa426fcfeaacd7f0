//! Numerical primitives shared by every simulation: normal and chi-square
//! quantiles and the order-statistic quantile rule.

mod empirical;
mod gamma;
mod normal;

pub use empirical::{quantile_rank, EmpiricalDistribution};
pub use gamma::{chi_square_cdf, chi_square_quantile, reg_lower_gamma};
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile};

use crate::error::{Error, Result};

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("probability {p} outside (0, 1)")))
    }
}

/// Arithmetic mean; `None` for an empty slice.
pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

/// Unbiased sample variance (divisor `n - 1`); `None` for fewer than two values.
pub fn sample_variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = mean(xs)?;
    Some(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}
