//! Concrete data-generating processes and their interval methods.

pub mod gandk;
pub mod normal_location;
pub mod normal_scale;

pub use gandk::{gk_ma1_latent, gk_ma1_simulate, gk_quantile, GandKTheta};
pub use normal_location::NormalLocationSpec;
pub use normal_scale::NormalScaleSpec;

use crate::error::{Error, Result};

pub(crate) fn check_sample_size(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::config(format!("sample size m={m} must be at least 2")));
    }
    Ok(())
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::config(format!("epsilon={epsilon} must be finite and >= 0")));
    }
    Ok(())
}

pub(crate) fn scalar(theta: &[f64]) -> Result<f64> {
    match theta {
        [t] => Ok(*t),
        _ => Err(Error::config(format!(
            "expected a scalar parameter, got {} components",
            theta.len()
        ))),
    }
}
