//! Coverage studies, the quantile CLT check and parameter sweeps.

mod clt;
mod coverage;
mod sweep;
mod table;

pub use clt::{clt_check, CltConfig, CltRow};
pub use coverage::{run_coverage, CoverageReport, CoverageStudy};
pub use sweep::{sweep, Quartiles, SweepAxis, SweepConfig, SweepRow};
pub use table::{format_sig6, Cell, Table};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::abc::AbcConfig;
use crate::bootstrap::{BootstrapConfig, DEFAULT_CORRECTED_OUTER, DEFAULT_INNER, DEFAULT_OUTER};
use crate::engine::CorrectionSettings;
use crate::error::{Error, Result};
use crate::models::gandk::GK_PARAM_NAMES;
use crate::models::{GandKTheta, NormalLocationSpec, NormalScaleSpec};

/// Smallest number of outer replicate analyses in a coverage study.
pub const MIN_REPS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelConfig {
    NormalLocation { m: usize, epsilon: f64 },
    NormalScale { m: usize, epsilon: f64 },
    GkMa1 { abc: AbcConfig },
}

impl ModelConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::NormalLocation { .. } => "normal-location",
            ModelConfig::NormalScale { .. } => "normal-scale",
            ModelConfig::GkMa1 { .. } => "gk-ma1",
        }
    }

    /// Observed data size: `m` for the normal models, series length for g-and-k.
    pub fn data_size(&self) -> usize {
        match self {
            ModelConfig::NormalLocation { m, .. } | ModelConfig::NormalScale { m, .. } => *m,
            ModelConfig::GkMa1 { abc } => abc.series_len,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ModelConfig::GkMa1 { .. } => GK_PARAM_NAMES.len(),
            _ => 1,
        }
    }

    pub fn margin_name(&self, j: usize) -> String {
        match self {
            ModelConfig::GkMa1 { .. } => GK_PARAM_NAMES.get(j).copied().unwrap_or("?").to_string(),
            ModelConfig::NormalLocation { .. } => "mu".to_string(),
            ModelConfig::NormalScale { .. } => "sigma2".to_string(),
        }
    }

    /// Parameter value used when none is configured.
    pub fn default_theta(&self) -> Vec<f64> {
        match self {
            ModelConfig::NormalLocation { .. } => vec![0.0],
            ModelConfig::NormalScale { .. } => vec![1.0],
            ModelConfig::GkMa1 { .. } => vec![0.01, 0.02, 0.3, 0.4, 0.2],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelConfig::NormalLocation { m, epsilon } => NormalLocationSpec::new(*m, *epsilon).map(|_| ()),
            ModelConfig::NormalScale { m, epsilon } => NormalScaleSpec::new(*m, *epsilon).map(|_| ()),
            ModelConfig::GkMa1 { abc } => abc.validate(),
        }
    }

    pub fn validate_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim() {
            return Err(Error::config(format!(
                "{} expects {} parameter(s), got {}",
                self.name(),
                self.dim(),
                theta.len()
            )));
        }
        match self {
            ModelConfig::NormalLocation { .. } if !theta[0].is_finite() => Err(Error::config("theta must be finite")),
            ModelConfig::NormalScale { .. } if !(theta[0] > 0.0 && theta[0].is_finite()) => {
                Err(Error::config("variance theta must be positive"))
            }
            ModelConfig::GkMa1 { .. } => GandKTheta::from_slice(theta)
                .map(|_| ())
                .map_err(|e| Error::config(e.to_string())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// The model's own interval method (pivot, or ABC credible interval).
    Pivot,
    CorrectedPivot,
    Bootstrap,
    CorrectedBootstrap,
    DoubleBootstrap,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Pivot,
        Method::CorrectedPivot,
        Method::Bootstrap,
        Method::CorrectedBootstrap,
        Method::DoubleBootstrap,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Pivot => "pivot",
            Method::CorrectedPivot => "corrected-pivot",
            Method::Bootstrap => "bootstrap",
            Method::CorrectedBootstrap => "corrected-bootstrap",
            Method::DoubleBootstrap => "double-bootstrap",
        }
    }

    pub fn is_corrected(&self) -> bool {
        matches!(self, Method::CorrectedPivot | Method::CorrectedBootstrap)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::config(format!("unknown method '{s}'")))
    }
}

/// One coverage experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub method: Method,
    pub alpha: f64,
    /// Simulated datasets per correction.
    pub n: usize,
    /// Outer replicate analyses.
    pub reps: usize,
    pub seed: u64,
    pub theta_true: Vec<f64>,
    pub theta_tilde_override: Option<Vec<f64>>,
    /// Outer bootstrap replicates; defaults depend on the method.
    pub bootstrap_outer: Option<usize>,
    pub bootstrap_inner: usize,
}

impl ExperimentConfig {
    pub fn new(model: ModelConfig, method: Method) -> Self {
        let theta_true = model.default_theta();
        Self {
            model,
            method,
            alpha: 0.05,
            n: 2000,
            reps: 1000,
            seed: 1,
            theta_true,
            theta_tilde_override: None,
            bootstrap_outer: None,
            bootstrap_inner: DEFAULT_INNER,
        }
    }

    pub fn bootstrap_config(&self) -> BootstrapConfig {
        let outer = self.bootstrap_outer.unwrap_or(match self.method {
            Method::CorrectedBootstrap => DEFAULT_CORRECTED_OUTER,
            _ => DEFAULT_OUTER,
        });
        BootstrapConfig::new(outer, self.bootstrap_inner)
    }

    pub fn correction_settings(&self) -> CorrectionSettings {
        CorrectionSettings {
            alpha: self.alpha,
            n: self.n,
            theta_override: self.theta_tilde_override.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.model.validate_theta(&self.theta_true)?;
        if let Some(t) = &self.theta_tilde_override {
            self.model.validate_theta(t)?;
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if self.reps < MIN_REPS {
            return Err(Error::config(format!("R={} below minimum {MIN_REPS}", self.reps)));
        }
        if self.method.is_corrected() {
            self.correction_settings().validate()?;
        }
        if matches!(self.model, ModelConfig::GkMa1 { .. })
            && !matches!(self.method, Method::Pivot | Method::CorrectedPivot)
        {
            return Err(Error::config(format!(
                "method {} is not available for gk-ma1",
                self.method
            )));
        }
        match self.method {
            Method::Bootstrap | Method::CorrectedBootstrap => self.bootstrap_config().validate(false)?,
            Method::DoubleBootstrap => self.bootstrap_config().validate(true)?,
            _ => {}
        }
        Ok(())
    }
}
