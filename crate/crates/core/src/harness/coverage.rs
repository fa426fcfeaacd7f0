use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, Method, ModelConfig};
use crate::abc::{abc_correct, AbcBinding, ReferenceTable};
use crate::bootstrap::{double_bootstrap_interval, parametric_bootstrap_intervals, PercentileBootstrap};
use crate::engine::{correct_margins, CorrectionResult, Interval, ModelBinding};
use crate::error::{Error, Result};
use crate::models::{NormalLocationSpec, NormalScaleSpec};
use crate::rng::RngStream;

const DATA: u64 = 0;
const METHOD: u64 = 1;
const ABC_TABLE: u64 = 2;

/// Coverage of one parameter margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub margin: usize,
    pub margin_name: String,
    pub coverage: f64,
    /// `sqrt(c (1 - c) / R)`.
    pub mc_se: f64,
    /// Replicates that produced an interval.
    pub reps: usize,
    pub mean_width: f64,
    pub mean_shift_lower: Option<f64>,
    pub mean_shift_upper: Option<f64>,
    /// Corrections whose endpoints crossed.
    pub degenerate: usize,
}

impl CoverageReport {
    pub fn mc_se_for(coverage: f64, reps: usize) -> f64 {
        (coverage * (1.0 - coverage) / reps as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStudy {
    pub config: ExperimentConfig,
    pub reports: Vec<CoverageReport>,
    /// Replicates excluded after a run failure.
    pub failed: usize,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Copy)]
struct MarginOutcome {
    interval: Interval,
    shifts: Option<(f64, f64)>,
    degenerate: bool,
}

fn plain(intervals: Vec<Interval>) -> Vec<MarginOutcome> {
    intervals
        .into_iter()
        .map(|interval| MarginOutcome {
            interval,
            shifts: None,
            degenerate: false,
        })
        .collect()
}

fn corrected(results: Vec<CorrectionResult>) -> Vec<MarginOutcome> {
    results
        .into_iter()
        .map(|r| MarginOutcome {
            interval: r.corrected,
            shifts: Some((r.shift_lower, r.shift_upper)),
            degenerate: r.degenerate,
        })
        .collect()
}

fn analyse<B: ModelBinding>(
    binding: &B,
    x: &B::Data,
    cfg: &ExperimentConfig,
    stream: &RngStream,
) -> Result<Vec<MarginOutcome>> {
    match cfg.method {
        Method::Pivot => Ok(plain(binding.intervals(x, cfg.alpha, stream)?)),
        Method::CorrectedPivot => Ok(corrected(correct_margins(
            binding,
            x,
            &cfg.correction_settings(),
            stream,
        )?)),
        Method::Bootstrap => Ok(plain(parametric_bootstrap_intervals(
            binding,
            x,
            cfg.alpha,
            &cfg.bootstrap_config(),
            stream,
        )?)),
        Method::DoubleBootstrap => {
            let bc = cfg.bootstrap_config();
            let ints = (0..binding.dim())
                .map(|j| double_bootstrap_interval(binding, x, cfg.alpha, &bc, j, &stream.child(j as u64)))
                .collect::<Result<Vec<_>>>()?;
            Ok(plain(ints))
        }
        Method::CorrectedBootstrap => {
            let boot = PercentileBootstrap::new(binding, cfg.bootstrap_config());
            Ok(corrected(correct_margins(
                &boot,
                x,
                &cfg.correction_settings(),
                stream,
            )?))
        }
    }
}

fn replicate<B: ModelBinding>(binding: &B, cfg: &ExperimentConfig, stream: &RngStream) -> Result<Vec<MarginOutcome>> {
    let x = binding.simulate(&cfg.theta_true, &stream.child(DATA))?;
    analyse(binding, &x, cfg, &stream.child(METHOD))
}

fn run_replicate(cfg: &ExperimentConfig, stream: &RngStream) -> Result<Vec<MarginOutcome>> {
    match &cfg.model {
        ModelConfig::NormalLocation { m, epsilon } => replicate(&NormalLocationSpec::new(*m, *epsilon)?, cfg, stream),
        ModelConfig::NormalScale { m, epsilon } => replicate(&NormalScaleSpec::new(*m, *epsilon)?, cfg, stream),
        ModelConfig::GkMa1 { abc } => {
            let table = ReferenceTable::simulate(abc, &stream.child(ABC_TABLE))?;
            let binding = AbcBinding::new(&table, abc.accept_frac);
            let x = binding.simulate(&cfg.theta_true, &stream.child(DATA))?;
            // The observed series is analysed against the shared table.
            match cfg.method {
                Method::Pivot => Ok(plain(binding.observed_intervals(&x, cfg.alpha)?)),
                Method::CorrectedPivot => Ok(corrected(abc_correct(
                    &binding,
                    &x,
                    &cfg.correction_settings(),
                    &stream.child(METHOD),
                )?)),
                m => Err(Error::config(format!("method {m} is not available for gk-ma1"))),
            }
        }
    }
}

/// Empirical coverage of the configured method over `cfg.reps` replicate
/// analyses at `cfg.theta_true`.
///
/// Replicate `r` draws only from substreams of `(seed, r)`. Replicates whose
/// analysis fails are excluded while they number fewer than 1% of `R`;
/// beyond that the study fails.
pub fn run_coverage(cfg: &ExperimentConfig) -> Result<CoverageStudy> {
    cfg.validate()?;
    let start = Instant::now();
    let root = RngStream::new(cfg.seed);
    let outcomes: Vec<Result<Vec<MarginOutcome>>> = (0..cfg.reps)
        .into_par_iter()
        .map(|r| run_replicate(cfg, &root.child(r as u64)))
        .collect();

    let mut ok = Vec::with_capacity(outcomes.len());
    let mut failed = Vec::new();
    for (r, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(v) => ok.push(v),
            Err(e) if e.is_config() => return Err(e),
            Err(e) => failed.push(e.at_replicate(r)),
        }
    }
    if failed.len() * 100 >= cfg.reps && !failed.is_empty() {
        return Err(Error::run(format!(
            "{} of {} replicates failed; first: {}",
            failed.len(),
            cfg.reps,
            failed[0]
        )));
    }

    let reps = ok.len();
    let reports = (0..cfg.model.dim())
        .map(|j| {
            let truth = cfg.theta_true[j];
            let hits = ok.iter().filter(|o| o[j].interval.contains(truth)).count();
            let coverage = hits as f64 / reps as f64;
            let mean_width = ok.iter().map(|o| o[j].interval.width()).sum::<f64>() / reps as f64;
            let shifts: Vec<(f64, f64)> = ok.iter().filter_map(|o| o[j].shifts).collect();
            let (mean_shift_lower, mean_shift_upper) = if shifts.is_empty() {
                (None, None)
            } else {
                let k = shifts.len() as f64;
                (
                    Some(shifts.iter().map(|s| s.0).sum::<f64>() / k),
                    Some(shifts.iter().map(|s| s.1).sum::<f64>() / k),
                )
            };
            CoverageReport {
                margin: j,
                margin_name: cfg.model.margin_name(j),
                coverage,
                mc_se: CoverageReport::mc_se_for(coverage, reps),
                reps,
                mean_width,
                mean_shift_lower,
                mean_shift_upper,
                degenerate: ok.iter().filter(|o| o[j].degenerate).count(),
            }
        })
        .collect();

    Ok(CoverageStudy {
        config: cfg.clone(),
        reports,
        failed: failed.len(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}
