//! Rejection ABC for the g-and-k MA(1) model, and the correction of its
//! central credible intervals.
//!
//! Every ABC run draws `n_sims` parameter vectors from independent uniform
//! priors, simulates one series per draw and keeps the `accept_frac` fraction
//! whose standardized summaries lie closest to the observed ones. The
//! tolerance at the last accepted particle plays the role of a uniform-kernel
//! bandwidth.
//!
//! Prior-predictive simulations do not depend on the observed series, so they
//! are held in a [`ReferenceTable`] and reused: re-running ABC with the same
//! configuration and stream yields the same table, and the correction
//! pipeline evaluates every replicate against it.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{correct_from_raw, CorrectionResult, CorrectionSettings, Interval, ModelBinding};
use crate::error::{Error, Result};
use crate::models::gandk::{gk_ma1_simulate, GandKTheta, GK_PARAM_NAMES};
use crate::rng::RngStream;
use crate::stats::{quantile_rank, EmpiricalDistribution};

/// Number of summary statistics.
pub const N_SUMMARIES: usize = 10;
/// Shortest series that can be summarized.
pub const MIN_SERIES_LEN: usize = 20;
/// Smallest number of accepted particles.
pub const MIN_ACCEPTED: usize = 10;

pub type Summary = [f64; N_SUMMARIES];

/// Default independent uniform prior bounds for `(a, b, g, k, ma)`.
pub const DEFAULT_PRIOR: [(f64, f64); 5] = [(-0.1, 0.1), (0.0, 0.1), (0.0, 1.0), (0.0, 1.0), (0.0, 0.9)];

const PRIOR_DRAW: u64 = 0;
const PRIOR_SERIES: u64 = 1;
const TABLE: u64 = 0;
const CORRECTION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbcConfig {
    pub n_sims: usize,
    /// Fraction of simulations retained.
    pub accept_frac: f64,
    /// Uniform prior bounds per parameter, in `(a, b, g, k, ma)` order.
    pub prior: Vec<(f64, f64)>,
    /// Length of each simulated series.
    pub series_len: usize,
}

impl AbcConfig {
    pub fn new(n_sims: usize, accept_frac: f64, series_len: usize) -> Self {
        Self {
            n_sims,
            accept_frac,
            prior: DEFAULT_PRIOR.to_vec(),
            series_len,
        }
    }

    pub fn with_accept_frac(&self, accept_frac: f64) -> Self {
        Self {
            accept_frac,
            ..self.clone()
        }
    }

    pub fn accepted_count(&self) -> usize {
        quantile_rank(self.n_sims, self.accept_frac)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.accept_frac > 0.0 && self.accept_frac <= 1.0) {
            return Err(Error::config(format!(
                "accept_frac {} outside (0, 1]",
                self.accept_frac
            )));
        }
        if self.accepted_count() < MIN_ACCEPTED {
            return Err(Error::config(format!(
                "n_sims * accept_frac = {} keeps fewer than {MIN_ACCEPTED} particles",
                self.n_sims as f64 * self.accept_frac
            )));
        }
        if self.series_len < MIN_SERIES_LEN {
            return Err(Error::config(format!(
                "series length {} below minimum {MIN_SERIES_LEN}",
                self.series_len
            )));
        }
        if self.prior.len() != GK_PARAM_NAMES.len() {
            return Err(Error::config(format!("prior needs {} bounds", GK_PARAM_NAMES.len())));
        }
        for (name, &(lo, hi)) in GK_PARAM_NAMES.iter().zip(&self.prior) {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!("prior bounds for {name} must satisfy lo < hi")));
            }
        }
        if self.prior[1].0 < 0.0 || self.prior[3].0 <= -0.5 {
            return Err(Error::config("prior support must keep b > 0 and k > -0.5"));
        }
        Ok(())
    }
}

fn invalid_summary(msg: &str) -> Error {
    Error::domain(format!("invalid summary: {msg}"))
}

/// Octiles `E1..E7`, two robust shape ratios and the lag-1 autocorrelation.
///
/// The ratios are `(E6 + E2 - 2 E4) / (E6 - E2)` (skewness) and
/// `(E7 - E5 + E3 - E1) / (E6 - E2)` (kurtosis).
pub fn summarize(series: &[f64]) -> Result<Summary> {
    if series.len() < MIN_SERIES_LEN {
        return Err(invalid_summary("series shorter than 20"));
    }
    let d = EmpiricalDistribution::new(series.to_vec())?;
    let mut e = [0.0; 7];
    for (j, slot) in e.iter_mut().enumerate() {
        *slot = d.quantile((j + 1) as f64 / 8.0)?;
    }
    let spread = e[5] - e[1];
    if !(spread > 0.0) {
        return Err(invalid_summary("zero inter-octile spread"));
    }
    let skew = (e[5] + e[1] - 2.0 * e[3]) / spread;
    let kurt = (e[6] - e[4] + e[2] - e[0]) / spread;
    let acf = lag1_autocorrelation(series).ok_or_else(|| invalid_summary("constant series"))?;
    Ok([e[0], e[1], e[2], e[3], e[4], e[5], e[6], skew, kurt, acf])
}

pub fn lag1_autocorrelation(series: &[f64]) -> Option<f64> {
    let n = series.len();
    if n < 2 {
        return None;
    }
    let m = series.iter().sum::<f64>() / n as f64;
    let denom: f64 = series.iter().map(|x| (x - m) * (x - m)).sum();
    if !(denom > 0.0) {
        return None;
    }
    let num: f64 = series.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
    Some(num / denom)
}

/// Prior draws, their simulated summaries and per-summary scales.
#[derive(Debug, Clone)]
pub struct ReferenceTable {
    cfg: AbcConfig,
    params: Vec<Vec<f64>>,
    summaries: Vec<Option<Summary>>,
    scale: Summary,
}

impl ReferenceTable {
    /// Draws `cfg.n_sims` prior parameters and simulates a series for each.
    /// Simulation `i` uses substreams below `(stream, i)` only.
    pub fn simulate(cfg: &AbcConfig, stream: &RngStream) -> Result<Self> {
        cfg.validate()?;
        let rows: Vec<(Vec<f64>, Option<Summary>)> = (0..cfg.n_sims)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream.descend(&[PRIOR_DRAW, i as u64]).rng();
                let mut theta: Vec<f64> = cfg.prior.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect();
                // b's prior is open at zero; a draw of exactly 0.0 is nudged inside.
                theta[1] = theta[1].max(f64::MIN_POSITIVE);
                let gk = GandKTheta::from_slice(&theta)?;
                let series = gk_ma1_simulate(&gk, cfg.series_len, &stream.descend(&[PRIOR_SERIES, i as u64]))?;
                Ok((gk.to_vec(), summarize(&series).ok()))
            })
            .collect::<Result<_>>()?;
        let (params, summaries): (Vec<_>, Vec<_>) = rows.into_iter().unzip();
        let scale = summary_scales(&summaries)?;
        Ok(Self {
            cfg: cfg.clone(),
            params,
            summaries,
            scale,
        })
    }

    pub fn config(&self) -> &AbcConfig {
        &self.cfg
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[Vec<f64>] {
        &self.params
    }

    pub fn scale(&self) -> &Summary {
        &self.scale
    }

    /// Scaled Euclidean distance of every simulation to `observed`;
    /// simulations without a valid summary are at infinity.
    pub fn distances(&self, observed: &Summary) -> Vec<f64> {
        self.summaries
            .iter()
            .map(|s| match s {
                Some(s) => s
                    .iter()
                    .zip(observed)
                    .zip(&self.scale)
                    .map(|((a, b), w)| ((a - b) / w).powi(2))
                    .sum::<f64>()
                    .sqrt(),
                None => f64::INFINITY,
            })
            .collect()
    }

    /// Keeps the `accept_frac` fraction of simulations closest to `observed`.
    pub fn posterior(&self, observed: &[f64], accept_frac: f64) -> Result<PosteriorSample> {
        self.cfg.with_accept_frac(accept_frac).validate()?;
        let obs = summarize(observed).map_err(|e| Error::run(format!("observed series: {e}")))?;
        let dist = self.distances(&obs);
        let mut order: Vec<usize> = (0..dist.len()).collect();
        order.sort_by(|&i, &j| dist[i].total_cmp(&dist[j]).then(i.cmp(&j)));
        order.truncate(quantile_rank(self.len(), accept_frac));
        Ok(PosteriorSample {
            particles: order.iter().map(|&i| self.params[i].clone()).collect(),
            distances: order.iter().map(|&i| dist[i]).collect(),
        })
    }
}

/// Normalized median absolute deviation per summary over the valid
/// simulations, falling back to the standard deviation, then to one.
fn summary_scales(summaries: &[Option<Summary>]) -> Result<Summary> {
    let valid: Vec<&Summary> = summaries.iter().flatten().collect();
    if valid.is_empty() {
        return Err(Error::run("no prior-predictive simulation produced a valid summary"));
    }
    let mut scale = [1.0; N_SUMMARIES];
    for (j, slot) in scale.iter_mut().enumerate() {
        let col: Vec<f64> = valid.iter().map(|s| s[j]).collect();
        let d = EmpiricalDistribution::new(col.clone())?;
        let med = d.quantile(0.5)?;
        let mad = EmpiricalDistribution::new(col.iter().map(|v| (v - med).abs()).collect())?.quantile(0.5)? * 1.4826;
        let sd = crate::stats::sample_variance(&col).unwrap_or(0.0).sqrt();
        *slot = if mad > 0.0 {
            mad
        } else if sd > 0.0 {
            sd
        } else {
            1.0
        };
    }
    Ok(scale)
}

/// Accepted particles with their distances, nearest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSample {
    pub particles: Vec<Vec<f64>>,
    pub distances: Vec<f64>,
}

impl PosteriorSample {
    /// Distance of the furthest accepted particle.
    pub fn tolerance(&self) -> f64 {
        self.distances.last().copied().unwrap_or(f64::NAN)
    }

    fn margin(&self, j: usize) -> Result<Vec<f64>> {
        self.particles
            .iter()
            .map(|p| {
                p.get(j)
                    .copied()
                    .ok_or_else(|| Error::config(format!("margin {j} out of range")))
            })
            .collect()
    }
}

/// One rejection-ABC run: fresh reference table, then selection.
pub fn abc_rejection(observed: &[f64], cfg: &AbcConfig, stream: &RngStream) -> Result<PosteriorSample> {
    ReferenceTable::simulate(cfg, stream)?.posterior(observed, cfg.accept_frac)
}

/// Central credible interval from the empirical `alpha/2` and `1 - alpha/2`
/// quantiles of one margin.
pub fn credible_interval(posterior: &PosteriorSample, alpha: f64, margin: usize) -> Result<Interval> {
    if posterior.particles.is_empty() {
        return Err(Error::domain("empty posterior sample"));
    }
    let d = EmpiricalDistribution::new(posterior.margin(margin)?)?;
    Interval::new(d.quantile(alpha / 2.0)?, d.quantile(1.0 - alpha / 2.0)?, 1.0 - alpha)
}

/// Componentwise mean of the particles.
pub fn posterior_mean(posterior: &PosteriorSample) -> Result<Vec<f64>> {
    let first = posterior
        .particles
        .first()
        .ok_or_else(|| Error::domain("empty posterior sample"))?;
    let n = posterior.particles.len() as f64;
    let mut acc = vec![0.0; first.len()];
    for p in &posterior.particles {
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v;
        }
    }
    Ok(acc.into_iter().map(|s| s / n).collect())
}

/// The g-and-k MA(1) model with ABC posterior means as the estimator and
/// central credible intervals as the interval method, against a fixed
/// reference table.
#[derive(Debug, Clone, Copy)]
pub struct AbcBinding<'a> {
    pub table: &'a ReferenceTable,
    pub accept_frac: f64,
    /// Re-analyse each series against a fresh table drawn from the interval
    /// stream, as a full `abc_rejection` run would. When false every series
    /// reuses `table`, which is much cheaper but understates Monte Carlo noise.
    pub fresh_tables: bool,
}

impl<'a> AbcBinding<'a> {
    pub fn new(table: &'a ReferenceTable, accept_frac: f64) -> Self {
        Self {
            table,
            accept_frac,
            fresh_tables: true,
        }
    }

    pub fn posterior(&self, data: &[f64]) -> Result<PosteriorSample> {
        self.table.posterior(data, self.accept_frac)
    }

    /// Credible intervals of every margin from the shared table.
    pub fn observed_intervals(&self, data: &[f64], alpha: f64) -> Result<Vec<Interval>> {
        let post = self.posterior(data)?;
        (0..GK_PARAM_NAMES.len())
            .map(|j| credible_interval(&post, alpha, j))
            .collect()
    }
}

impl ModelBinding for AbcBinding<'_> {
    type Data = Vec<f64>;

    fn dim(&self) -> usize {
        GK_PARAM_NAMES.len()
    }

    fn simulate(&self, theta: &[f64], stream: &RngStream) -> Result<Vec<f64>> {
        gk_ma1_simulate(&GandKTheta::from_slice(theta)?, self.table.cfg.series_len, stream)
    }

    fn estimate(&self, data: &Vec<f64>) -> Result<Vec<f64>> {
        posterior_mean(&self.posterior(data)?)
    }

    fn intervals(&self, data: &Vec<f64>, alpha: f64, stream: &RngStream) -> Result<Vec<Interval>> {
        let post = if self.fresh_tables {
            ReferenceTable::simulate(&self.table.cfg, stream)?.posterior(data, self.accept_frac)?
        } else {
            self.posterior(data)?
        };
        (0..self.dim()).map(|j| credible_interval(&post, alpha, j)).collect()
    }
}

/// Corrects the credible intervals of `observed`, analysed against the
/// binding's shared table. The simulation parameter is the posterior mean
/// unless `settings` overrides it.
pub fn abc_correct(
    binding: &AbcBinding<'_>,
    observed: &[f64],
    settings: &CorrectionSettings,
    stream: &RngStream,
) -> Result<Vec<CorrectionResult>> {
    settings.validate()?;
    let post = binding.posterior(observed)?;
    let theta_tilde = match &settings.theta_override {
        Some(t) => t.clone(),
        None => posterior_mean(&post)?,
    };
    let raw: Vec<Interval> = (0..binding.dim())
        .map(|j| credible_interval(&post, settings.alpha, j))
        .collect::<Result<_>>()?;
    correct_from_raw(binding, &raw, &theta_tilde, settings, stream)
}

/// [`abc_correct`] at the posterior mean on a table that has already been
/// simulated.
pub fn abc_correct_on_table(
    table: &ReferenceTable,
    observed: &[f64],
    accept_frac: f64,
    alpha: f64,
    n: usize,
    stream: &RngStream,
) -> Result<Vec<CorrectionResult>> {
    abc_correct(
        &AbcBinding::new(table, accept_frac),
        observed,
        &CorrectionSettings::new(alpha, n),
        stream,
    )
}

/// ABC on `observed`, then per-margin correction from `n` replicate series
/// simulated at the posterior mean, each re-analysed by a fresh rejection-ABC
/// run with the same configuration.
pub fn abc_corrected_intervals(
    observed: &[f64],
    cfg: &AbcConfig,
    alpha: f64,
    n: usize,
    stream: &RngStream,
) -> Result<Vec<CorrectionResult>> {
    CorrectionSettings::new(alpha, n).validate()?;
    let table = ReferenceTable::simulate(cfg, &stream.child(TABLE))?;
    abc_correct_on_table(&table, observed, cfg.accept_frac, alpha, n, &stream.child(CORRECTION))
}

/// Posterior mean at one rung of a tolerance ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub accept_frac: f64,
    pub tolerance: f64,
    pub mean: Vec<f64>,
    /// Largest componentwise change from the previous rung, in units of the
    /// prior width; `None` on the first rung.
    pub max_relative_change: Option<f64>,
}

/// Posterior means across a ladder of acceptance fractions on one table,
/// reported so the user can judge where the estimate stabilizes.
pub fn posterior_mean_ladder(table: &ReferenceTable, observed: &[f64], fracs: &[f64]) -> Result<Vec<LadderRung>> {
    let mut out: Vec<LadderRung> = Vec::with_capacity(fracs.len());
    for &f in fracs {
        let post = table.posterior(observed, f)?;
        let mean = posterior_mean(&post)?;
        let max_relative_change = out.last().map(|prev| {
            prev.mean
                .iter()
                .zip(&mean)
                .zip(&table.cfg.prior)
                .map(|((a, b), (lo, hi))| (a - b).abs() / (hi - lo))
                .fold(0.0, f64::max)
        });
        out.push(LadderRung {
            accept_frac: f,
            tolerance: post.tolerance(),
            mean,
            max_relative_change,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truth() -> GandKTheta {
        GandKTheta::new(0.01, 0.02, 0.3, 0.4, 0.2).unwrap()
    }

    #[test]
    fn octiles_of_a_ramp() {
        let series: Vec<f64> = (1..=800).map(f64::from).collect();
        let s = summarize(&series).unwrap();
        for j in 0..7 {
            assert_eq!(s[j], 100.0 * (j + 1) as f64);
        }
        // evenly spaced: no skew, kurtosis ratio (700-500+300-100)/400 = 1
        assert_eq!(s[7], 0.0);
        assert_eq!(s[8], 1.0);
        assert!(s[9] > 0.99);
    }

    #[test]
    fn symmetric_series_has_no_skew() {
        let series: Vec<f64> = (-200..=200).map(|i| f64::from(i).powi(3)).collect();
        assert!(summarize(&series).unwrap()[7].abs() < 1e-12);
    }

    #[test]
    fn constant_or_short_series_is_invalid() {
        assert!(summarize(&[1.0; 50]).is_err());
        assert!(summarize(&[1.0, 2.0, 3.0]).is_err());
        assert!(lag1_autocorrelation(&[2.0; 5]).is_none());
    }

    #[test]
    fn iid_series_has_small_autocorrelation() {
        let x = crate::rng::sample_std_normal(&RngStream::new(8), 100_000);
        assert!(lag1_autocorrelation(&x).unwrap().abs() < 0.01);
    }

    #[test]
    fn config_validation() {
        assert!(AbcConfig::new(2000, 0.02, 50).validate().is_ok());
        assert!(AbcConfig::new(2000, 0.0, 50).validate().unwrap_err().is_config());
        assert!(AbcConfig::new(2000, 1.5, 50).validate().is_err());
        assert!(AbcConfig::new(100, 0.05, 50).validate().is_err());
        assert!(AbcConfig::new(2000, 0.02, 10).validate().is_err());
        let mut cfg = AbcConfig::new(2000, 0.02, 50);
        cfg.prior[2] = (1.0, 0.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn accepting_everything_returns_the_prior_sample() {
        let cfg = AbcConfig::new(200, 1.0, 30);
        let stream = RngStream::new(3);
        let table = ReferenceTable::simulate(&cfg, &stream).unwrap();
        let x = gk_ma1_simulate(&truth(), 30, &RngStream::new(4)).unwrap();
        let post = abc_rejection(&x, &cfg, &stream).unwrap();
        let mut got = post.particles.clone();
        let mut want = table.params().to_vec();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn accepted_distances_are_the_smallest() {
        let cfg = AbcConfig::new(500, 0.04, 40);
        let stream = RngStream::new(12);
        let table = ReferenceTable::simulate(&cfg, &stream).unwrap();
        let x = gk_ma1_simulate(&truth(), 40, &RngStream::new(13)).unwrap();
        let post = table.posterior(&x, cfg.accept_frac).unwrap();
        assert_eq!(post.particles.len(), 20);
        assert!(post.distances.windows(2).all(|w| w[0] <= w[1]));
        let mut all = table.distances(&summarize(&x).unwrap());
        all.sort_by(f64::total_cmp);
        assert_eq!(post.distances, all[..20].to_vec());
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = AbcConfig::new(300, 0.05, 40);
        let x = gk_ma1_simulate(&truth(), 40, &RngStream::new(1)).unwrap();
        let a = abc_rejection(&x, &cfg, &RngStream::new(2)).unwrap();
        let b = abc_rejection(&x, &cfg, &RngStream::new(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn credible_interval_order_statistics() {
        let post = PosteriorSample {
            particles: (1..=1000).map(|i| vec![f64::from(i)]).collect(),
            distances: vec![0.0; 1000],
        };
        let int = credible_interval(&post, 0.05, 0).unwrap();
        assert_eq!((int.lower, int.upper), (25.0, 975.0));

        let flat = PosteriorSample {
            particles: vec![vec![0.7]; 12],
            distances: vec![0.0; 12],
        };
        let int = credible_interval(&flat, 0.05, 0).unwrap();
        assert_eq!((int.lower, int.upper), (0.7, 0.7));
    }

    #[test]
    fn posterior_mean_cases() {
        let one = PosteriorSample {
            particles: vec![vec![1.0, -2.0]],
            distances: vec![0.0],
        };
        assert_eq!(posterior_mean(&one).unwrap(), vec![1.0, -2.0]);
        let sym = PosteriorSample {
            particles: vec![vec![1.0, 5.0], vec![3.0, 7.0], vec![2.0, 6.0]],
            distances: vec![0.0; 3],
        };
        assert_eq!(posterior_mean(&sym).unwrap(), vec![2.0, 6.0]);
        let empty = PosteriorSample {
            particles: vec![],
            distances: vec![],
        };
        assert!(posterior_mean(&empty).is_err());
        assert!(credible_interval(&empty, 0.05, 0).is_err());
    }

    #[test]
    fn self_consistency_recovers_scale_and_kurtosis() {
        let theta = truth();
        let x = gk_ma1_simulate(&theta, 500, &RngStream::new(40)).unwrap();
        let cfg = AbcConfig::new(20_000, 0.005, 500);
        let post = abc_rejection(&x, &cfg, &RngStream::new(41)).unwrap();
        let mean = posterior_mean(&post).unwrap();
        // within a quarter of the prior width
        assert!((mean[1] - theta.b).abs() < 0.1 / 4.0, "b {}", mean[1]);
        assert!((mean[3] - theta.k).abs() < 1.0 / 4.0, "k {}", mean[3]);
    }

    #[test]
    fn wider_acceptance_gives_a_wider_interval() {
        let x = gk_ma1_simulate(&truth(), 200, &RngStream::new(50)).unwrap();
        let table = ReferenceTable::simulate(&AbcConfig::new(5000, 0.01, 200), &RngStream::new(51)).unwrap();
        let narrow = table.posterior(&x, 0.01).unwrap();
        let wide = table.posterior(&x, 0.1).unwrap();
        for j in [1, 3] {
            let a = credible_interval(&narrow, 0.05, j).unwrap();
            let b = credible_interval(&wide, 0.05, j).unwrap();
            assert!(b.width() >= a.width(), "margin {j}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn corrected_pipeline_checks_n() {
        let x = gk_ma1_simulate(&truth(), 50, &RngStream::new(1)).unwrap();
        let cfg = AbcConfig::new(500, 0.04, 50);
        let err = abc_corrected_intervals(&x, &cfg, 0.05, 10, &RngStream::new(2)).unwrap_err();
        assert!(err.is_config());
        let rs = abc_corrected_intervals(&x, &cfg, 0.05, 20, &RngStream::new(2)).unwrap();
        assert_eq!(rs.len(), 5);
        for (j, r) in rs.iter().enumerate() {
            assert_eq!(r.margin, j);
            assert_eq!(r.corrected.lower, r.raw.lower + r.shift_lower);
            assert_eq!(r.corrected.upper, r.raw.upper + r.shift_upper);
        }
    }

    #[test]
    fn ladder_reports_every_rung() {
        let x = gk_ma1_simulate(&truth(), 50, &RngStream::new(1)).unwrap();
        let table = ReferenceTable::simulate(&AbcConfig::new(1000, 0.02, 50), &RngStream::new(2)).unwrap();
        let rungs = posterior_mean_ladder(&table, &x, &[0.2, 0.1, 0.05, 0.02]).unwrap();
        assert_eq!(rungs.len(), 4);
        assert!(rungs[0].max_relative_change.is_none());
        assert!(rungs.windows(2).all(|w| w[1].tolerance <= w[0].tolerance));
        assert!(rungs[1..].iter().all(|r| r.max_relative_change.unwrap() >= 0.0));
    }
}
