use coverage_correction::bootstrap::{double_bootstrap, BootstrapConfig};
use coverage_correction::engine::shift_samples;
use coverage_correction::harness::{
    clt_check, run_coverage, CltConfig, CoverageReport, ExperimentConfig, Method, ModelConfig,
};
use coverage_correction::models::{NormalLocationSpec, NormalScaleSpec};
use coverage_correction::{correct_interval, CorrectionSettings, EmpiricalDistribution, RngStream};

#[test]
fn corrected_endpoints_are_raw_plus_the_empirical_quantiles() {
    let spec = NormalScaleSpec::new(15, 0.3).unwrap();
    let x = spec.simulate(2.0, &RngStream::new(1)).unwrap();
    let stream = RngStream::new(2);
    let settings = CorrectionSettings::new(0.1, 333);
    let r = correct_interval(&spec, &x, &settings, 0, &stream).unwrap();

    let s = shift_samples(&spec, &r.theta_tilde, 0.1, 333, &stream).unwrap();
    // rank ceil(333 * 0.05) = 17 and ceil(333 * 0.95) = 317
    let mut lo = s.lower[0].clone();
    let mut hi = s.upper[0].clone();
    lo.sort_by(f64::total_cmp);
    hi.sort_by(f64::total_cmp);
    assert_eq!(r.shift_lower, lo[16]);
    assert_eq!(r.shift_upper, hi[316]);
    assert_eq!(r.corrected.lower, r.raw.lower + lo[16]);
    assert_eq!(r.corrected.upper, r.raw.upper + hi[316]);
}

#[test]
fn coverage_report_invariants() {
    for method in [Method::Pivot, Method::CorrectedPivot, Method::Bootstrap] {
        let mut cfg = ExperimentConfig::new(ModelConfig::NormalScale { m: 10, epsilon: 0.1 }, method);
        cfg.reps = 137;
        cfg.n = 100;
        cfg.bootstrap_outer = Some(60);
        let study = run_coverage(&cfg).unwrap();
        let r = &study.reports[0];
        let hits = r.coverage * r.reps as f64;
        assert!((hits - hits.round()).abs() < 1e-9);
        assert!((r.coverage - 0.5).abs() <= 0.5);
        assert_eq!(r.mc_se, CoverageReport::mc_se_for(r.coverage, r.reps));
        assert_eq!(r.mean_shift_lower.is_some(), method.is_corrected());
    }
}

#[test]
fn calibrated_pivot_is_not_overcorrected() {
    let mut cfg = ExperimentConfig::new(
        ModelConfig::NormalLocation { m: 20, epsilon: 0.0 },
        Method::CorrectedPivot,
    );
    cfg.n = 500;
    cfg.seed = 11;
    let r = run_coverage(&cfg).unwrap().reports.remove(0);
    assert!((r.coverage - 0.95).abs() <= 3.0 * r.mc_se, "{r:?}");
}

#[test]
fn scale_shift_quantile_is_epsilon_for_any_simulation_parameter() {
    // theta_tilde - L(y) = eps + theta_tilde (1 - W / chi2_hi) with W ~ chi2_{m-1},
    // whose lower quantile is eps whatever theta_tilde is.
    let spec = NormalScaleSpec::new(20, 0.2).unwrap();
    for theta in [0.5, 1.0, 2.0] {
        let s = shift_samples(&spec, &[theta], 0.05, 20_000, &RngStream::new(8)).unwrap();
        let q = EmpiricalDistribution::new(s.lower[0].clone())
            .unwrap()
            .quantile(0.025)
            .unwrap();
        assert!((q - 0.2).abs() < 0.03 * theta, "theta={theta} q={q}");
    }
}

#[test]
fn location_shifts_do_not_depend_on_the_simulation_parameter() {
    let spec = NormalLocationSpec::new(20, 1.0).unwrap();
    let stream = RngStream::new(21);
    let base = shift_samples(&spec, &[0.0], 0.05, 500, &stream).unwrap();
    for theta in [-2.0, -1.0, 1.0, 2.0] {
        let s = shift_samples(&spec, &[theta], 0.05, 500, &stream).unwrap();
        for (a, b) in s.lower[0].iter().zip(&base.lower[0]) {
            assert!((a - b).abs() <= 1e-12);
        }
    }
}

#[test]
fn clt_errors_are_centred() {
    let rows = clt_check(&CltConfig {
        m: 20,
        epsilon: 1.0,
        n_values: vec![500, 2000],
        reps: 300,
        alpha: 0.05,
        seed: 9,
    })
    .unwrap();
    for r in rows {
        assert!(r.mean.abs() <= 3.0 * r.mean_se, "{r:?}");
    }
}

#[test]
fn double_bootstrap_levels_are_ordered_probabilities() {
    let spec = NormalScaleSpec::new(20, 0.0).unwrap();
    let cfg = BootstrapConfig::new(100, 20);
    for seed in 0..5 {
        let x = spec.simulate(1.0, &RngStream::new(100 + seed)).unwrap();
        let d = double_bootstrap(&spec, &x, 0.05, &cfg, 0, &RngStream::new(seed)).unwrap();
        assert!(d.adjusted_lower_level > 0.0 && d.adjusted_upper_level < 1.0);
        assert!(d.adjusted_lower_level <= d.adjusted_upper_level);
        assert!(d.interval.lower <= d.interval.upper);
    }
}
