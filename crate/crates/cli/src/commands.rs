use std::fs;
use std::path::Path;

use coverage_correction::abc::{abc_correct, posterior_mean_ladder, AbcBinding, AbcConfig, ReferenceTable};
use coverage_correction::bootstrap::{BootstrapConfig, PercentileBootstrap};
use coverage_correction::harness::{
    clt_check, run_coverage, sweep, CltConfig, ExperimentConfig, Method, ModelConfig, Quartiles, SweepAxis,
    SweepConfig, Table,
};
use coverage_correction::models::gandk::GK_PARAM_NAMES;
use coverage_correction::models::{gk_ma1_simulate, GandKTheta, NormalLocationSpec, NormalScaleSpec};
use coverage_correction::{correct_margins, CorrectionResult, CorrectionSettings, Error, ModelBinding, RngStream};

use crate::cli::{AbcArgs, AbcDemoArgs, Axis, CltArgs, CorrectArgs, CoverageArgs, MethodName, ModelName, SweepArgs};
use crate::output::{emit, emit_side};
use crate::CliError;

const GK_DEFAULT_LEN: usize = 50;
const NORMAL_DEFAULT_M: usize = 20;

fn model_name(m: ModelName) -> &'static str {
    match m {
        ModelName::NormalLocation => "normal-location",
        ModelName::NormalScale => "normal-scale",
        ModelName::GkMa1 => "gk-ma1",
    }
}

fn method(m: MethodName) -> Method {
    match m {
        MethodName::Pivot => Method::Pivot,
        MethodName::CorrectedPivot => Method::CorrectedPivot,
        MethodName::Bootstrap => Method::Bootstrap,
        MethodName::CorrectedBootstrap => Method::CorrectedBootstrap,
        MethodName::DoubleBootstrap => Method::DoubleBootstrap,
    }
}

fn model_config(name: ModelName, m: Option<usize>, epsilon: f64, abc: &AbcArgs) -> ModelConfig {
    match name {
        ModelName::NormalLocation => ModelConfig::NormalLocation {
            m: m.unwrap_or(NORMAL_DEFAULT_M),
            epsilon,
        },
        ModelName::NormalScale => ModelConfig::NormalScale {
            m: m.unwrap_or(NORMAL_DEFAULT_M),
            epsilon,
        },
        ModelName::GkMa1 => ModelConfig::GkMa1 {
            abc: AbcConfig::new(abc.n_sims, abc.accept_frac, m.unwrap_or(GK_DEFAULT_LEN)),
        },
    }
}

fn read_numbers(path: &Path) -> Result<Vec<f64>, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read data {}: {e}", path.display())))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::config(format!("{}: '{t}' is not a finite number", path.display())))
        })
        .collect()
}

pub fn coverage(args: &CoverageArgs) -> Result<(), CliError> {
    let model = model_config(args.model, args.m, args.epsilon, &args.abc);
    let mut cfg = ExperimentConfig::new(model, method(args.method));
    cfg.alpha = args.common.alpha;
    cfg.n = args.n;
    cfg.reps = args.reps;
    cfg.seed = args.common.seed;
    if let Some(t) = &args.theta {
        cfg.theta_true = t.clone();
    }
    cfg.theta_tilde_override = args.theta_tilde.clone();
    cfg.bootstrap_outer = args.boot_outer;
    cfg.bootstrap_inner = args.boot_inner;

    let study = run_coverage(&cfg)?;
    let multi = study.reports.len() > 1;
    let mut header = vec![
        "model",
        "method",
        "alpha",
        "m",
        "n",
        "R",
        "coverage",
        "mc_se",
        "mean_width",
        "seed",
    ];
    if multi {
        header.push("margin");
    }
    let mut table = Table::new(header);
    for r in &study.reports {
        let mut row = vec![
            cfg.model.name().into(),
            cfg.method.name().into(),
            cfg.alpha.into(),
            cfg.model.data_size().into(),
            cfg.n.into(),
            r.reps.into(),
            r.coverage.into(),
            r.mc_se.into(),
            r.mean_width.into(),
            cfg.seed.into(),
        ];
        if multi {
            row.push(r.margin_name.clone().into());
        }
        table.push(row);
    }
    if study.failed > 0 {
        eprintln!("{} replicate(s) failed and were excluded", study.failed);
    }
    eprintln!("wall time {:.2}s", study.wall_time);
    emit(&table, "coverage", &args.common)
}

fn quartile_cells(q: &Quartiles) -> [coverage_correction::harness::Cell; 3] {
    [q.q1.into(), q.median.into(), q.q3.into()]
}

pub fn sweep_cmd(args: &SweepArgs) -> Result<(), CliError> {
    let model = match args.model {
        ModelName::GkMa1 => return Err(CliError::config("sweep supports normal-location and normal-scale")),
        m => model_config(
            m,
            Some(args.m),
            args.epsilon,
            &AbcArgs {
                n_sims: 0,
                accept_frac: 0.0,
            },
        ),
    };
    let theta_true = args.theta.unwrap_or(model.default_theta()[0]);
    let axis = match args.axis {
        Axis::Epsilon => SweepAxis::Epsilon(args.values.clone()),
        Axis::ThetaTilde => SweepAxis::ThetaTilde(args.values.clone()),
        Axis::M => SweepAxis::M(
            args.values
                .iter()
                .map(|&v| {
                    if v >= 1.0 && v.fract() == 0.0 {
                        Ok(v as usize)
                    } else {
                        Err(CliError::config(format!("m value {v} is not a positive integer")))
                    }
                })
                .collect::<Result<_, _>>()?,
        ),
    };
    let cfg = SweepConfig {
        model,
        alpha: args.common.alpha,
        n: args.n,
        reps: args.reps,
        seed: args.common.seed,
        theta_true,
    };
    let rows = sweep(&cfg, &axis)?;

    let mut header: Vec<String> = ["model", "axis", "value", "alpha", "n", "R", "seed"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for col in [
        "raw_lower",
        "corrected_lower",
        "corrected_upper",
        "lower_error",
        "upper_error",
    ] {
        for q in ["q1", "median", "q3"] {
            header.push(format!("{col}_{q}"));
        }
    }
    let mut table = Table::new(header);
    for r in &rows {
        let mut row = vec![
            cfg.model.name().into(),
            axis.name().into(),
            r.value.into(),
            cfg.alpha.into(),
            cfg.n.into(),
            cfg.reps.into(),
            cfg.seed.into(),
        ];
        for q in [
            &r.raw_lower,
            &r.corrected_lower,
            &r.corrected_upper,
            &r.lower_error,
            &r.upper_error,
        ] {
            row.extend(quartile_cells(q));
        }
        table.push(row);
    }
    emit(&table, "sweep", &args.common)
}

pub fn clt(args: &CltArgs) -> Result<(), CliError> {
    let cfg = CltConfig {
        m: args.m,
        epsilon: args.epsilon,
        n_values: args.n.clone(),
        reps: args.reps,
        alpha: args.common.alpha,
        seed: args.common.seed,
    };
    let rows = clt_check(&cfg)?;
    let mut table = Table::new([
        "m",
        "epsilon",
        "alpha",
        "n",
        "R",
        "variance",
        "target",
        "rel_error",
        "mean",
        "mean_se",
        "seed",
    ]);
    for r in &rows {
        table.push(vec![
            cfg.m.into(),
            cfg.epsilon.into(),
            cfg.alpha.into(),
            r.n.into(),
            r.reps.into(),
            r.variance.into(),
            r.target.into(),
            r.relative_variance_error().into(),
            r.mean.into(),
            r.mean_se.into(),
            cfg.seed.into(),
        ]);
    }
    emit(&table, "clt", &args.common)
}

fn interval_table(results: &[CorrectionResult], names: &[String], extra: &[(&str, f64)], seed: u64) -> Table {
    let mut header = vec![
        "margin",
        "raw_lower",
        "raw_upper",
        "corrected_lower",
        "corrected_upper",
        "shift_lower",
        "shift_upper",
        "theta_tilde",
        "degenerate",
        "n",
    ];
    header.extend(extra.iter().map(|(k, _)| *k));
    header.push("seed");
    let mut table = Table::new(header);
    for r in results {
        let mut row = vec![
            names[r.margin].clone().into(),
            r.raw.lower.into(),
            r.raw.upper.into(),
            r.corrected.lower.into(),
            r.corrected.upper.into(),
            r.shift_lower.into(),
            r.shift_upper.into(),
            r.theta_tilde[r.margin].into(),
            r.degenerate.to_string().into(),
            r.n.into(),
        ];
        row.extend(extra.iter().map(|(_, v)| (*v).into()));
        row.push(seed.into());
        table.push(row);
    }
    table
}

fn gk_names() -> Vec<String> {
    GK_PARAM_NAMES.iter().map(|s| s.to_string()).collect()
}

pub fn abc_demo(args: &AbcDemoArgs) -> Result<(), CliError> {
    let cfg = AbcConfig::new(args.abc.n_sims, args.abc.accept_frac, args.m);
    cfg.validate()?;
    let root = RngStream::new(args.common.seed);
    let observed = match &args.data {
        Some(path) => read_numbers(path)?,
        None => {
            let theta = match &args.theta {
                Some(t) => GandKTheta::from_slice(t).map_err(|e| CliError::config(e.to_string()))?,
                None => GandKTheta::from_slice(&ModelConfig::GkMa1 { abc: cfg.clone() }.default_theta())?,
            };
            gk_ma1_simulate(&theta, args.m, &root.child(0))?
        }
    };
    // Same streams as abc_corrected_intervals on root.child(1).
    let stream = root.child(1);
    let table = ReferenceTable::simulate(&cfg, &stream.child(0))?;
    let binding = AbcBinding::new(&table, cfg.accept_frac);
    let settings = CorrectionSettings::new(args.common.alpha, args.n);
    let results = abc_correct(&binding, &observed, &settings, &stream.child(1))?;
    let tolerance = binding.posterior(&observed)?.tolerance();
    let out = interval_table(
        &results,
        &gk_names(),
        &[
            ("accept_frac", cfg.accept_frac),
            ("tolerance", tolerance),
            ("alpha", args.common.alpha),
        ],
        args.common.seed,
    );
    emit(&out, "abc-demo", &args.common)?;

    if !args.ladder.is_empty() {
        let rungs = posterior_mean_ladder(&table, &observed, &args.ladder)?;
        let mut header = vec!["accept_frac".to_string(), "tolerance".to_string()];
        header.extend(GK_PARAM_NAMES.iter().map(|n| format!("mean_{n}")));
        header.push("max_relative_change".into());
        let mut ladder = Table::new(header);
        for r in &rungs {
            let mut row = vec![r.accept_frac.into(), r.tolerance.into()];
            row.extend(r.mean.iter().map(|&v| v.into()));
            row.push(r.max_relative_change.into());
            ladder.push(row);
        }
        emit_side(&ladder, "abc-demo-ladder", &args.common)?;
    }
    Ok(())
}

fn correct_normal<B: ModelBinding<Data = Vec<f64>>>(
    binding: &B,
    x: &Vec<f64>,
    args: &CorrectArgs,
    settings: &CorrectionSettings,
    stream: &RngStream,
) -> Result<Vec<CorrectionResult>, Error> {
    match args.method {
        MethodName::CorrectedPivot => correct_margins(binding, x, settings, stream),
        MethodName::CorrectedBootstrap => {
            let boot_cfg = BootstrapConfig::new(args.boot_outer, 0);
            boot_cfg.validate(false)?;
            correct_margins(&PercentileBootstrap::new(binding, boot_cfg), x, settings, stream)
        }
        _ => Err(Error::config(
            "correct supports corrected-pivot and corrected-bootstrap",
        )),
    }
}

pub fn correct(args: &CorrectArgs) -> Result<(), CliError> {
    let x = read_numbers(&args.data)?;
    let mut settings = CorrectionSettings::new(args.common.alpha, args.n);
    if let Some(t) = &args.theta_tilde {
        settings = settings.with_theta(t.clone());
    }
    let stream = RngStream::new(args.common.seed);
    let (results, names) = match args.model {
        ModelName::NormalLocation => {
            let spec = NormalLocationSpec::new(x.len(), args.epsilon)?;
            (
                correct_normal(&spec, &x, args, &settings, &stream)?,
                vec!["mu".to_string()],
            )
        }
        ModelName::NormalScale => {
            let spec = NormalScaleSpec::new(x.len(), args.epsilon)?;
            (
                correct_normal(&spec, &x, args, &settings, &stream)?,
                vec!["sigma2".to_string()],
            )
        }
        ModelName::GkMa1 => {
            if args.method != MethodName::CorrectedPivot {
                return Err(CliError::config("gk-ma1 supports corrected-pivot only"));
            }
            let cfg = AbcConfig::new(args.abc.n_sims, args.abc.accept_frac, x.len());
            let table = ReferenceTable::simulate(&cfg, &stream.child(0))?;
            let binding = AbcBinding::new(&table, cfg.accept_frac);
            (abc_correct(&binding, &x, &settings, &stream.child(1))?, gk_names())
        }
    };
    let out = interval_table(&results, &names, &[("alpha", args.common.alpha)], args.common.seed);
    eprintln!("{}: {} observations", model_name(args.model), x.len());
    emit(&out, "correct", &args.common)
}
