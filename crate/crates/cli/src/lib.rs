//! Command-line verification lab: configuration, check orchestration and
//! report emission.

pub mod config;
pub mod error;
pub mod report;
pub mod suite;
pub mod sweep;

use std::path::{Path, PathBuf};

use vhm_core::ccr::PhaseConvention;

pub use config::{parse_config, parse_config_str, ExperimentConfig};
pub use error::LabError;
pub use report::{Record, Relation, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Sweep,
    Kms,
    Spectrum,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Sweep => "sweep",
            Command::Kms => "kms",
            Command::Spectrum => "spectrum",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub output: PathBuf,
    pub tolerance_scale: f64,
    pub seed: Option<u64>,
    pub convention: PhaseConvention,
}

/// What a run wrote and whether every record passed.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub all_pass: bool,
    pub records: usize,
    pub failures: Vec<String>,
    pub files: Vec<PathBuf>,
}

fn summarize<R: report::Outcome + serde::Serialize>(
    report: &Report<R>,
    files: Vec<PathBuf>,
) -> RunSummary {
    RunSummary {
        all_pass: report.all_pass,
        records: report.records.len(),
        failures: report.failures().map(|r| r.key().to_string()).collect(),
        files,
    }
}

fn tolerance(cfg: &ExperimentConfig, name: &str, default: f64, scale: f64) -> f64 {
    cfg.tolerances.get(name).copied().unwrap_or(default * scale)
}

pub fn run(command: Command, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunSummary, LabError> {
    if !(opts.tolerance_scale > 0.0) || !opts.tolerance_scale.is_finite() {
        return Err(LabError::Config("tolerance scale must be > 0".into()));
    }
    let mut cfg = cfg.clone();
    if opts.seed.is_some() {
        cfg.seed = opts.seed;
    }
    let out = opts.output.as_path();
    let report_path = out.join("report.json");
    let scale = opts.tolerance_scale;
    match command {
        Command::Check => {
            let seed = cfg.require_seed()?;
            let ctx = suite::Context::from_config(&cfg, opts.convention)?;
            let tol = suite::Tolerances {
                overrides: &cfg.tolerances,
                scale,
            };
            let records = suite::run_check(&ctx, seed, tol);
            let report = Report::new(command.name(), &cfg, Some(seed), scale, records);
            report.write(&report_path)?;
            Ok(summarize(&report, vec![report_path]))
        }
        Command::Kms => {
            let seed = cfg.require_seed()?;
            let ctx = suite::Context::from_config(&cfg, opts.convention)?;
            let tol = suite::KmsTolerances {
                pointwise: tolerance(&cfg, "kms_pointwise", 1e-11, scale),
                integral: tolerance(&cfg, "kms_integral", 1e-8, scale),
                coth: tolerance(&cfg, "coth_identity", 1e-12, scale),
                ground: tolerance(&cfg, "ground_spectral_support", 1e-10, scale),
                beta_limit: tolerance(&cfg, "beta_limit", 1e-8, scale),
            };
            let records = suite::run_kms(&ctx, seed, &tol)?;
            let report = Report::new(command.name(), &cfg, Some(seed), scale, records);
            report.write(&report_path)?;
            Ok(summarize(&report, vec![report_path]))
        }
        Command::Spectrum => {
            let seed = cfg.require_seed()?;
            let ctx = suite::Context::from_config(&cfg, opts.convention)?;
            let tol = tolerance(&cfg, "pencil_spectrum", 1e-10, scale);
            let records = suite::run_spectrum(&ctx, seed, tol)?;
            let report = Report::new(command.name(), &cfg, Some(seed), scale, records);
            report.write(&report_path)?;
            Ok(summarize(&report, vec![report_path]))
        }
        Command::Sweep => {
            let sweep = sweep::run_sweep(&cfg)?;
            let csv_path = out.join("flow.csv");
            report::write_file(&csv_path, &sweep.csv)?;
            let report = Report::new(command.name(), &cfg, cfg.seed, scale, sweep.records);
            report.write(&report_path)?;
            Ok(summarize(&report, vec![report_path, csv_path]))
        }
    }
}

/// Output directory: the command-line value, then the config, then `./out`.
pub fn output_dir(flag: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}
