use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vhm_core::ccr::PhaseConvention;
use vhm_lab::{output_dir, parse_config, run, Command, RunOptions};

/// Verification lab for the van Hove-Miyatake model.
///
/// Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
/// configuration or I/O error.
#[derive(Debug, Parser)]
#[command(version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON experiment config. Required keys: M, omega, mu, N; seed is
    /// required by check, kms and spectrum. Optional: v (zero source),
    /// tolerances (per-check overrides), sweep {profile = severe,
    /// lambdas = 10..200 step 10, betas = [0.5,1,2,5,10,20],
    /// t_grid = {start -6, stop 6, points 64}}, spectrum_N = 4, output.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory [default: ./out]
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Multiplies every built-in upper-bound tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    tolerance_scale: f64,

    /// Overrides the seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    quiet: bool,

    /// Test hook: product phase convention used by the algebra checks.
    #[arg(long, global = true, hide = true, value_enum, default_value_t = Phase::Standard)]
    phase_convention: Phase,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Phase {
    Standard,
    Reversed,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run every check suite; writes report.json.
    Check,
    /// Renormalization-flow table; writes flow.csv and report.json.
    Sweep,
    /// KMS, ground-state and zero-temperature checks; writes report.json.
    Kms,
    /// Dressed Hamiltonian spectra; writes report.json.
    Spectrum,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(path) = cli.config.as_deref() else {
        eprintln!("error: --config is required");
        return ExitCode::from(2);
    };
    let cfg = match parse_config(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let command = match cli.command {
        Cmd::Check => Command::Check,
        Cmd::Sweep => Command::Sweep,
        Cmd::Kms => Command::Kms,
        Cmd::Spectrum => Command::Spectrum,
    };
    let opts = RunOptions {
        output: output_dir(cli.output.as_deref(), &cfg),
        tolerance_scale: cli.tolerance_scale,
        seed: cli.seed,
        convention: match cli.phase_convention {
            Phase::Standard => PhaseConvention::Standard,
            Phase::Reversed => PhaseConvention::Reversed,
        },
    };
    match run(command, &cfg, &opts) {
        Ok(summary) => {
            if !cli.quiet {
                let status = if summary.all_pass { "PASS" } else { "FAIL" };
                println!("{} {}: {} records", status, command.name(), summary.records);
                for name in &summary.failures {
                    println!("  failed: {name}");
                }
                for f in &summary.files {
                    println!("  wrote {}", f.display());
                }
            }
            if summary.all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
