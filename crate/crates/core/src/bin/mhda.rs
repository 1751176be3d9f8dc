use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mhda::config::{parse_config, RunConfig};
use mhda::error::{Error, Result};
use mhda::runner::{apply_env_out_dir, run, sweep};
use mhda::snapshot::{check, read_snapshot};

/// Pseudo-spectral solver for the 2D MHD-alpha system with fractional dissipation.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation; exit 0 bounded, 2 suspect growth, 3 blow-up.
    Run { config: PathBuf },
    /// Run the configuration once per r1 with r2 = 1 - r1 - offset.
    Sweep {
        config: PathBuf,
        /// Comma-separated r1 values in (0, 1).
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        r1: Vec<f64>,
        /// Distance below the critical line r1 + r2 = 1.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        threshold_offset: f64,
    },
    /// Re-verify the invariants of a state snapshot.
    Check { state: PathBuf },
}

fn load(path: &PathBuf) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })?;
    let mut cfg = parse_config(&text)?;
    apply_env_out_dir(&mut cfg);
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run { config } => {
            let outcome = run(&load(&config)?)?;
            print!("{}", outcome.simulation.report);
            println!("artifacts: {}", outcome.out_dir.display());
            Ok(outcome.exit_code())
        }
        Command::Sweep {
            config,
            r1,
            threshold_offset,
        } => {
            let outcome = sweep(&load(&config)?, &r1, threshold_offset)?;
            for d in &outcome.duplicates {
                eprintln!("warning: duplicate r1 = {d} ignored");
            }
            for e in &outcome.entries {
                match &e.result {
                    Ok(r) => println!("r1 = {:<8} r2 = {:<8} {}", e.r1, e.r2, r.verdict),
                    Err(msg) => println!("r1 = {:<8} r2 = {:<8} FAILED: {msg}", e.r1, e.r2),
                }
            }
            println!("summary: {}", outcome.summary_path.display());
            Ok(outcome.exit_code())
        }
        Command::Check { state } => {
            let report = check(&read_snapshot(&state)?);
            println!("{report}");
            Ok(if report.ok() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
