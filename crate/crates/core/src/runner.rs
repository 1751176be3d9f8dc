//! Single runs and exponent sweeps, with their on-disk artifacts.
//!
//! A run directory holds `config.txt` (the effective configuration),
//! `diagnostics.csv`, optional `state_<t>.bin` snapshots and `verdict.txt`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::config::{InitialCondition, RunConfig};
use crate::diagnostics::{
    energy_balance_residual, integrands, record, regularity_monitor, DiagnosticsRecord, Integral,
    MonitorSettings, Norm, RegularityReport, Verdict,
};
use crate::error::{Error, Result};
use crate::initial::{orszag_tang, random_band_limited, single_mode};
use crate::integrate::{integrate_with, IntegrationOutcome};
use crate::model::MhdAlphaState;
use crate::snapshot::{snapshot_name, write_snapshot};

/// Environment variable overriding the output root.
pub const OUT_DIR_ENV: &str = "MHDA_OUT_DIR";

/// Norm columns of `diagnostics.csv`, in order.
pub const CSV_NORMS: [Norm; 14] = [
    Norm::L2U,
    Norm::H1U,
    Norm::L2B,
    Norm::WL2,
    Norm::WL4,
    Norm::WL8,
    Norm::WMax,
    Norm::LamR1U,
    Norm::LamR2B,
    Norm::Lam1pR1B,
    Norm::Lam1pR2B,
    Norm::Lam2pR2B,
    Norm::Lam3B,
    Norm::Lam3V,
];

/// Integral columns of `diagnostics.csv`, after the norms.
pub const CSV_INTEGRALS: [Integral; 2] = [Integral::Lam3pR1VSq, Integral::Lam3pR2BSq];

/// Replaces `config.out_dir` with `$MHDA_OUT_DIR` when that is set and non-empty.
pub fn apply_env_out_dir(config: &mut RunConfig) {
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()) {
        config.out_dir = PathBuf::from(dir);
    }
}

pub fn initial_state(config: &RunConfig) -> Result<MhdAlphaState> {
    let grid = config.grid()?;
    let state = match &config.ic {
        InitialCondition::Zero => MhdAlphaState::zero(&grid),
        InitialCondition::OrszagTang {
            amplitude_w,
            amplitude_a,
        } => orszag_tang(&grid, *amplitude_w, *amplitude_a),
        InitialCondition::SingleMode {
            kx,
            ky,
            amplitude_w,
            amplitude_a,
        } => single_mode(&grid, *kx, *ky, *amplitude_w, *amplitude_a)?,
        InitialCondition::Random(spec) => random_band_limited(&grid, spec)?,
    };
    Ok(state)
}

pub fn csv_header() -> String {
    let mut cols = vec!["t", "energy_alpha", "diss_u", "diss_b", "energy_residual"];
    cols.extend(CSV_NORMS.iter().map(|n| n.label()));
    cols.extend(CSV_INTEGRALS.iter().map(|i| i.label()));
    cols.join(",")
}

/// One CSV row; `residual` is the energy-balance defect over the preceding interval.
pub fn csv_row(r: &DiagnosticsRecord, residual: f64) -> String {
    let mut row = String::new();
    let mut push = |v: f64| {
        if !row.is_empty() {
            row.push(',');
        }
        write!(row, "{v:.16e}").expect("writing to a String");
    };
    for v in [r.t, r.energy_alpha, r.diss_u, r.diss_b, residual] {
        push(v);
    }
    for n in CSV_NORMS {
        push(r.norm(n));
    }
    for i in CSV_INTEGRALS {
        push(r.integral(i).unwrap_or(f64::NAN));
    }
    row
}

/// Per-record energy residuals; the first record has no interval and gets 0.
pub fn residuals(history: &[DiagnosticsRecord]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; history.len().min(1)];
    for w in history.windows(2) {
        out.push(energy_balance_residual(&w[0], &w[1])?);
    }
    Ok(out)
}

pub fn diagnostics_csv(history: &[DiagnosticsRecord]) -> Result<String> {
    let mut text = csv_header();
    text.push('\n');
    for (r, res) in history.iter().zip(residuals(history)?) {
        text.push_str(&csv_row(r, res));
        text.push('\n');
    }
    Ok(text)
}

/// Result of integrating a configuration, before anything is written.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub history: Vec<DiagnosticsRecord>,
    pub outcome: IntegrationOutcome,
    pub report: RegularityReport,
}

/// Integrates `config`, recording diagnostics at every observation and handing
/// states due for a snapshot to `on_snapshot`.
pub fn simulate(
    config: &RunConfig,
    mut on_snapshot: impl FnMut(&MhdAlphaState) -> Result<()>,
) -> Result<Simulation> {
    config.validate()?;
    let params = config.params;
    let state0 = initial_state(config)?;
    let mut history = Vec::new();
    let mut failure: Option<Error> = None;
    let mut next_snapshot = config.snapshot_every.map(|_| state0.t);

    let outcome = integrate_with(
        &state0,
        &params,
        &config.integrator,
        &|s| integrands(s, &params),
        |obs| {
            if failure.is_some() {
                return;
            }
            match record(obs.state, &params, obs.integrals) {
                Ok(r) => history.push(r),
                Err(e) => failure = Some(e),
            }
            if let (Some(due), Some(every)) = (next_snapshot, config.snapshot_every) {
                if obs.state.t >= due - 1e-9 * every {
                    if let Err(e) = on_snapshot(obs.state) {
                        failure = Some(e);
                    }
                    let k = ((obs.state.t - state0.t) / every + 1e-9).floor() + 1.0;
                    next_snapshot = Some(state0.t + k * every);
                }
            }
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    if outcome.abort.is_some() && history.last().is_none_or(|r| r.t < outcome.state.t) {
        history.push(record(&outcome.state, &params, &outcome.integrals)?);
    }
    let settings = MonitorSettings {
        ceiling: config.integrator.h3_ceiling,
        ..MonitorSettings::default()
    };
    let report = regularity_monitor(&history, outcome.abort.as_ref(), &settings)?;
    Ok(Simulation {
        history,
        outcome,
        report,
    })
}

/// A finished run and where its artifacts live.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub simulation: Simulation,
    pub wall_time: f64,
}

impl RunOutcome {
    pub fn verdict(&self) -> Verdict {
        self.simulation.report.verdict
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict().exit_code()
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Runs `config` and writes its artifacts under `config.out_dir`.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    let dir = config.out_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write_file(&dir.join("config.txt"), config.to_string())?;
    let simulation = simulate(config, |s| write_snapshot(dir.join(snapshot_name(s.t)), s))?;
    write_file(&dir.join("diagnostics.csv"), diagnostics_csv(&simulation.history)?)?;
    write_file(&dir.join("verdict.txt"), simulation.report.to_string())?;
    Ok(RunOutcome {
        out_dir: dir,
        simulation,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// One row of a sweep.
#[derive(Clone, Debug)]
pub struct SweepEntry {
    pub r1: f64,
    pub r2: f64,
    pub out_dir: PathBuf,
    pub wall_time: f64,
    /// The run's report, or why it failed.
    pub result: std::result::Result<RegularityReport, String>,
}

impl SweepEntry {
    pub fn exit_code(&self) -> i32 {
        match &self.result {
            Ok(r) => r.verdict.exit_code(),
            Err(_) => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub entries: Vec<SweepEntry>,
    /// Values dropped because they repeated an earlier entry.
    pub duplicates: Vec<f64>,
    pub summary_path: PathBuf,
}

impl SweepOutcome {
    /// Worst exit code over the runs; failed runs count as 1.
    pub fn exit_code(&self) -> i32 {
        self.entries.iter().map(SweepEntry::exit_code).max().unwrap_or(0)
    }
}

/// Directory name of the sweep run at `r1`.
pub fn sweep_dir_name(r1: f64) -> String {
    format!("r1_{r1:.6}")
}

/// Configuration of one sweep member: `r2 = 1 - r1 - threshold_offset`.
pub fn sweep_member(base: &RunConfig, r1: f64, threshold_offset: f64) -> Result<RunConfig> {
    if !(r1 > 0.0 && r1 < 1.0) {
        return Err(Error::Domain(format!("sweep values of r1 must lie in (0, 1), got {r1}")));
    }
    let mut cfg = base.clone();
    cfg.params.r1 = r1;
    cfg.params.r2 = 1.0 - r1 - threshold_offset;
    cfg.enforce_critical_line = threshold_offset == 0.0;
    cfg.out_dir = base.out_dir.join(sweep_dir_name(r1));
    cfg.validate()?;
    Ok(cfg)
}

const SUMMARY_HEADER: &str = "r1,r2,verdict,exit_code,t_final,sup_Lam_3_v,sup_Lam_3_b,sup_energy_alpha,\
int_Lam3pr1_v_sq,int_Lam3pr2_b_sq,int_diss,wall_time_s,error";

fn summary_row(e: &SweepEntry) -> String {
    match &e.result {
        Ok(r) => {
            let sup = |n| r.summary(n).map_or(f64::NAN, |s| s.sup);
            let int = |i| r.integral(i).unwrap_or(f64::NAN);
            format!(
                "{:?},{:?},{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.3},",
                e.r1,
                e.r2,
                r.verdict,
                r.verdict.exit_code(),
                r.t_final,
                sup(Norm::Lam3V),
                sup(Norm::Lam3B),
                r.energy_sup,
                int(Integral::Lam3pR1VSq),
                int(Integral::Lam3pR2BSq),
                int(Integral::Dissipation),
                e.wall_time
            )
        }
        Err(msg) => format!(
            "{:?},{:?},FAILED,1,,,,,,,,{:.3},\"{}\"",
            e.r1,
            e.r2,
            e.wall_time,
            msg.replace('"', "'")
        ),
    }
}

/// Runs `base` once per distinct `r1`, concurrently, and writes `sweep_summary.csv`
/// into `base.out_dir`. A failing member is reported in the summary without
/// stopping the others.
pub fn sweep(base: &RunConfig, r1_values: &[f64], threshold_offset: f64) -> Result<SweepOutcome> {
    let mut distinct: Vec<f64> = Vec::new();
    let mut duplicates = Vec::new();
    for &r1 in r1_values {
        if distinct.contains(&r1) {
            duplicates.push(r1);
        } else {
            distinct.push(r1);
        }
    }
    fs::create_dir_all(&base.out_dir).map_err(|e| Error::io(&base.out_dir, e))?;

    let entries: Vec<SweepEntry> = distinct
        .par_iter()
        .map(|&r1| {
            let start = Instant::now();
            let r2 = 1.0 - r1 - threshold_offset;
            let out_dir = base.out_dir.join(sweep_dir_name(r1));
            let result = sweep_member(base, r1, threshold_offset)
                .and_then(|cfg| run(&cfg))
                .map(|o| o.simulation.report)
                .map_err(|e| e.to_string());
            SweepEntry {
                r1,
                r2,
                out_dir,
                wall_time: start.elapsed().as_secs_f64(),
                result,
            }
        })
        .collect();

    let mut text = String::from(SUMMARY_HEADER);
    text.push('\n');
    for e in &entries {
        text.push_str(&summary_row(e));
        text.push('\n');
    }
    let summary_path = base.out_dir.join("sweep_summary.csv");
    write_file(&summary_path, text)?;
    Ok(SweepOutcome {
        entries,
        duplicates,
        summary_path,
    })
}
