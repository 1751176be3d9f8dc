//! Orszag-Tang vortex at 64^2 with the default parameters, printing the
//! energy budget at each observation.
//!
//! ```text
//! cargo run --release --example orszag_tang
//! ```

use mhda::diagnostics::{energy_balance_residual, integrands, record, Norm};
use mhda::grid::SpectralGrid;
use mhda::initial::orszag_tang;
use mhda::integrate::{integrate_with, IntegratorConfig};
use mhda::model::PhysicalParams;

fn main() -> mhda::error::Result<()> {
    let grid = SpectralGrid::new(64)?;
    let params = PhysicalParams::default();
    let state = orszag_tang(&grid, 1.0, 1.0);
    let cfg = IntegratorConfig {
        t_end: 1.0,
        fixed_dt: Some(1e-3),
        observe_every: 0.1,
        ..IntegratorConfig::default()
    };

    let mut history = Vec::new();
    integrate_with(&state, &params, &cfg, &|s| integrands(s, &params), |obs| {
        history.push(record(obs.state, &params, obs.integrals).expect("valid state"));
    })?;

    println!("{:>6} {:>14} {:>14} {:>12} {:>12}", "t", "energy", "dissipation", "residual", "|L^3 v|");
    for (i, r) in history.iter().enumerate() {
        let res = if i == 0 { 0.0 } else { energy_balance_residual(&history[i - 1], r)? };
        println!(
            "{:>6.2} {:>14.8} {:>14.8} {:>12.2e} {:>12.6}",
            r.t,
            r.energy_alpha,
            r.dissipation(),
            res,
            r.norm(Norm::Lam3V)
        );
    }
    Ok(())
}
