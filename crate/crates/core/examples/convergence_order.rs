//! Empirical order of the integrating-factor schemes under step halving.

use mhda::grid::SpectralGrid;
use mhda::initial::orszag_tang;
use mhda::integrate::{integrate, IntegratorConfig, Scheme};
use mhda::model::{MhdAlphaState, PhysicalParams};

fn solve(s0: &MhdAlphaState, p: &PhysicalParams, scheme: Scheme, dt: f64) -> MhdAlphaState {
    let cfg = IntegratorConfig {
        scheme,
        t_end: 0.5,
        fixed_dt: Some(dt),
        observe_every: 0.5,
        ..IntegratorConfig::default()
    };
    integrate(s0, p, &cfg, |_| {}).expect("smooth run").state
}

fn main() -> mhda::error::Result<()> {
    let grid = SpectralGrid::new(32)?;
    let params = PhysicalParams::default();
    let s0 = orszag_tang(&grid, 1.0, 1.0);
    let reference = solve(&s0, &params, Scheme::Ifrk4, 0.5 / 1024.0);

    for scheme in [Scheme::Ifrk3, Scheme::Ifrk4] {
        println!("{scheme} (nominal order {})", scheme.order());
        let mut prev: Option<f64> = None;
        for m in [8.0, 16.0, 32.0, 64.0] {
            let s = solve(&s0, &params, scheme, 0.5 / m);
            let err = s.w.coeff_distance(&reference.w) + s.a.coeff_distance(&reference.a);
            match prev {
                Some(p) => println!("  dt = 0.5/{m:<3} error {err:.3e}  order {:.3}", (p / err).log2()),
                None => println!("  dt = 0.5/{m:<3} error {err:.3e}"),
            }
            prev = Some(err);
        }
    }
    Ok(())
}
