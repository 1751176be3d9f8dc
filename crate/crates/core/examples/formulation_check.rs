//! The vorticity/potential right-hand side against the primitive
//! velocity/magnetic one, on random states across exponents and filter widths.

use mhda::grid::SpectralGrid;
use mhda::initial::{random_band_limited, RandomSpec};
use mhda::model::{cross_check_formulations, PhysicalParams};

fn main() -> mhda::error::Result<()> {
    let grid = SpectralGrid::new(32)?;
    for seed in 0..5 {
        let spec = RandomSpec { seed, k_max: 10, ..RandomSpec::default() };
        let state = random_band_limited(&grid, &spec)?;
        let mut worst: f64 = 0.0;
        for r1 in [0.25, 0.5, 0.75] {
            for alpha in [0.5, 1.0, 2.0] {
                let p = PhysicalParams::new(1.0, 1.0, alpha, r1, 1.0 - r1)?;
                worst = worst.max(cross_check_formulations(&state, &p)?);
            }
        }
        println!("seed {seed}: max relative discrepancy {worst:.2e}");
    }
    Ok(())
}
