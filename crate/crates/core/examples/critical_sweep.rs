//! Sweep of the dissipation exponent along `r1 + r2 = 1`, with an optional
//! offset below the line. Small grid so it finishes in seconds.
//!
//! ```text
//! cargo run --release --example critical_sweep -- 0.1
//! ```
//! The optional argument is the threshold offset (`r2 = 1 - r1 - offset`).

use mhda::config::parse_config;
use mhda::runner::{apply_env_out_dir, sweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let offset: f64 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(0.0);
    let mut base = parse_config(
        "n = 32\nic = random\nseed = 7\nk_max = 6\ntarget_h3_v = 5\ntarget_h3_b = 5\nt_end = 2\n",
    )?;
    base.out_dir = std::env::temp_dir().join("mhda_critical_sweep");
    apply_env_out_dir(&mut base);

    let out = sweep(&base, &[0.1, 0.25, 0.5, 0.75, 0.9], offset)?;
    for e in &out.entries {
        match &e.result {
            Ok(r) => println!("r1 = {:.2}  r2 = {:.2}  {}", e.r1, e.r2, r.verdict),
            Err(msg) => println!("r1 = {:.2}  r2 = {:.2}  FAILED {msg}", e.r1, e.r2),
        }
    }
    println!("summary written to {}", out.summary_path.display());
    Ok(())
}
