//! Runs a random H^3-normalised state and prints the regularity report:
//! sup, final value and time integral of every monitored norm.

use mhda::config::parse_config;
use mhda::runner::simulate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(
        "n = 64\nic = random\nseed = 3\nk_max = 8\nr1 = 0.3\nenforce_critical_line = true\nt_end = 3\n",
    )?;
    let sim = simulate(&cfg, |_| Ok(()))?;
    print!("{}", sim.report);
    std::process::exit(sim.report.verdict.exit_code());
}
