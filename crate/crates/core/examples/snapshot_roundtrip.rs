//! Writes a state snapshot, reads it back and re-verifies its invariants.

use mhda::grid::SpectralGrid;
use mhda::initial::orszag_tang;
use mhda::snapshot::{check, read_snapshot, snapshot_name, write_snapshot};

fn main() -> mhda::error::Result<()> {
    let grid = SpectralGrid::new(32)?;
    let mut state = orszag_tang(&grid, 1.0, 1.0);
    state.t = 0.25;

    let dir = std::env::var_os("MHDA_OUT_DIR").map_or_else(std::env::temp_dir, Into::into);
    std::fs::create_dir_all(&dir).map_err(|e| mhda::error::Error::Io { path: dir.clone(), source: e })?;
    let path = dir.join(snapshot_name(state.t));
    write_snapshot(&path, &state)?;

    let back = read_snapshot(&path)?;
    println!("wrote {}", path.display());
    println!("bitwise equal after reload: {}", back == state);
    println!("{}", check(&back));
    Ok(())
}
