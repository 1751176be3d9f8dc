//! Binary state snapshots.
//!
//! Layout, all little-endian:
//!
//! | bytes   | content                         |
//! |---------|---------------------------------|
//! | 0..4    | magic `MHDA`                    |
//! | 4..8    | format version (u32)            |
//! | 8..12   | grid size `n` (u32)             |
//! | 12..20  | simulation time (f64)           |
//! | 20..28  | domain length (f64)             |
//! | 28..32  | zero                            |
//! | 32..    | `w` then `a`: `n*n` pairs of f64 (re, im) each |
//!
//! Coefficients follow the grid storage order: row-major over `(kx, ky)`,
//! each axis in FFT order `0, 1, .., n/2 - 1, -n/2, .., -1`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::SpectralGrid;
use crate::model::MhdAlphaState;

pub const MAGIC: &[u8; 4] = b"MHDA";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 32;

/// File name used for the snapshot at time `t`.
pub fn snapshot_name(t: f64) -> String {
    format!("state_{t:.6}.bin")
}

pub fn encode(state: &MhdAlphaState) -> Vec<u8> {
    let g = state.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 32 * g.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    out.extend_from_slice(&state.t.to_le_bytes());
    out.extend_from_slice(&g.length().to_le_bytes());
    out.extend_from_slice(&[0u8; 4]);
    for f in [&state.w, &state.a] {
        for c in f.coeffs() {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    out
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8-byte slice"))
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4-byte slice"))
}

/// Decodes a snapshot without checking state invariants (see [`check`]).
pub fn decode(bytes: &[u8]) -> Result<MhdAlphaState> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Snapshot(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Snapshot("bad magic, not a snapshot file".into()));
    }
    let version = u32_at(bytes, 4);
    if version != VERSION {
        return Err(Error::Snapshot(format!(
            "unsupported version {version}, this reader handles {VERSION}"
        )));
    }
    let n = u32_at(bytes, 8) as usize;
    let t = f64_at(bytes, 12);
    let length = f64_at(bytes, 20);
    let grid = SpectralGrid::with_length(n, length)
        .map_err(|e| Error::Snapshot(format!("invalid grid in header: {e}")))?;
    let expected = HEADER_LEN + 32 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "expected {expected} bytes for n = {n}, found {}",
            bytes.len()
        )));
    }
    let read_field = |offset: usize| {
        let coeffs = (0..grid.len())
            .map(|i| {
                let at = offset + 16 * i;
                Complex64::new(f64_at(bytes, at), f64_at(bytes, at + 8))
            })
            .collect();
        ScalarField::from_coeffs(&grid, coeffs)
    };
    Ok(MhdAlphaState {
        t,
        w: read_field(HEADER_LEN),
        a: read_field(HEADER_LEN + 16 * grid.len()),
    })
}

pub fn write_snapshot(path: impl AsRef<Path>, state: &MhdAlphaState) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode(state)).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<MhdAlphaState> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

/// What [`check`] found in a snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotReport {
    pub n: usize,
    pub length: f64,
    pub t: f64,
    pub finite: bool,
    pub mean_w: f64,
    pub mean_a: f64,
    pub hermitian_defect: f64,
    /// Largest coefficient outside the dealiasing band.
    pub out_of_band: f64,
    /// `None` when every invariant holds.
    pub violation: Option<String>,
}

impl SnapshotReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

impl std::fmt::Display for SnapshotReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n = {}, L = {}, t = {}", self.n, self.length, self.t)?;
        writeln!(f, "finite: {}", self.finite)?;
        writeln!(f, "|mean w| = {:e}, |mean a| = {:e}", self.mean_w, self.mean_a)?;
        writeln!(f, "hermitian defect = {:e}", self.hermitian_defect)?;
        writeln!(f, "largest out-of-band coefficient = {:e}", self.out_of_band)?;
        match &self.violation {
            None => write!(f, "OK"),
            Some(v) => write!(f, "INVALID: {v}"),
        }
    }
}

/// Re-verifies the state invariants of a decoded snapshot.
pub fn check(state: &MhdAlphaState) -> SnapshotReport {
    let g = state.grid();
    let out_of_band = [&state.w, &state.a]
        .iter()
        .flat_map(|f| {
            f.coeffs()
                .iter()
                .zip(g.mask())
                .filter(|(_, &keep)| !keep)
                .map(|(c, _)| c.norm())
        })
        .fold(0.0, f64::max);
    let finite = state.is_finite();
    let violation = if !finite {
        Some("non-finite values".to_string())
    } else {
        state.validate().err().map(|e| e.to_string())
    };
    SnapshotReport {
        n: g.n(),
        length: g.length(),
        t: state.t,
        finite,
        mean_w: state.w.mean().norm(),
        mean_a: state.a.mean().norm(),
        hermitian_defect: state.w.hermitian_defect().max(state.a.hermitian_defect()),
        out_of_band,
        violation,
    }
}
