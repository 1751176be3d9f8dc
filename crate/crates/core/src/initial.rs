//! Initial states: the Orszag-Tang vortex, single Fourier modes and seeded random fields.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::diagnostics::sobolev_norm;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::SpectralGrid;
use crate::model::MhdAlphaState;
use crate::spectral::{b_from_potential, velocity_from_vorticity};

/// `w = -2 A_w (cos x + cos y)`, `a = A_a (cos 2x / 2 + cos y)`, in lowest-mode units of the domain.
pub fn orszag_tang(grid: &SpectralGrid, amplitude_w: f64, amplitude_a: f64) -> MhdAlphaState {
    let mut w = ScalarField::cosine(grid, 1, 0, -2.0 * amplitude_w);
    w.set_mode(0, 1, Complex64::new(-amplitude_w, 0.0));
    let mut a = ScalarField::cosine(grid, 2, 0, 0.5 * amplitude_a);
    a.set_mode(0, 1, Complex64::new(0.5 * amplitude_a, 0.0));
    MhdAlphaState { t: 0.0, w, a }
}

/// `w = A_w cos(k.x)`, `a = A_a cos(k.x)`.
///
/// Every nonlinear term vanishes on this state, so it decays at the linear rates.
pub fn single_mode(grid: &SpectralGrid, kx: i64, ky: i64, amplitude_w: f64, amplitude_a: f64) -> Result<MhdAlphaState> {
    if kx == 0 && ky == 0 {
        return Err(Error::Domain("single mode needs a nonzero wavevector".into()));
    }
    let c = grid.cutoff() as i64;
    if kx.abs() > c || ky.abs() > c {
        return Err(Error::Domain(format!(
            "mode ({kx}, {ky}) lies outside the dealiased band |k_i| <= {c}"
        )));
    }
    Ok(MhdAlphaState {
        t: 0.0,
        w: ScalarField::cosine(grid, kx, ky, amplitude_w),
        a: ScalarField::cosine(grid, kx, ky, amplitude_a),
    })
}

/// Parameters of [`random_band_limited`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub seed: u64,
    pub k_min: u32,
    pub k_max: u32,
    pub spectrum_slope: f64,
    /// Target `||Lambda^3 v||`.
    pub target_h3_v: f64,
    /// Target `||Lambda^3 b||`.
    pub target_h3_b: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            seed: 0,
            k_min: 1,
            k_max: 8,
            spectrum_slope: -2.0,
            target_h3_v: 5.0,
            target_h3_b: 5.0,
        }
    }
}

/// Standard normals from a ChaCha20 stream, by Box-Muller on 53-bit uniforms.
struct Gaussian {
    rng: ChaCha20Rng,
}

impl Gaussian {
    fn new(seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(stream);
        Gaussian { rng }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// One complex sample with independent standard normal parts.
    fn complex(&mut self) -> Complex64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * th.cos(), r * th.sin())
    }
}

/// Half-plane modes of the annulus `k_min <= |k| <= k_max`, in a fixed traversal order.
fn annulus(k_min: u32, k_max: u32) -> Vec<(i64, i64)> {
    let (lo, hi) = ((k_min as i64).pow(2), (k_max as i64).pow(2));
    let k = k_max as i64;
    let mut modes = Vec::new();
    for ky in 0..=k {
        for kx in -k..=k {
            if ky == 0 && kx <= 0 {
                continue;
            }
            let q = kx * kx + ky * ky;
            if q >= lo && q <= hi {
                modes.push((kx, ky));
            }
        }
    }
    modes
}

fn random_field(grid: &SpectralGrid, modes: &[(i64, i64)], slope: f64, seed: u64, stream: u64) -> ScalarField {
    let mut rng = Gaussian::new(seed, stream);
    let mut f = ScalarField::zeros(grid);
    for &(kx, ky) in modes {
        let k = ((kx * kx + ky * ky) as f64).sqrt();
        f.set_mode(kx, ky, rng.complex() * k.powf(slope));
    }
    f
}

fn rescale(f: ScalarField, current: f64, target: f64) -> ScalarField {
    if current == 0.0 {
        f
    } else {
        f.scale(target / current)
    }
}

/// Seeded divergence-free state with Gaussian spectrum `~ |k|^slope` on an annulus,
/// rescaled so `||Lambda^3 v||` and `||Lambda^3 b||` hit their targets.
pub fn random_band_limited(grid: &SpectralGrid, spec: &RandomSpec) -> Result<MhdAlphaState> {
    let cutoff = grid.cutoff() as u32;
    if spec.k_min < 1 || spec.k_min > spec.k_max || spec.k_max > cutoff {
        return Err(Error::Domain(format!(
            "need 1 <= k_min <= k_max <= {cutoff}, got k_min = {}, k_max = {}",
            spec.k_min, spec.k_max
        )));
    }
    if !spec.spectrum_slope.is_finite() {
        return Err(Error::Domain("spectrum slope must be finite".into()));
    }
    for (name, v) in [("target_h3_v", spec.target_h3_v), ("target_h3_b", spec.target_h3_b)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be finite and >= 0, got {v}")));
        }
    }
    let modes = annulus(spec.k_min, spec.k_max);
    if modes.is_empty() {
        return Err(Error::Domain(format!(
            "annulus {} <= |k| <= {} holds no lattice modes",
            spec.k_min, spec.k_max
        )));
    }
    let w = random_field(grid, &modes, spec.spectrum_slope, spec.seed, 0);
    let a = random_field(grid, &modes, spec.spectrum_slope, spec.seed, 1);
    let h3_v = sobolev_norm(&velocity_from_vorticity(&w)?, 3.0)?;
    let h3_b = sobolev_norm(&b_from_potential(&a), 3.0)?;
    Ok(MhdAlphaState {
        t: 0.0,
        w: rescale(w, h3_v, spec.target_h3_v),
        a: rescale(a, h3_b, spec.target_h3_b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dealias;

    #[test]
    fn orszag_tang_fields() {
        let g = SpectralGrid::new(32).unwrap();
        let s = orszag_tang(&g, 1.0, 1.0);
        s.validate().unwrap();
        let w = s.w.to_physical();
        let a = s.a.to_physical();
        let idx = |i: usize, j: usize| i * 32 + j;
        let (i, j) = (3usize, 7usize);
        let (x0, y0) = (g.coord(i), g.coord(j));
        assert!((w[idx(i, j)] + 2.0 * (x0.cos() + y0.cos())).abs() < 1e-14);
        assert!((a[idx(i, j)] - ((2.0 * x0).cos() / 2.0 + y0.cos())).abs() < 1e-14);
        let l2 = crate::diagnostics::sobolev_norm(&s.w, 0.0).unwrap();
        assert!((l2 - 12.566370614359172).abs() < 1e-13);
        let z = orszag_tang(&g, 0.0, 0.0);
        assert_eq!(z.w.max_abs_coeff() + z.a.max_abs_coeff(), 0.0);
    }

    #[test]
    fn random_is_deterministic_and_targeted() {
        let g = SpectralGrid::new(32).unwrap();
        let spec = RandomSpec {
            seed: 42,
            k_min: 2,
            k_max: 6,
            spectrum_slope: -1.5,
            target_h3_v: 5.0,
            target_h3_b: 3.0,
        };
        let s1 = random_band_limited(&g, &spec).unwrap();
        let s2 = random_band_limited(&g, &spec).unwrap();
        assert_eq!(s1.w.coeffs(), s2.w.coeffs());
        assert_eq!(s1.a.coeffs(), s2.a.coeffs());
        s1.validate().unwrap();
        let v = sobolev_norm(&velocity_from_vorticity(&s1.w).unwrap(), 3.0).unwrap();
        let b = sobolev_norm(&b_from_potential(&s1.a), 3.0).unwrap();
        assert!((v - 5.0).abs() < 1e-12 * 5.0);
        assert!((b - 3.0).abs() < 1e-12 * 3.0);
        assert_eq!(dealias(&s1.w).coeffs(), s1.w.coeffs());
        let other = random_band_limited(&g, &RandomSpec { seed: 43, ..spec }).unwrap();
        assert_ne!(other.w.coeffs(), s1.w.coeffs());
        assert_ne!(s1.w.coeffs(), s1.a.coeffs());
    }

    #[test]
    fn random_rejects_bad_band() {
        let g = SpectralGrid::new(32).unwrap();
        let base = RandomSpec::default();
        assert!(random_band_limited(&g, &RandomSpec { k_min: 0, ..base }).is_err());
        assert!(random_band_limited(&g, &RandomSpec { k_min: 5, k_max: 4, ..base }).is_err());
        assert!(random_band_limited(&g, &RandomSpec { k_max: 11, ..base }).is_err());
        assert!(random_band_limited(&g, &RandomSpec { k_max: 10, ..base }).is_ok());
    }

    #[test]
    fn annulus_counts() {
        // half of the nonzero lattice points with |k| <= 1 and |k| <= 2
        assert_eq!(annulus(1, 1).len(), 2);
        assert_eq!(annulus(1, 2).len(), 6);
        assert_eq!(annulus(2, 2).len(), 2);
    }
}
