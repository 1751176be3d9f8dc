//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here works from physical samples with direct O(n^4) sums, so it
//! shares no code with the FFT path under test.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }

    pub fn samples(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.uniform(-1.0, 1.0)).collect()
    }
}

/// Signed wavenumber of FFT index `m`, with `-n/2` at the Nyquist slot.
pub fn signed(m: usize, n: usize) -> i64 {
    if m < n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// `c_k = n^-2 sum_x f(x) e^{-i k.x}`, row-major over `(kx, ky)`.
pub fn direct_dft(values: &[f64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for p in 0..n {
        for q in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let phase = -2.0 * PI * ((p * i + q * j) % n) as f64 / n as f64;
                    acc += Complex64::from_polar(values[i * n + j], phase);
                }
            }
            out[p * n + q] = acc / (n * n) as f64;
        }
    }
    out
}

/// `f(x) = sum_k c_k e^{i k.x}`.
pub fn direct_idft(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for p in 0..n {
                for q in 0..n {
                    let phase = 2.0 * PI * ((p * i + q * j) % n) as f64 / n as f64;
                    acc += coeffs[p * n + q] * Complex64::from_polar(1.0, phase);
                }
            }
            out[i * n + j] = acc;
        }
    }
    out
}

/// Physical wavevector of slot `(p, q)` on a domain of length `length`.
pub fn wavevector(p: usize, q: usize, n: usize, length: f64) -> (f64, f64) {
    let s = 2.0 * PI / length;
    (s * signed(p, n) as f64, s * signed(q, n) as f64)
}

pub fn frac_lap_oracle(values: &[f64], n: usize, length: f64, s: f64) -> Vec<Complex64> {
    let mut c = direct_dft(values, n);
    for p in 0..n {
        for q in 0..n {
            let (kx, ky) = wavevector(p, q, n, length);
            let k = (kx * kx + ky * ky).sqrt();
            let sym = if s == 0.0 {
                1.0
            } else if k == 0.0 {
                0.0
            } else {
                k.powf(s)
            };
            c[p * n + q] *= sym;
        }
    }
    c
}

/// Modes kept by a product that must stay alias-free: `3 |k_i| < n` on both axes.
pub fn retained(p: usize, q: usize, n: usize) -> bool {
    3 * signed(p, n).unsigned_abs() < n as u64 && 3 * signed(q, n).unsigned_abs() < n as u64
}

/// Truncated convolution `sum_{p + q = k} f_p g_q` over retained modes.
pub fn product_oracle(f: &[f64], g: &[f64], n: usize) -> Vec<Complex64> {
    let fc = direct_dft(f, n);
    let gc = direct_dft(g, n);
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..n * n {
        let (pa, qa) = (a / n, a % n);
        if !retained(pa, qa, n) {
            continue;
        }
        for b in 0..n * n {
            let (pb, qb) = (b / n, b % n);
            if !retained(pb, qb, n) {
                continue;
            }
            let kx = signed(pa, n) + signed(pb, n);
            let ky = signed(qa, n) + signed(qb, n);
            let (px, py) = (kx.rem_euclid(n as i64) as usize, ky.rem_euclid(n as i64) as usize);
            if signed(px, n) != kx || signed(py, n) != ky || !retained(px, py, n) {
                continue;
            }
            out[px * n + py] += fc[a] * gc[b];
        }
    }
    out
}

/// `f - k (k.f) / |k|^2` per mode; the mean passes through.
pub fn leray_oracle(fx: &[f64], fy: &[f64], n: usize, length: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut cx = direct_dft(fx, n);
    let mut cy = direct_dft(fy, n);
    for p in 0..n {
        for q in 0..n {
            let (kx, ky) = wavevector(p, q, n, length);
            let k2 = kx * kx + ky * ky;
            if k2 == 0.0 {
                continue;
            }
            let idx = p * n + q;
            let dot = (cx[idx] * kx + cy[idx] * ky) / k2;
            cx[idx] -= dot * kx;
            cy[idx] -= dot * ky;
        }
    }
    (cx, cy)
}

/// `max |a - b| / max |b|`.
pub fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

/// Real field with random modes on `|k_x|, |k_y| <= band`, zero mean.
pub fn band_limited(grid: &mhda::grid::SpectralGrid, seed: u64, band: i64) -> mhda::field::ScalarField {
    let n = grid.n();
    let f = mhda::field::ScalarField::from_physical(grid, &Rng::new(seed).samples(n * n));
    let mut coeffs = f.into_coeffs();
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let (kx, ky) = grid.mode_of(idx);
        if kx.abs() > band || ky.abs() > band || (kx == 0 && ky == 0) || kx == -(n as i64) / 2 || ky == -(n as i64) / 2 {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    mhda::field::ScalarField::from_coeffs(grid, coeffs)
}
