//! Periodic grid on the torus `[0, L)^2` and its discrete Fourier transform.
//!
//! Storage is row-major with axis 0 along `x` and axis 1 along `y`:
//! entry `i * n + j` holds the value at `(x_i, y_j)` in physical space, or
//! the coefficient of wavenumber `(kx(i), ky(j))` in spectral space, where
//! indices follow the usual FFT ordering `0, 1, .., n/2 - 1, -n/2, .., -1`.
//!
//! The forward transform divides by `n^2`, so spectral coefficients are the
//! true Fourier amplitudes `f(x) = sum_k c_k exp(i k.x)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

#[derive(Clone)]
pub struct SpectralGrid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    length: f64,
    cutoff: usize,
    kx: Vec<f64>,
    ky: Vec<f64>,
    k2: Vec<f64>,
    mask: Vec<bool>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .field("cutoff", &self.inner.cutoff)
            .finish()
    }
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n && self.inner.length == other.inner.length)
    }
}

/// Integer wavenumber stored at FFT index `m` of an `n`-point axis.
#[inline]
pub fn wavenumber(m: usize, n: usize) -> i64 {
    if m < n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// FFT index holding integer wavenumber `k` on an `n`-point axis.
#[inline]
pub fn index_of(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

impl SpectralGrid {
    /// Grid on `[0, 2pi)^2`.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_length(n, 2.0 * PI)
    }

    pub fn with_length(n: usize, length: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::Domain(format!(
                "grid size must be even and >= 8, got {n}"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!(
                "domain length must be positive, got {length}"
            )));
        }
        // Largest retained |k| per axis. Strict 3|k| < n keeps quadratic
        // products alias-free on every retained mode.
        let cutoff = (n - 1) / 3;
        let scale = 2.0 * PI / length;
        let mut kx = Vec::with_capacity(n * n);
        let mut ky = Vec::with_capacity(n * n);
        let mut k2 = Vec::with_capacity(n * n);
        let mut mask = Vec::with_capacity(n * n);
        for i in 0..n {
            let ix = wavenumber(i, n);
            for j in 0..n {
                let iy = wavenumber(j, n);
                let (px, py) = (scale * ix as f64, scale * iy as f64);
                kx.push(px);
                ky.push(py);
                k2.push(px * px + py * py);
                mask.push(ix.unsigned_abs() as usize <= cutoff && iy.unsigned_abs() as usize <= cutoff);
            }
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(SpectralGrid {
            inner: Arc::new(GridInner {
                n,
                length,
                cutoff,
                kx,
                ky,
                k2,
                mask,
                forward,
                inverse,
            }),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.inner.n
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.inner.length
    }

    /// Number of modes `n * n`.
    #[inline]
    pub fn len(&self) -> usize {
        self.inner.n * self.inner.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `L / n`.
    pub fn dx(&self) -> f64 {
        self.inner.length / self.inner.n as f64
    }

    /// Largest integer wavenumber per axis kept by the dealiasing mask.
    pub fn cutoff(&self) -> usize {
        self.inner.cutoff
    }

    /// Physical x-wavenumbers `2pi/L * kx`, one per mode.
    #[inline]
    pub fn kx(&self) -> &[f64] {
        &self.inner.kx
    }

    #[inline]
    pub fn ky(&self) -> &[f64] {
        &self.inner.ky
    }

    /// Squared physical wavenumber magnitude per mode.
    #[inline]
    pub fn k2(&self) -> &[f64] {
        &self.inner.k2
    }

    #[inline]
    pub fn mask(&self) -> &[bool] {
        &self.inner.mask
    }

    /// Integer wavenumber pair of flat index `idx`.
    pub fn mode_of(&self, idx: usize) -> (i64, i64) {
        let n = self.inner.n;
        (wavenumber(idx / n, n), wavenumber(idx % n, n))
    }

    /// Flat index of integer wavenumber pair `(kx, ky)`.
    pub fn index(&self, kx: i64, ky: i64) -> usize {
        let n = self.inner.n;
        index_of(kx, n) * n + index_of(ky, n)
    }

    /// Flat index of the mode `-k`.
    #[inline]
    pub fn conj_index(&self, idx: usize) -> usize {
        let n = self.inner.n;
        let (i, j) = (idx / n, idx % n);
        ((n - i) % n) * n + (n - j) % n
    }

    /// Physical coordinate of grid point `i` along either axis.
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn same_as(&self, other: &SpectralGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.n(),
                left_len: self.length(),
                right: other.n(),
                right_len: other.length(),
            })
        }
    }

    /// In-place unnormalized 2D transform.
    fn fft2(&self, data: &mut [Complex64], forward: bool) {
        let n = self.inner.n;
        debug_assert_eq!(data.len(), n * n);
        let plan = if forward {
            &self.inner.forward
        } else {
            &self.inner.inverse
        };
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, n);
        plan.process_with_scratch(data, &mut scratch);
        transpose(data, n);
    }

    /// Spectral coefficients of a complex physical array, normalized by `n^2`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.fft2(data, true);
        let norm = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|c| *c *= norm);
    }

    /// Physical values from spectral coefficients.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.fft2(data, false);
    }

    /// Two Hermitian spectra to two real physical arrays with one complex transform.
    pub fn to_physical_pair(&self, f: &[Complex64], g: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        let i = Complex64::new(0.0, 1.0);
        let mut z: Vec<Complex64> = f.iter().zip(g).map(|(a, b)| a + i * b).collect();
        self.inverse(&mut z);
        z.into_iter().map(|c| (c.re, c.im)).unzip()
    }

    /// Two real physical arrays to their Hermitian spectra with one complex transform.
    pub fn from_physical_pair(&self, p: &[f64], q: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut z: Vec<Complex64> = p
            .iter()
            .zip(q)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        self.forward(&mut z);
        let half = 0.5;
        let mut fp = vec![Complex64::new(0.0, 0.0); z.len()];
        let mut fq = vec![Complex64::new(0.0, 0.0); z.len()];
        for idx in 0..z.len() {
            let zc = z[self.conj_index(idx)].conj();
            fp[idx] = (z[idx] + zc) * half;
            let d = (z[idx] - zc) * half;
            // d / i
            fq[idx] = Complex64::new(d.im, -d.re);
        }
        (fp, fq)
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}
