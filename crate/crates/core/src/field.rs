//! Real periodic fields stored by their Fourier coefficients.

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::SpectralGrid;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: SpectralGrid,
    coeffs: Vec<Complex64>,
}

impl PartialEq for ScalarField {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.coeffs == other.coeffs
    }
}

impl ScalarField {
    pub fn zeros(grid: &SpectralGrid) -> Self {
        ScalarField {
            grid: grid.clone(),
            coeffs: vec![ZERO; grid.len()],
        }
    }

    /// Wraps raw coefficients. Length must equal `n * n`.
    pub fn from_coeffs(grid: &SpectralGrid, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), grid.len(), "coefficient count does not match grid");
        ScalarField {
            grid: grid.clone(),
            coeffs,
        }
    }

    /// Transforms physical samples `values[i * n + j] = f(x_i, y_j)`.
    pub fn from_physical(grid: &SpectralGrid, values: &[f64]) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count does not match grid");
        let (coeffs, _) = grid.from_physical_pair(values, &vec![0.0; values.len()]);
        ScalarField {
            grid: grid.clone(),
            coeffs,
        }
    }

    /// Samples `f(x, y)` on the grid points and transforms.
    pub fn from_fn(grid: &SpectralGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..n {
            for j in 0..n {
                values.push(f(grid.coord(i), grid.coord(j)));
            }
        }
        Self::from_physical(grid, &values)
    }

    /// Exactly `amplitude * cos(kx x + ky y)` (integer wavenumbers).
    pub fn cosine(grid: &SpectralGrid, kx: i64, ky: i64, amplitude: f64) -> Self {
        let mut f = Self::zeros(grid);
        if kx == 0 && ky == 0 {
            f.coeffs[0] = Complex64::new(amplitude, 0.0);
        } else {
            f.set_mode(kx, ky, Complex64::new(0.5 * amplitude, 0.0));
        }
        f
    }

    /// Exactly `amplitude * sin(kx x + ky y)` (integer wavenumbers).
    pub fn sine(grid: &SpectralGrid, kx: i64, ky: i64, amplitude: f64) -> Self {
        let mut f = Self::zeros(grid);
        if kx != 0 || ky != 0 {
            f.set_mode(kx, ky, Complex64::new(0.0, -0.5 * amplitude));
        }
        f
    }

    /// Physical samples in the same layout as [`from_physical`](Self::from_physical).
    pub fn to_physical(&self) -> Vec<f64> {
        let mut z = self.coeffs.clone();
        self.grid.inverse(&mut z);
        z.into_iter().map(|c| c.re).collect()
    }

    #[inline]
    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn mode(&self, kx: i64, ky: i64) -> Complex64 {
        self.coeffs[self.grid.index(kx, ky)]
    }

    /// Sets the coefficient of `k` and of `-k` (as its conjugate).
    pub fn set_mode(&mut self, kx: i64, ky: i64, value: Complex64) {
        let idx = self.grid.index(kx, ky);
        let cidx = self.grid.conj_index(idx);
        self.coeffs[idx] = value;
        self.coeffs[cidx] = value.conj();
        if idx == cidx {
            self.coeffs[idx] = Complex64::new(value.re, 0.0);
        }
    }

    /// Mean value over the torus (the `k = 0` coefficient).
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `max_k |c(-k) - conj(c(k))|`.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|idx| (self.coeffs[self.grid.conj_index(idx)] - self.coeffs[idx].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Replaces each coefficient by the Hermitian average `(c(k) + conj(c(-k))) / 2`.
    pub fn symmetrize(&mut self) {
        let g = self.grid.clone();
        let src = self.coeffs.clone();
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            *c = (src[idx] + src[g.conj_index(idx)].conj()) * 0.5;
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficient-wise multiplication by a real symbol.
    pub fn map_symbol(&self, symbol: impl Fn(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| c * symbol(idx))
            .collect();
        ScalarField {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Coefficient-wise multiplication by a complex symbol.
    pub fn map_complex_symbol(&self, symbol: impl Fn(usize) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| c * symbol(idx))
            .collect();
        ScalarField {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_symbol(|_| s)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &ScalarField) -> Result<Self> {
        self.grid.same_as(&other.grid)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b * s)
            .collect();
        Ok(ScalarField {
            grid: self.grid.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        self.axpy(1.0, other)
    }

    /// Coefficient L2 distance `sqrt(sum |a - b|^2)`.
    pub fn coeff_distance(&self, other: &ScalarField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// `sum_k weight(k) |c_k|^2`.
    pub fn weighted_energy(&self, weight: impl Fn(usize) -> f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(idx, c)| weight(idx) * c.norm_sqr())
            .sum()
    }

    /// Inner product `int f g dx` over the torus for real `f`, `g`.
    pub fn inner(&self, other: &ScalarField) -> f64 {
        let area = self.grid.length() * self.grid.length();
        area * self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a * b.conj()).re)
            .sum::<f64>()
    }
}

/// Two-component real vector field.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub x: ScalarField,
    pub y: ScalarField,
}

impl VectorField {
    pub fn new(x: ScalarField, y: ScalarField) -> Result<Self> {
        x.grid().same_as(y.grid())?;
        Ok(VectorField { x, y })
    }

    pub fn zeros(grid: &SpectralGrid) -> Self {
        VectorField {
            x: ScalarField::zeros(grid),
            y: ScalarField::zeros(grid),
        }
    }

    pub fn from_fn(
        grid: &SpectralGrid,
        fx: impl Fn(f64, f64) -> f64,
        fy: impl Fn(f64, f64) -> f64,
    ) -> Self {
        VectorField {
            x: ScalarField::from_fn(grid, fx),
            y: ScalarField::from_fn(grid, fy),
        }
    }

    #[inline]
    pub fn grid(&self) -> &SpectralGrid {
        self.x.grid()
    }

    pub fn components(&self) -> [&ScalarField; 2] {
        [&self.x, &self.y]
    }

    /// Both components in physical space with a single complex transform.
    pub fn to_physical(&self) -> (Vec<f64>, Vec<f64>) {
        self.grid().to_physical_pair(self.x.coeffs(), self.y.coeffs())
    }

    pub fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        VectorField {
            x: f(&self.x),
            y: f(&self.y),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn axpy(&self, s: f64, other: &VectorField) -> Result<Self> {
        Ok(VectorField {
            x: self.x.axpy(s, &other.x)?,
            y: self.y.axpy(s, &other.y)?,
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.x.hermitian_defect().max(self.y.hermitian_defect())
    }

    /// `max_k |kx fx(k) + ky fy(k)|`.
    pub fn divergence_defect(&self) -> f64 {
        let g = self.grid();
        (0..g.len())
            .map(|idx| (self.x.coeffs()[idx] * g.kx()[idx] + self.y.coeffs()[idx] * g.ky()[idx]).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.x.max_abs_coeff().max(self.y.max_abs_coeff())
    }

    pub fn coeff_distance(&self, other: &VectorField) -> f64 {
        self.x
            .coeff_distance(&other.x)
            .hypot(self.y.coeff_distance(&other.y))
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn weighted_energy(&self, weight: impl Fn(usize) -> f64) -> f64 {
        self.x.weighted_energy(&weight) + self.y.weighted_energy(&weight)
    }

    pub fn inner(&self, other: &VectorField) -> f64 {
        self.x.inner(&other.x) + self.y.inner(&other.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_has_half_amplitudes() {
        let g = SpectralGrid::new(8).unwrap();
        let f = ScalarField::from_fn(&g, |x, _| x.cos());
        assert!((f.mode(1, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((f.mode(-1, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(f.mode(0, 1).norm() < 1e-15);
        assert!(f.hermitian_defect() < 1e-15);
    }

    #[test]
    fn physical_roundtrip() {
        let g = SpectralGrid::new(16).unwrap();
        let f = ScalarField::from_fn(&g, |x, y| (x + 2.0 * y).sin() + 0.3 * (3.0 * x).cos());
        let back = ScalarField::from_physical(&g, &f.to_physical());
        assert!(f.coeff_distance(&back) < 1e-14);
    }

    #[test]
    fn set_mode_keeps_symmetry() {
        let g = SpectralGrid::new(8).unwrap();
        let mut f = ScalarField::zeros(&g);
        f.set_mode(2, -1, Complex64::new(0.3, -0.7));
        assert_eq!(f.hermitian_defect(), 0.0);
        assert_eq!(f.mode(-2, 1), Complex64::new(0.3, 0.7));
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a = ScalarField::zeros(&SpectralGrid::new(8).unwrap());
        let b = ScalarField::zeros(&SpectralGrid::new(16).unwrap());
        assert!(a.add(&b).is_err());
        assert!(VectorField::new(a, b).is_err());
    }
}
