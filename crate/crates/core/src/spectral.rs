//! Linear Fourier-multiplier operators and the dealiased quadratic product.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::grid::SpectralGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `|k|^s` with the `k = 0` value fixed to 0 for `s > 0` and 1 for `s = 0`.
#[inline]
pub fn abs_k_pow(k2: f64, s: f64) -> f64 {
    if s == 0.0 {
        1.0
    } else if k2 == 0.0 {
        0.0
    } else {
        k2.powf(0.5 * s)
    }
}

/// `Lambda^s f`, the Fourier multiplier `|k|^s`.
pub fn fractional_laplacian(f: &ScalarField, s: f64) -> Result<ScalarField> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "fractional exponent must be >= 0, got {s}"
        )));
    }
    let k2 = f.grid().k2();
    Ok(f.map_symbol(|idx| abs_k_pow(k2[idx], s)))
}

pub fn fractional_laplacian_vec(f: &VectorField, s: f64) -> Result<VectorField> {
    Ok(VectorField {
        x: fractional_laplacian(&f.x, s)?,
        y: fractional_laplacian(&f.y, s)?,
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("filter width alpha must be > 0, got {alpha}")))
    }
}

/// `u = (1 - alpha^2 Delta)^{-1} v`.
pub fn helmholtz_filter_invert(v: &VectorField, alpha: f64) -> Result<VectorField> {
    check_alpha(alpha)?;
    let k2 = v.grid().k2();
    let a2 = alpha * alpha;
    Ok(v.map(|c| c.map_symbol(|idx| 1.0 / (1.0 + a2 * k2[idx]))))
}

/// `v = (1 - alpha^2 Delta) u`.
pub fn helmholtz_filter_apply(u: &VectorField, alpha: f64) -> Result<VectorField> {
    check_alpha(alpha)?;
    let k2 = u.grid().k2();
    let a2 = alpha * alpha;
    Ok(u.map(|c| c.map_symbol(|idx| 1.0 + a2 * k2[idx])))
}

/// Biot–Savart inversion `v = grad_perp Lambda^{-2} w` for zero-mean `w`.
pub fn velocity_from_vorticity(w: &ScalarField) -> Result<VectorField> {
    let scale = 1.0 + w.max_abs_coeff();
    if w.mean().norm() > 1e-13 * scale {
        return Err(Error::Precondition(format!(
            "vorticity must have zero mean on the torus, got {}",
            w.mean()
        )));
    }
    Ok(perp_grad_inverse_laplacian(w))
}

/// `grad_perp Lambda^{-2} f` with the mean mode dropped.
pub(crate) fn perp_grad_inverse_laplacian(f: &ScalarField) -> VectorField {
    let g = f.grid();
    let (kx, ky, k2) = (g.kx(), g.ky(), g.k2());
    let inv = |idx: usize| if k2[idx] == 0.0 { 0.0 } else { 1.0 / k2[idx] };
    VectorField {
        x: f.map_complex_symbol(|idx| I * ky[idx] * inv(idx)),
        y: f.map_complex_symbol(|idx| -I * kx[idx] * inv(idx)),
    }
}

/// `grad_perp f = (d_y f, -d_x f)`.
pub fn perp_gradient(f: &ScalarField) -> VectorField {
    let g = f.grid();
    let (kx, ky) = (g.kx(), g.ky());
    VectorField {
        x: f.map_complex_symbol(|idx| I * ky[idx]),
        y: f.map_complex_symbol(|idx| -I * kx[idx]),
    }
}

/// Magnetic field `b = grad_perp a` of a potential.
pub fn b_from_potential(a: &ScalarField) -> VectorField {
    perp_gradient(a)
}

/// Current density `j = curl b = -Delta a`.
pub fn current_from_potential(a: &ScalarField) -> ScalarField {
    let k2 = a.grid().k2();
    a.map_symbol(|idx| k2[idx])
}

pub fn gradient(f: &ScalarField) -> VectorField {
    let g = f.grid();
    let (kx, ky) = (g.kx(), g.ky());
    VectorField {
        x: f.map_complex_symbol(|idx| I * kx[idx]),
        y: f.map_complex_symbol(|idx| I * ky[idx]),
    }
}

pub fn partial_x(f: &ScalarField) -> ScalarField {
    let kx = f.grid().kx();
    f.map_complex_symbol(|idx| I * kx[idx])
}

pub fn partial_y(f: &ScalarField) -> ScalarField {
    let ky = f.grid().ky();
    f.map_complex_symbol(|idx| I * ky[idx])
}

/// Scalar curl `d_x f_y - d_y f_x`.
pub fn curl(f: &VectorField) -> ScalarField {
    let g = f.grid();
    let (kx, ky) = (g.kx(), g.ky());
    let coeffs = (0..g.len())
        .map(|idx| I * (f.y.coeffs()[idx] * kx[idx] - f.x.coeffs()[idx] * ky[idx]))
        .collect();
    ScalarField::from_coeffs(g, coeffs)
}

pub fn divergence(f: &VectorField) -> ScalarField {
    let g = f.grid();
    let (kx, ky) = (g.kx(), g.ky());
    let coeffs = (0..g.len())
        .map(|idx| I * (f.x.coeffs()[idx] * kx[idx] + f.y.coeffs()[idx] * ky[idx]))
        .collect();
    ScalarField::from_coeffs(g, coeffs)
}

/// `-Delta f`.
pub fn neg_laplacian(f: &ScalarField) -> ScalarField {
    let k2 = f.grid().k2();
    f.map_symbol(|idx| k2[idx])
}

/// Orthogonal projection onto divergence-free fields; the mean mode passes through.
pub fn leray_project(f: &VectorField) -> VectorField {
    let g = f.grid();
    let (kx, ky, k2) = (g.kx(), g.ky(), g.k2());
    let mut px = Vec::with_capacity(g.len());
    let mut py = Vec::with_capacity(g.len());
    for idx in 0..g.len() {
        let (fx, fy) = (f.x.coeffs()[idx], f.y.coeffs()[idx]);
        if k2[idx] == 0.0 {
            px.push(fx);
            py.push(fy);
            continue;
        }
        let dot = (fx * kx[idx] + fy * ky[idx]) / k2[idx];
        px.push(fx - dot * kx[idx]);
        py.push(fy - dot * ky[idx]);
    }
    VectorField {
        x: ScalarField::from_coeffs(g, px),
        y: ScalarField::from_coeffs(g, py),
    }
}

/// Zeroes every mode outside the 2/3-rule mask.
pub fn dealias(f: &ScalarField) -> ScalarField {
    let mut out = f.clone();
    dealias_in_place(out.coeffs_mut(), f.grid());
    out
}

pub(crate) fn dealias_in_place(coeffs: &mut [Complex64], grid: &SpectralGrid) {
    for (c, &keep) in coeffs.iter_mut().zip(grid.mask()) {
        if !keep {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

/// Dealiased pseudo-spectral product of two real fields.
pub fn nonlinear_product(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    f.grid().same_as(g.grid())?;
    let grid = f.grid();
    let (pf, pg) = grid.to_physical_pair(f.coeffs(), g.coeffs());
    let prod: Vec<f64> = pf.iter().zip(&pg).map(|(a, b)| a * b).collect();
    let (mut coeffs, _) = grid.from_physical_pair(&prod, &vec![0.0; prod.len()]);
    dealias_in_place(&mut coeffs, grid);
    Ok(ScalarField::from_coeffs(grid, coeffs))
}

/// Sum of dealiased products `sum_i a_i b_i` evaluated in one pass, with pair-packed transforms.
pub(crate) fn dot_products(pairs: &[(&ScalarField, &ScalarField)]) -> ScalarField {
    let grid = pairs[0].0.grid();
    let mut acc = vec![0.0; grid.len()];
    for (a, b) in pairs {
        let (pa, pb) = grid.to_physical_pair(a.coeffs(), b.coeffs());
        for ((s, x), y) in acc.iter_mut().zip(&pa).zip(&pb) {
            *s += x * y;
        }
    }
    let (mut coeffs, _) = grid.from_physical_pair(&acc, &vec![0.0; acc.len()]);
    dealias_in_place(&mut coeffs, grid);
    ScalarField::from_coeffs(grid, coeffs)
}

/// Dealiased advective derivative `(u . grad) f`.
pub fn advect(u: &VectorField, f: &ScalarField) -> Result<ScalarField> {
    u.grid().same_as(f.grid())?;
    let fx = partial_x(f);
    let fy = partial_y(f);
    Ok(dot_products(&[(&u.x, &fx), (&u.y, &fy)]))
}

pub fn advect_vec(u: &VectorField, f: &VectorField) -> Result<VectorField> {
    Ok(VectorField {
        x: advect(u, &f.x)?,
        y: advect(u, &f.y)?,
    })
}

/// Zero-pads (or truncates) the spectrum of `f` onto `target`, which must share the domain length.
pub fn resample(f: &ScalarField, target: &SpectralGrid) -> Result<ScalarField> {
    if f.grid().length() != target.length() {
        return Err(Error::GridMismatch {
            left: f.grid().n(),
            left_len: f.grid().length(),
            right: target.n(),
            right_len: target.length(),
        });
    }
    let src = f.grid();
    let half = (target.n() / 2) as i64;
    let mut out = ScalarField::zeros(target);
    for idx in 0..src.len() {
        let (kx, ky) = src.mode_of(idx);
        let c = f.coeffs()[idx];
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        if kx.abs() >= half || ky.abs() >= half {
            continue;
        }
        let t = target.index(kx, ky);
        out.coeffs_mut()[t] = c;
    }
    Ok(out)
}
