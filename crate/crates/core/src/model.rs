//! The MHD-alpha system in vorticity/potential form, with the primitive
//! velocity/magnetic form kept as an independent cross-check.
//!
//! Evolved variables are the vorticity `w = curl v` of the unfiltered
//! velocity and the magnetic potential `a` with `b = grad_perp a`:
//!
//! ```text
//! dw/dt = -(u.grad) w - nu Lambda^{2 r1} w + (b.grad) j
//! da/dt = -(u.grad) a - eta Lambda^{2 r2} a
//! ```
//!
//! where `v = grad_perp Lambda^{-2} w`, `u = (1 - alpha^2 Delta)^{-1} v` and `j = -Delta a`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::grid::SpectralGrid;
use crate::spectral::{
    abs_k_pow, advect, advect_vec, b_from_potential, current_from_potential, curl,
    dealias_in_place, dot_products, fractional_laplacian, fractional_laplacian_vec,
    helmholtz_filter_invert, leray_project, partial_x, partial_y, perp_gradient,
    velocity_from_vorticity,
};

/// Viscosity, diffusivity, filter width and the two fractional exponents.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    pub nu: f64,
    pub eta: f64,
    pub alpha: f64,
    pub r1: f64,
    pub r2: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            nu: 1.0,
            eta: 1.0,
            alpha: 1.0,
            r1: 0.5,
            r2: 0.5,
        }
    }
}

impl PhysicalParams {
    pub fn new(nu: f64, eta: f64, alpha: f64, r1: f64, r2: f64) -> Result<Self> {
        let p = PhysicalParams {
            nu,
            eta,
            alpha,
            r1,
            r2,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return bad(format!("nu must be >= 0, got {}", self.nu));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return bad(format!("eta must be >= 0, got {}", self.eta));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be > 0, got {}", self.alpha));
        }
        if !(0.0..=1.0).contains(&self.r1) {
            return bad(format!("r1 must lie in [0, 1], got {}", self.r1));
        }
        if !(0.0..=1.0).contains(&self.r2) {
            return bad(format!("r2 must lie in [0, 1], got {}", self.r2));
        }
        Ok(())
    }

    /// Whether `r1 + r2 = 1` to within `1e-12`.
    pub fn critical_line(&self) -> bool {
        (self.r1 + self.r2 - 1.0).abs() < 1e-12
    }

    /// Per-mode damping rate `nu |k|^{2 r1}` of the vorticity.
    pub fn vorticity_rate(&self, k2: f64) -> f64 {
        self.nu * abs_k_pow(k2, 2.0 * self.r1)
    }

    /// Per-mode damping rate `eta |k|^{2 r2}` of the potential.
    pub fn potential_rate(&self, k2: f64) -> f64 {
        self.eta * abs_k_pow(k2, 2.0 * self.r2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MhdAlphaState {
    pub t: f64,
    /// Vorticity of the unfiltered velocity.
    pub w: ScalarField,
    /// Magnetic potential.
    pub a: ScalarField,
}

impl MhdAlphaState {
    pub fn new(t: f64, w: ScalarField, a: ScalarField) -> Result<Self> {
        let s = MhdAlphaState { t, w, a };
        s.validate()?;
        Ok(s)
    }

    pub fn zero(grid: &SpectralGrid) -> Self {
        MhdAlphaState {
            t: 0.0,
            w: ScalarField::zeros(grid),
            a: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &SpectralGrid {
        self.w.grid()
    }

    /// Checks shared grid, zero means and Hermitian symmetry.
    pub fn validate(&self) -> Result<()> {
        self.w.grid().same_as(self.a.grid())?;
        for (name, f) in [("w", &self.w), ("a", &self.a)] {
            let scale = 1.0 + f.max_abs_coeff();
            if f.mean().norm() > 1e-13 * scale {
                return Err(Error::Precondition(format!(
                    "{name} must have zero mean, got {}",
                    f.mean()
                )));
            }
            let defect = f.hermitian_defect();
            if defect > 1e-12 * scale {
                return Err(Error::Precondition(format!(
                    "{name} is not Hermitian symmetric (defect {defect:e})"
                )));
            }
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.w.is_finite() && self.a.is_finite()
    }
}

/// Velocity, filtered velocity, magnetic field and current of a state.
#[derive(Clone, Debug)]
pub struct DerivedFields {
    pub v: VectorField,
    pub u: VectorField,
    pub b: VectorField,
    pub j: ScalarField,
}

pub fn derived_fields(state: &MhdAlphaState, params: &PhysicalParams) -> Result<DerivedFields> {
    state.w.grid().same_as(state.a.grid())?;
    let v = velocity_from_vorticity(&state.w)?;
    let u = helmholtz_filter_invert(&v, params.alpha)?;
    let b = b_from_potential(&state.a);
    let j = current_from_potential(&state.a);
    Ok(DerivedFields { v, u, b, j })
}

/// Filtered velocity straight from the vorticity: symbol `(i ky, -i kx) / (|k|^2 (1 + alpha^2 |k|^2))`.
pub(crate) fn filtered_velocity(w: &ScalarField, alpha: f64) -> VectorField {
    let g = w.grid();
    let (kx, ky, k2) = (g.kx(), g.ky(), g.k2());
    let a2 = alpha * alpha;
    let inv = |idx: usize| {
        let q = k2[idx];
        if q == 0.0 {
            0.0
        } else {
            1.0 / (q * (1.0 + a2 * q))
        }
    };
    let i = Complex64::new(0.0, 1.0);
    VectorField {
        x: w.map_complex_symbol(|idx| i * ky[idx] * inv(idx)),
        y: w.map_complex_symbol(|idx| -i * kx[idx] * inv(idx)),
    }
}

/// Dealiased nonlinear parts `(-(u.grad) w + (b.grad) j, -(u.grad) a)` of the vorticity form.
///
/// Eight physical fields are produced with four pair-packed inverse transforms
/// (`grad a` is read off `b`) and both products return through one pair-packed
/// forward transform.
pub fn nonlinear_terms(state: &MhdAlphaState, params: &PhysicalParams) -> Result<(ScalarField, ScalarField)> {
    let grid = state.grid();
    grid.same_as(state.a.grid())?;
    let u = filtered_velocity(&state.w, params.alpha);
    let b = perp_gradient(&state.a);
    let j = current_from_potential(&state.a);

    let (ux, uy) = u.to_physical();
    let (bx, by) = b.to_physical();
    let (wx, wy) = grid.to_physical_pair(partial_x(&state.w).coeffs(), partial_y(&state.w).coeffs());
    let (jx, jy) = grid.to_physical_pair(partial_x(&j).coeffs(), partial_y(&j).coeffs());

    let len = grid.len();
    let mut nw = Vec::with_capacity(len);
    let mut na = Vec::with_capacity(len);
    for p in 0..len {
        nw.push(-(ux[p] * wx[p] + uy[p] * wy[p]) + (bx[p] * jx[p] + by[p] * jy[p]));
        // grad a = (-b_y, b_x)
        na.push(ux[p] * by[p] - uy[p] * bx[p]);
    }
    let (mut cw, mut ca) = grid.from_physical_pair(&nw, &na);
    dealias_in_place(&mut cw, grid);
    dealias_in_place(&mut ca, grid);
    // Both products integrate to zero; pin the mean mode exactly.
    cw[0] = Complex64::new(0.0, 0.0);
    ca[0] = Complex64::new(0.0, 0.0);
    Ok((ScalarField::from_coeffs(grid, cw), ScalarField::from_coeffs(grid, ca)))
}

/// Full time derivatives `(dw/dt, da/dt)` of the evolved pair.
pub fn rhs_vorticity(state: &MhdAlphaState, params: &PhysicalParams) -> Result<(ScalarField, ScalarField)> {
    let (nw, na) = nonlinear_terms(state, params)?;
    let k2 = state.grid().k2();
    let mut dw = nw;
    let mut da = na;
    for idx in 0..k2.len() {
        dw.coeffs_mut()[idx] -= state.w.coeffs()[idx] * params.vorticity_rate(k2[idx]);
        da.coeffs_mut()[idx] -= state.a.coeffs()[idx] * params.potential_rate(k2[idx]);
    }
    Ok((dw, da))
}

/// Time derivatives `(dv/dt, db/dt)` of the primitive variables, pressure removed by projection.
///
/// Only used to cross-check [`rhs_vorticity`]; it is several times more expensive.
pub fn rhs_primitive(state: &MhdAlphaState, params: &PhysicalParams) -> Result<(VectorField, VectorField)> {
    let DerivedFields { v, u, b, .. } = derived_fields(state, params)?;

    let u_adv_v = advect_vec(&u, &v)?;
    let dux = [partial_x(&u.x), partial_x(&u.y)];
    let duy = [partial_y(&u.x), partial_y(&u.y)];
    // sum_k v_k grad u_k
    let stretch = VectorField {
        x: dot_products(&[(&v.x, &dux[0]), (&v.y, &dux[1])]),
        y: dot_products(&[(&v.x, &duy[0]), (&v.y, &duy[1])]),
    };
    let lorentz = advect_vec(&b, &b)?;
    let forcing_v = lorentz.sub(&u_adv_v)?.sub(&stretch)?;
    let dv = leray_project(&forcing_v).sub(&fractional_laplacian_vec(&v, 2.0 * params.r1)?.scale(params.nu))?;

    let forcing_b = advect_vec(&b, &u)?.sub(&advect_vec(&u, &b)?)?;
    let db = leray_project(&forcing_b).sub(&fractional_laplacian_vec(&b, 2.0 * params.r2)?.scale(params.eta))?;
    Ok((dv, db))
}

fn l2(f: &ScalarField) -> f64 {
    f.grid().length() * f.weighted_energy(|_| 1.0).sqrt()
}

fn l2_vec(f: &VectorField) -> f64 {
    f.grid().length() * f.weighted_energy(|_| 1.0).sqrt()
}

/// Largest relative disagreement between the two formulations on one state.
pub fn cross_check_formulations(state: &MhdAlphaState, params: &PhysicalParams) -> Result<f64> {
    let (dw, da) = rhs_vorticity(state, params)?;
    let (dv, db) = rhs_primitive(state, params)?;
    let vort = l2(&curl(&dv).sub(&dw)?) / l2(&dw).max(1.0);
    let db_from_da = perp_gradient(&da);
    let mag = l2_vec(&db.sub(&db_from_da)?) / l2_vec(&db_from_da).max(1.0);
    Ok(vort.max(mag))
}

/// `<(u.grad) w, w>` relative to `||u.grad w|| ||w||`; vanishes for divergence-free `u`.
pub fn advection_skewness(state: &MhdAlphaState, params: &PhysicalParams) -> Result<f64> {
    let u = helmholtz_filter_invert(&velocity_from_vorticity(&state.w)?, params.alpha)?;
    let adv = advect(&u, &state.w)?;
    let scale = l2(&adv) * l2(&state.w);
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(adv.inner(&state.w).abs() / scale)
}

/// `(b.grad) j` alone, the magnetic source of the vorticity equation.
pub fn lorentz_vorticity_source(state: &MhdAlphaState) -> Result<ScalarField> {
    let b = b_from_potential(&state.a);
    let j = current_from_potential(&state.a);
    advect(&b, &j)
}

/// Linear part `-nu Lambda^{2 r1} w` only, for comparisons against pure-fluid dynamics.
pub fn viscous_term(state: &MhdAlphaState, params: &PhysicalParams) -> Result<ScalarField> {
    Ok(fractional_laplacian(&state.w, 2.0 * params.r1)?.scale(-params.nu))
}
