//! Integrating-factor Runge–Kutta time stepping.
//!
//! The dissipative symbols `nu |k|^{2 r1}` and `eta |k|^{2 r2}` are diagonal,
//! so their exponentials are applied exactly (Lawson form) and only the
//! nonlinear terms go through the explicit stages:
//!
//! ```text
//! U_i     = E(c_i h) u_n + h sum_j a_ij E((c_i - c_j) h) N(U_j)
//! u_{n+1} = E(h) u_n     + h sum_j b_j  E((1 - c_j) h)   N(U_j)
//! ```
//!
//! Scalar functionals of the state can be integrated in time alongside the
//! solution with the same weights `b_j` over the stage states, which keeps
//! their quadrature at the order of the scheme.

use num_complex::Complex64;

use crate::error::{BlowupReason, Error, Result};
use crate::field::ScalarField;
use crate::model::{filtered_velocity, nonlinear_terms, MhdAlphaState, PhysicalParams};
use crate::spectral::perp_gradient;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Ifrk4,
    Ifrk3,
}

impl Scheme {
    pub fn order(self) -> u32 {
        match self {
            Scheme::Ifrk4 => 4,
            Scheme::Ifrk3 => 3,
        }
    }

    fn tableau(self) -> Tableau {
        match self {
            Scheme::Ifrk4 => Tableau {
                c: &[0.0, 0.5, 0.5, 1.0],
                a: &[&[], &[0.5], &[0.0, 0.5], &[0.0, 0.0, 1.0]],
                b: &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            },
            // Shu–Osher SSP RK3
            Scheme::Ifrk3 => Tableau {
                c: &[0.0, 1.0, 0.5],
                a: &[&[], &[1.0], &[0.25, 0.25]],
                b: &[1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0],
            },
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Ifrk4 => "ifrk4",
            Scheme::Ifrk3 => "ifrk3",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ifrk4" => Ok(Scheme::Ifrk4),
            "ifrk3" => Ok(Scheme::Ifrk3),
            other => Err(format!("unknown scheme '{other}' (expected ifrk4 or ifrk3)")),
        }
    }
}

struct Tableau {
    c: &'static [f64],
    a: &'static [&'static [f64]],
    b: &'static [f64],
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub cfl: f64,
    pub dt_max: f64,
    /// Abort threshold for the CFL step.
    pub dt_min: f64,
    pub t_end: f64,
    /// Overrides the CFL controller with a constant step.
    pub fixed_dt: Option<f64>,
    /// Observer cadence in simulation time.
    pub observe_every: f64,
    /// Abort when `||Lambda^3 v||` or `||Lambda^3 b||` exceeds this.
    pub h3_ceiling: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            scheme: Scheme::Ifrk4,
            cfl: 0.5,
            dt_max: 1e-2,
            dt_min: 1e-10,
            t_end: 1.0,
            fixed_dt: None,
            observe_every: 0.1,
            h3_ceiling: 1e8,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return bad(format!("dt_max must be > 0, got {}", self.dt_max));
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.dt_max) {
            return bad(format!(
                "dt_min must satisfy 0 < dt_min < dt_max, got {} (dt_max = {})",
                self.dt_min, self.dt_max
            ));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be > 0, got {}", self.t_end));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("fixed dt must be > 0, got {dt}"));
            }
        }
        if !(self.observe_every > 0.0) {
            return bad(format!("observation interval must be > 0, got {}", self.observe_every));
        }
        if !(self.h3_ceiling > 0.0) {
            return bad(format!("h3 ceiling must be > 0, got {}", self.h3_ceiling));
        }
        Ok(())
    }
}

/// Per-mode exact decay factors for a step fraction.
struct Decay {
    frac: f64,
    w: Vec<f64>,
    a: Vec<f64>,
}

fn decay_factors(state: &MhdAlphaState, params: &PhysicalParams, tau: f64, frac: f64) -> Decay {
    let k2 = state.grid().k2();
    Decay {
        frac,
        w: k2.iter().map(|&q| (-params.vorticity_rate(q) * tau).exp()).collect(),
        a: k2.iter().map(|&q| (-params.potential_rate(q) * tau).exp()).collect(),
    }
}

fn lookup(cache: &[Decay], frac: f64) -> &Decay {
    cache
        .iter()
        .find(|d| d.frac == frac)
        .expect("decay factor precomputed for every tableau offset")
}

fn stage_state(state: &MhdAlphaState, t: f64, w: Vec<Complex64>, a: Vec<Complex64>) -> MhdAlphaState {
    let grid = state.grid();
    MhdAlphaState {
        t,
        w: ScalarField::from_coeffs(grid, w),
        a: ScalarField::from_coeffs(grid, a),
    }
}

/// One integrating-factor step of size `dt`.
pub fn step(state: &MhdAlphaState, params: &PhysicalParams, scheme: Scheme, dt: f64) -> Result<MhdAlphaState> {
    step_with_quadrature(state, params, scheme, dt, &|_| Vec::new()).map(|(s, _)| s)
}

/// One step, also returning `int_t^{t+dt} integrand(state) ds` by stage quadrature.
pub fn step_with_quadrature(
    state: &MhdAlphaState,
    params: &PhysicalParams,
    scheme: Scheme,
    dt: f64,
    integrand: &dyn Fn(&MhdAlphaState) -> Vec<f64>,
) -> Result<(MhdAlphaState, Vec<f64>)> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be > 0, got {dt}")));
    }
    let tab = scheme.tableau();
    let stages = tab.c.len();

    let mut fracs: Vec<f64> = vec![1.0];
    for i in 0..stages {
        fracs.push(tab.c[i]);
        fracs.push(1.0 - tab.c[i]);
        for j in 0..i {
            fracs.push(tab.c[i] - tab.c[j]);
        }
    }
    let mut cache: Vec<Decay> = Vec::new();
    for f in fracs {
        if !cache.iter().any(|d| d.frac == f) {
            cache.push(decay_factors(state, params, f * dt, f));
        }
    }

    let len = state.grid().len();
    let w0 = state.w.coeffs();
    let a0 = state.a.coeffs();
    let mut nl_w: Vec<ScalarField> = Vec::with_capacity(stages);
    let mut nl_a: Vec<ScalarField> = Vec::with_capacity(stages);
    let mut integral: Option<Vec<f64>> = None;

    for i in 0..stages {
        let e = lookup(&cache, tab.c[i]);
        let mut w: Vec<Complex64> = (0..len).map(|p| w0[p] * e.w[p]).collect();
        let mut a: Vec<Complex64> = (0..len).map(|p| a0[p] * e.a[p]).collect();
        for (j, &aij) in tab.a[i].iter().enumerate() {
            if aij == 0.0 {
                continue;
            }
            let ej = lookup(&cache, tab.c[i] - tab.c[j]);
            let (nw, na) = (nl_w[j].coeffs(), nl_a[j].coeffs());
            let s = dt * aij;
            for p in 0..len {
                w[p] += nw[p] * (s * ej.w[p]);
                a[p] += na[p] * (s * ej.a[p]);
            }
        }
        let stage = stage_state(state, state.t + tab.c[i] * dt, w, a);
        let (nw, na) = nonlinear_terms(&stage, params)?;
        let vals = integrand(&stage);
        let acc = integral.get_or_insert_with(|| vec![0.0; vals.len()]);
        for (q, v) in acc.iter_mut().zip(&vals) {
            *q += dt * tab.b[i] * v;
        }
        nl_w.push(nw);
        nl_a.push(na);
    }

    let e = lookup(&cache, 1.0);
    let mut w: Vec<Complex64> = (0..len).map(|p| w0[p] * e.w[p]).collect();
    let mut a: Vec<Complex64> = (0..len).map(|p| a0[p] * e.a[p]).collect();
    for j in 0..stages {
        let ej = lookup(&cache, 1.0 - tab.c[j]);
        let (nw, na) = (nl_w[j].coeffs(), nl_a[j].coeffs());
        let s = dt * tab.b[j];
        for p in 0..len {
            w[p] += nw[p] * (s * ej.w[p]);
            a[p] += na[p] * (s * ej.a[p]);
        }
    }
    let next = stage_state(state, state.t + dt, w, a);
    if !next.is_finite() {
        return Err(Error::Blowup {
            t: next.t,
            reason: BlowupReason::NonFinite,
        });
    }
    Ok((next, integral.unwrap_or_default()))
}

/// `max(||u||_inf, ||b||_inf)` over the physical grid.
pub fn max_speed(state: &MhdAlphaState, params: &PhysicalParams) -> f64 {
    let u = filtered_velocity(&state.w, params.alpha);
    let b = perp_gradient(&state.a);
    let (ux, uy) = u.to_physical();
    let (bx, by) = b.to_physical();
    let mut m: f64 = 0.0;
    for p in 0..ux.len() {
        m = m.max(ux[p].hypot(uy[p])).max(bx[p].hypot(by[p]));
    }
    m
}

fn raw_cfl_dt(state: &MhdAlphaState, params: &PhysicalParams, config: &IntegratorConfig) -> f64 {
    let speed = max_speed(state, params).max(1e-12);
    config.cfl * state.grid().dx() / speed
}

/// Advective step `cfl * dx / max(|u|, |b|)` clamped to `[dt_min, dt_max]`.
pub fn cfl_dt(state: &MhdAlphaState, params: &PhysicalParams, config: &IntegratorConfig) -> f64 {
    raw_cfl_dt(state, params, config).clamp(config.dt_min, config.dt_max)
}

/// `(||Lambda^3 v||, ||Lambda^3 b||)` from the evolved scalars.
pub fn h3_norms(state: &MhdAlphaState) -> (f64, f64) {
    let k2 = state.grid().k2();
    let l = state.grid().length();
    let v = state.w.weighted_energy(|p| k2[p] * k2[p]).sqrt() * l;
    let b = state.a.weighted_energy(|p| k2[p].powi(4)).sqrt() * l;
    (v, b)
}

/// What the observer sees at each cadence point.
pub struct Observation<'a> {
    pub state: &'a MhdAlphaState,
    /// Running time integrals of the integrand, aligned with its output.
    pub integrals: &'a [f64],
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct IntegrationOutcome {
    /// Final state, or the last healthy state when aborted.
    pub state: MhdAlphaState,
    pub integrals: Vec<f64>,
    pub steps: usize,
    pub abort: Option<BlowupReason>,
}

impl IntegrationOutcome {
    pub fn completed(&self) -> bool {
        self.abort.is_none()
    }
}

/// Integrates to `config.t_end` without time integrals.
pub fn integrate(
    state0: &MhdAlphaState,
    params: &PhysicalParams,
    config: &IntegratorConfig,
    observer: impl FnMut(&Observation<'_>),
) -> Result<IntegrationOutcome> {
    integrate_with(state0, params, config, &|_| Vec::new(), observer)
}

/// Integrates to `config.t_end`, calling `observer` at `t0`, every `observe_every` and at `t_end`.
///
/// Blow-up (non-finite state, CFL step below `dt_min`, or an H^3 norm over the
/// ceiling) ends the run early with `abort` set and the last healthy state kept.
pub fn integrate_with(
    state0: &MhdAlphaState,
    params: &PhysicalParams,
    config: &IntegratorConfig,
    integrand: &dyn Fn(&MhdAlphaState) -> Vec<f64>,
    mut observer: impl FnMut(&Observation<'_>),
) -> Result<IntegrationOutcome> {
    params.validate()?;
    if config.t_end < state0.t {
        return Err(Error::Precondition(format!(
            "t_end = {} precedes the initial time {}",
            config.t_end, state0.t
        )));
    }
    let mut state = state0.clone();
    let mut integrals = vec![0.0; integrand(&state).len()];
    let mut steps = 0usize;
    observer(&Observation {
        state: &state,
        integrals: &integrals,
        steps,
    });
    if config.t_end == state0.t {
        return Ok(IntegrationOutcome {
            state,
            integrals,
            steps,
            abort: None,
        });
    }
    config.validate()?;

    let t0 = state0.t;
    let mut m = 1u64;
    loop {
        let target = (t0 + m as f64 * config.observe_every).min(config.t_end);
        while state.t < target {
            let remaining = target - state.t;
            let dt_nominal = match config.fixed_dt {
                Some(dt) => dt,
                None => {
                    let raw = raw_cfl_dt(&state, params, config);
                    if raw < config.dt_min {
                        return Ok(IntegrationOutcome {
                            state,
                            integrals,
                            steps,
                            abort: Some(BlowupReason::StepUnderflow {
                                dt: raw,
                                dt_min: config.dt_min,
                            }),
                        });
                    }
                    raw.min(config.dt_max)
                }
            };
            let landing = remaining <= dt_nominal * (1.0 + 1e-9);
            let dt = if landing { remaining } else { dt_nominal };
            let (mut next, quad) = match step_with_quadrature(&state, params, config.scheme, dt, integrand) {
                Ok(r) => r,
                Err(Error::Blowup { reason, .. }) => {
                    return Ok(IntegrationOutcome {
                        state,
                        integrals,
                        steps,
                        abort: Some(reason),
                    })
                }
                Err(e) => return Err(e),
            };
            if landing {
                next.t = target;
            }
            let (hv, hb) = h3_norms(&next);
            let ceiling_hit = if !(hv <= config.h3_ceiling) {
                Some(("Lam_3_v", hv))
            } else if !(hb <= config.h3_ceiling) {
                Some(("Lam_3_b", hb))
            } else {
                None
            };
            if let Some((norm, value)) = ceiling_hit {
                return Ok(IntegrationOutcome {
                    state,
                    integrals,
                    steps,
                    abort: Some(BlowupReason::NormCeiling {
                        norm,
                        value,
                        ceiling: config.h3_ceiling,
                    }),
                });
            }
            for (q, d) in integrals.iter_mut().zip(quad) {
                *q += d;
            }
            state = next;
            steps += 1;
        }
        observer(&Observation {
            state: &state,
            integrals: &integrals,
            steps,
        });
        if target >= config.t_end {
            break;
        }
        m += 1;
    }
    Ok(IntegrationOutcome {
        state,
        integrals,
        steps,
        abort: None,
    })
}
