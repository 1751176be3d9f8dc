//! Energy balance, Sobolev norm monitoring and functional inequalities.
//!
//! Norms are homogeneous: `||Lambda^s f||_{L^2}^2 = L^2 sum_k |k|^{2s} |f_k|^2`
//! on the torus of period `L`, with `s = 0` giving the plain `L^2` norm.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{BlowupReason, Error, Result};
use crate::field::{ScalarField, VectorField};
use crate::grid::SpectralGrid;
use crate::model::{derived_fields, MhdAlphaState, PhysicalParams};
use crate::spectral::{abs_k_pow, curl, fractional_laplacian, resample};

/// Fields that carry a spectral `L^2`-type norm.
pub trait SpectralNorm {
    fn grid(&self) -> &SpectralGrid;
    /// `sum_k weight(k) |f_k|^2`, summed over components.
    fn weighted(&self, weight: &dyn Fn(usize) -> f64) -> f64;
}

impl SpectralNorm for ScalarField {
    fn grid(&self) -> &SpectralGrid {
        ScalarField::grid(self)
    }

    fn weighted(&self, weight: &dyn Fn(usize) -> f64) -> f64 {
        self.weighted_energy(weight)
    }
}

impl SpectralNorm for VectorField {
    fn grid(&self) -> &SpectralGrid {
        VectorField::grid(self)
    }

    fn weighted(&self, weight: &dyn Fn(usize) -> f64) -> f64 {
        self.weighted_energy(weight)
    }
}

/// `||Lambda^s f||_{L^2}`.
pub fn sobolev_norm<F: SpectralNorm + ?Sized>(f: &F, s: f64) -> Result<f64> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("Sobolev exponent must be >= 0, got {s}")));
    }
    let g = f.grid();
    let k2 = g.k2();
    let sum = f.weighted(&|idx| abs_k_pow(k2[idx], 2.0 * s));
    Ok(g.length() * sum.sqrt())
}

fn norm(f: &impl SpectralNorm, s: f64) -> f64 {
    sobolev_norm(f, s).expect("monitored exponents are non-negative")
}

/// `(||grad f||_{L^2}, ||curl f||_{L^2})` of a vector field.
pub fn gradient_curl_norms(f: &VectorField) -> (f64, f64) {
    (norm(f, 1.0), norm(&curl(f), 0.0))
}

/// `(int |f|^p)^{1/p}` by grid quadrature on the physical samples.
pub fn lp_norm(f: &ScalarField, p: f64) -> f64 {
    let vals = f.to_physical();
    let area = f.grid().length() * f.grid().length();
    let mean = vals.iter().map(|v| v.abs().powf(p)).sum::<f64>() / vals.len() as f64;
    (area * mean).powf(1.0 / p)
}

/// `max |f|` over the physical grid.
pub fn max_norm(f: &ScalarField) -> f64 {
    f.to_physical().iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Monitored norms. Labels double as CSV column names where a column exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Norm {
    L2U,
    H1U,
    L2B,
    WL2,
    WL4,
    WL8,
    WMax,
    LamR1U,
    LamR1GradU,
    LamGammaB,
    LamR2B,
    Lam1pR1B,
    Lam1pR2B,
    Lam2pR2B,
    Lam3B,
    Lam3V,
    LamR1p2R2W,
}

impl Norm {
    pub const ALL: [Norm; 17] = [
        Norm::L2U,
        Norm::H1U,
        Norm::L2B,
        Norm::WL2,
        Norm::WL4,
        Norm::WL8,
        Norm::WMax,
        Norm::LamR1U,
        Norm::LamR1GradU,
        Norm::LamGammaB,
        Norm::LamR2B,
        Norm::Lam1pR1B,
        Norm::Lam1pR2B,
        Norm::Lam2pR2B,
        Norm::Lam3B,
        Norm::Lam3V,
        Norm::LamR1p2R2W,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Norm::L2U => "L2_u",
            Norm::H1U => "H1_u",
            Norm::L2B => "L2_b",
            Norm::WL2 => "w_L2",
            Norm::WL4 => "w_L4",
            Norm::WL8 => "w_L8",
            Norm::WMax => "w_max",
            Norm::LamR1U => "Lam_r1_u",
            Norm::LamR1GradU => "Lam_r1_grad_u",
            Norm::LamGammaB => "Lam_gamma_b",
            Norm::LamR2B => "Lam_r2_b",
            Norm::Lam1pR1B => "Lam_1pr1_b",
            Norm::Lam1pR2B => "Lam_1pr2_b",
            Norm::Lam2pR2B => "Lam_2pr2_b",
            Norm::Lam3B => "Lam_3_b",
            Norm::Lam3V => "Lam_3_v",
            Norm::LamR1p2R2W => "Lam_r1p2r2_w",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Time-integrated quantities, accumulated by stage quadrature during the run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Integral {
    /// `int (diss_u + diss_b) dt`
    Dissipation,
    /// `int ||Lambda^{3 + r1} v||^2 dt`
    Lam3pR1VSq,
    /// `int ||Lambda^{3 + r2} b||^2 dt`
    Lam3pR2BSq,
    /// `int ||Lambda^{r1} w||^2 dt`
    LamR1WSq,
}

impl Integral {
    pub const ALL: [Integral; 4] = [
        Integral::Dissipation,
        Integral::Lam3pR1VSq,
        Integral::Lam3pR2BSq,
        Integral::LamR1WSq,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Integral::Dissipation => "int_diss",
            Integral::Lam3pR1VSq => "int_Lam3pr1_v_sq",
            Integral::Lam3pR2BSq => "int_Lam3pr2_b_sq",
            Integral::LamR1WSq => "int_Lamr1_w_sq",
        }
    }
}

/// Integrand values in [`Integral::ALL`] order, from spectral sums on `(w, a)` only.
pub fn integrands(state: &MhdAlphaState, params: &PhysicalParams) -> Vec<f64> {
    let g = state.grid();
    let k2 = g.k2();
    let area = g.length() * g.length();
    let a2 = params.alpha * params.alpha;
    let (mut diss_u, mut diss_b, mut v3, mut b3, mut wr1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for idx in 0..k2.len() {
        let q = k2[idx];
        if q == 0.0 {
            continue;
        }
        let ew = state.w.coeffs()[idx].norm_sqr();
        let ea = state.a.coeffs()[idx].norm_sqr();
        let pr1 = abs_k_pow(q, 2.0 * params.r1);
        let pr2 = abs_k_pow(q, 2.0 * params.r2);
        // |u_k|^2 (1 + a^2 k^2) = |w_k|^2 / (k^2 (1 + a^2 k^2)),  |b_k|^2 = k^2 |a_k|^2
        diss_u += pr1 * ew / (q * (1.0 + a2 * q));
        diss_b += pr2 * q * ea;
        v3 += q * q * pr1 * ew;
        b3 += q * q * q * pr2 * q * ea;
        wr1 += pr1 * ew;
    }
    vec![
        area * (params.nu * diss_u + params.eta * diss_b),
        area * v3,
        area * b3,
        area * wr1,
    ]
}

/// One time-stamped row of diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// `(||u||^2 + alpha^2 ||grad u||^2 + ||b||^2) / 2`
    pub energy_alpha: f64,
    /// `nu (||Lambda^{r1} u||^2 + alpha^2 ||Lambda^{r1} grad u||^2)`
    pub diss_u: f64,
    /// `eta ||Lambda^{r2} b||^2`
    pub diss_b: f64,
    pub sobolev: BTreeMap<Norm, f64>,
    pub cumulative_integrals: BTreeMap<Integral, f64>,
}

impl DiagnosticsRecord {
    pub fn norm(&self, n: Norm) -> f64 {
        self.sobolev.get(&n).copied().unwrap_or(f64::NAN)
    }

    pub fn integral(&self, i: Integral) -> Option<f64> {
        self.cumulative_integrals.get(&i).copied()
    }

    pub fn dissipation(&self) -> f64 {
        self.diss_u + self.diss_b
    }
}

/// Measures a state. `integrals` are the running values in [`Integral::ALL`] order
/// (empty when none are tracked).
pub fn record(state: &MhdAlphaState, params: &PhysicalParams, integrals: &[f64]) -> Result<DiagnosticsRecord> {
    let d = derived_fields(state, params)?;
    let (r1, r2) = (params.r1, params.r2);
    let a2 = params.alpha * params.alpha;
    let gamma = 1.0 - r2 / 2.0;

    let l2_u = norm(&d.u, 0.0);
    let h1_u = norm(&d.u, 1.0);
    let l2_b = norm(&d.b, 0.0);
    let lam_r1_u = norm(&d.u, r1);
    let lam_r1_grad_u = norm(&d.u, r1 + 1.0);
    let lam_r2_b = norm(&d.b, r2);

    let mut sobolev = BTreeMap::new();
    sobolev.insert(Norm::L2U, l2_u);
    sobolev.insert(Norm::H1U, h1_u);
    sobolev.insert(Norm::L2B, l2_b);
    sobolev.insert(Norm::WL2, lp_norm(&state.w, 2.0));
    sobolev.insert(Norm::WL4, lp_norm(&state.w, 4.0));
    sobolev.insert(Norm::WL8, lp_norm(&state.w, 8.0));
    sobolev.insert(Norm::WMax, max_norm(&state.w));
    sobolev.insert(Norm::LamR1U, lam_r1_u);
    sobolev.insert(Norm::LamR1GradU, lam_r1_grad_u);
    sobolev.insert(Norm::LamGammaB, norm(&d.b, gamma));
    sobolev.insert(Norm::LamR2B, lam_r2_b);
    sobolev.insert(Norm::Lam1pR1B, norm(&d.b, 1.0 + r1));
    sobolev.insert(Norm::Lam1pR2B, norm(&d.b, 1.0 + r2));
    sobolev.insert(Norm::Lam2pR2B, norm(&d.b, 2.0 + r2));
    sobolev.insert(Norm::Lam3B, norm(&d.b, 3.0));
    sobolev.insert(Norm::Lam3V, norm(&d.v, 3.0));
    sobolev.insert(Norm::LamR1p2R2W, norm(&state.w, r1 + 2.0 * r2));

    let cumulative_integrals = Integral::ALL
        .iter()
        .zip(integrals)
        .map(|(&k, &v)| (k, v))
        .collect();

    Ok(DiagnosticsRecord {
        t: state.t,
        energy_alpha: 0.5 * (l2_u * l2_u + a2 * h1_u * h1_u + l2_b * l2_b),
        diss_u: params.nu * (lam_r1_u * lam_r1_u + a2 * lam_r1_grad_u * lam_r1_grad_u),
        diss_b: params.eta * lam_r2_b * lam_r2_b,
        sobolev,
        cumulative_integrals,
    })
}

/// Relative defect of `dE/dt = -(diss_u + diss_b)` over `[prev.t, next.t]`.
///
/// The interval-mean dissipation comes from the cumulative dissipation integral
/// when both records carry it, and from the trapezoid rule otherwise.
pub fn energy_balance_residual(prev: &DiagnosticsRecord, next: &DiagnosticsRecord) -> Result<f64> {
    let dt = next.t - prev.t;
    if !(dt > 0.0) {
        return Err(Error::Precondition(format!(
            "records must be in increasing time order, got {} then {}",
            prev.t, next.t
        )));
    }
    let mean_diss = match (prev.integral(Integral::Dissipation), next.integral(Integral::Dissipation)) {
        (Some(q0), Some(q1)) => (q1 - q0) / dt,
        _ => 0.5 * (prev.dissipation() + next.dissipation()),
    };
    let rate = (next.energy_alpha - prev.energy_alpha) / dt;
    Ok((rate + mean_diss).abs() / prev.energy_alpha.max(1.0))
}

/// Both sides of `2 int |Lambda^gamma f^{p/2}|^2 <= p int f^{p-1} Lambda^{2 gamma} f`.
///
/// `f^{p/2}` is the polynomial power, so with `p = 2` the two sides coincide.
/// Powers are formed on a grid fine enough that every product is alias-free,
/// which makes both sides exact for a band-limited `f`.
pub fn positivity_inequality(f: &ScalarField, gamma: f64, p: u32) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma must lie in [0, 1], got {gamma}")));
    }
    if p < 2 || p % 2 != 0 {
        return Err(Error::Domain(format!("p must be an even integer >= 2, got {p}")));
    }
    let scale = 1.0 + f.max_abs_coeff();
    if f.hermitian_defect() > 1e-12 * scale {
        return Err(Error::Precondition("field must be real valued".into()));
    }
    let g = f.grid();
    let band = (0..g.len())
        .filter(|&idx| f.coeffs()[idx].norm() > 0.0)
        .map(|idx| {
            let (kx, ky) = g.mode_of(idx);
            kx.unsigned_abs().max(ky.unsigned_abs()) as usize
        })
        .max()
        .unwrap_or(0);
    let mut m = (p as usize * band + 1).max(8);
    if m % 2 == 1 {
        m += 1;
    }
    let fine = SpectralGrid::with_length(m, g.length())?;
    let f_fine = resample(f, &fine)?;
    let vals = f_fine.to_physical();
    let half: Vec<f64> = vals.iter().map(|v| v.powi(p as i32 / 2)).collect();
    let high: Vec<f64> = vals.iter().map(|v| v.powi(p as i32 - 1)).collect();
    let (half_hat, high_hat) = fine.from_physical_pair(&half, &high);
    let half_field = ScalarField::from_coeffs(&fine, half_hat);
    let high_field = ScalarField::from_coeffs(&fine, high_hat);

    let lam = sobolev_norm(&half_field, gamma)?;
    let lhs = 2.0 * lam * lam;
    let rhs = p as f64 * high_field.inner(&fractional_laplacian(&f_fine, 2.0 * gamma)?);
    Ok((lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Bounded,
    SuspectGrowth,
    Blowup,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Bounded => "BOUNDED",
            Verdict::SuspectGrowth => "SUSPECT-GROWTH",
            Verdict::Blowup => "BLOWUP",
        }
    }

    /// Process exit code carrying the verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Bounded => 0,
            Verdict::SuspectGrowth => 2,
            Verdict::Blowup => 3,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Thresholds of the growth heuristic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonitorSettings {
    /// Any norm reaching this value is treated as growth.
    pub ceiling: f64,
    /// Log-log slope over the last quartile above which growth is flagged.
    pub growth_exponent: f64,
}

impl Default for MonitorSettings {
    fn default() -> Self {
        MonitorSettings {
            ceiling: 1e8,
            growth_exponent: 1.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormSummary {
    pub norm: Norm,
    pub initial: f64,
    pub sup: f64,
    pub final_value: f64,
    /// Trapezoid-rule `int ||.||^2 dt` over the records.
    pub integral_sq: f64,
    /// Fitted `d ln(norm) / d ln(t)` over the last quartile, when measurable.
    pub growth_exponent: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub t_start: f64,
    pub t_final: f64,
    pub records: usize,
    /// `sup_t energy_alpha`.
    pub energy_sup: f64,
    pub norms: Vec<NormSummary>,
    /// Final cumulative integrals.
    pub integrals: Vec<(Integral, f64)>,
    pub abort: Option<BlowupReason>,
    pub verdict: Verdict,
}

impl RegularityReport {
    pub fn summary(&self, n: Norm) -> Option<&NormSummary> {
        self.norms.iter().find(|s| s.norm == n)
    }

    pub fn integral(&self, i: Integral) -> Option<f64> {
        self.integrals.iter().find(|(k, _)| *k == i).map(|(_, v)| *v)
    }
}

impl fmt::Display for RegularityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict)?;
        writeln!(f, "time: {:.6} -> {:.6} ({} records)", self.t_start, self.t_final, self.records)?;
        writeln!(f, "sup energy_alpha: {:.16e}", self.energy_sup)?;
        if let Some(reason) = &self.abort {
            writeln!(f, "aborted: {reason}")?;
        }
        writeln!(
            f,
            "growth heuristic: log-log slope over the last quartile of records"
        )?;
        writeln!(
            f,
            "{:<16} {:>24} {:>24} {:>24} {:>24} {:>10}  verdict",
            "norm", "initial", "sup", "final", "int_sq", "slope"
        )?;
        for s in &self.norms {
            let slope = s
                .growth_exponent
                .map(|e| format!("{e:.3}"))
                .unwrap_or_else(|| "-".into());
            writeln!(
                f,
                "{:<16} {:>24.16e} {:>24.16e} {:>24.16e} {:>24.16e} {:>10}  {}",
                s.norm.label(),
                s.initial,
                s.sup,
                s.final_value,
                s.integral_sq,
                slope,
                s.verdict
            )?;
        }
        for (k, v) in &self.integrals {
            writeln!(f, "{:<16} {:>24.16e}", k.label(), v)?;
        }
        Ok(())
    }
}

/// Least-squares slope of `ln(value)` against `ln(t)`.
fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(t, v)| *t > 0.0 && *v > 1e-300 && v.is_finite())
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Sup, final value, time integral and a growth verdict for every monitored norm.
pub fn regularity_monitor(
    history: &[DiagnosticsRecord],
    abort: Option<&BlowupReason>,
    settings: &MonitorSettings,
) -> Result<RegularityReport> {
    let first = history
        .first()
        .ok_or_else(|| Error::Precondition("regularity monitor needs at least one record".into()))?;
    let last = history.last().expect("non-empty");
    let window_start = 3 * history.len() / 4;

    let mut norms = Vec::with_capacity(Norm::ALL.len());
    for n in Norm::ALL {
        let series: Vec<(f64, f64)> = history.iter().map(|r| (r.t, r.norm(n))).collect();
        let sup = series.iter().fold(f64::NEG_INFINITY, |m, &(_, v)| if v.is_nan() { f64::NAN } else { m.max(v) });
        let integral_sq = series
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 * w[0].1 + w[1].1 * w[1].1))
            .sum();
        let growth_exponent = loglog_slope(&series[window_start..]);
        let grows = growth_exponent.is_some_and(|e| e > settings.growth_exponent);
        let verdict = if !(sup < settings.ceiling) || grows {
            Verdict::SuspectGrowth
        } else {
            Verdict::Bounded
        };
        norms.push(NormSummary {
            norm: n,
            initial: series[0].1,
            sup,
            final_value: series[series.len() - 1].1,
            integral_sq,
            growth_exponent,
            verdict,
        });
    }

    let verdict = if abort.is_some() {
        Verdict::Blowup
    } else {
        norms.iter().map(|s| s.verdict).max().unwrap_or(Verdict::Bounded)
    };
    Ok(RegularityReport {
        t_start: first.t,
        t_final: last.t,
        records: history.len(),
        energy_sup: history.iter().map(|r| r.energy_alpha).fold(f64::NEG_INFINITY, f64::max),
        norms,
        integrals: last.cumulative_integrals.iter().map(|(&k, &v)| (k, v)).collect(),
        abort: abort.cloned(),
        verdict,
    })
}
