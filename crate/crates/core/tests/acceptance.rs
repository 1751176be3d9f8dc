//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::fs;
use std::time::Instant;

use common::{band_limited, frac_lap_oracle, leray_oracle, product_oracle, rel_diff, Rng};
use mhda::config::{parse_config, RunConfig};
use mhda::diagnostics::{gradient_curl_norms, positivity_inequality, Integral, Norm};
use mhda::field::{ScalarField, VectorField};
use mhda::grid::SpectralGrid;
use mhda::initial::{orszag_tang, random_band_limited, single_mode, RandomSpec};
use mhda::integrate::{integrate, step, IntegratorConfig, Scheme};
use mhda::model::{cross_check_formulations, MhdAlphaState, PhysicalParams};
use mhda::runner::{residuals, run, simulate, sweep};
use mhda::snapshot::{decode, encode, read_snapshot, write_snapshot};
use mhda::spectral::{dealias, fractional_laplacian, leray_project, nonlinear_product, perp_gradient};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn config(text: &str) -> RunConfig {
    parse_config(text).expect("acceptance configs are valid")
}

fn operator_oracles() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..4u64 {
        let length = [2.0 * std::f64::consts::PI, 3.0, 2.0 * std::f64::consts::PI, 7.5][seed as usize];
        let g = SpectralGrid::with_length(8, length).unwrap();
        let mut rng = Rng::new(1000 + seed);
        let (fv, gv) = (rng.samples(64), rng.samples(64));
        let f = ScalarField::from_physical(&g, &fv);
        for s in [0.0, 0.3, 0.5, 1.0, 1.7, 2.0] {
            let got = fractional_laplacian(&f, s).unwrap();
            worst = worst.max(rel_diff(got.coeffs(), &frac_lap_oracle(&fv, 8, length, s)));
        }
        let prod = nonlinear_product(
            &dealias(&f),
            &dealias(&ScalarField::from_physical(&g, &gv)),
        )
        .unwrap();
        worst = worst.max(rel_diff(prod.coeffs(), &product_oracle(&fv, &gv, 8)));
        let vf = VectorField::new(f.clone(), ScalarField::from_physical(&g, &gv)).unwrap();
        let p = leray_project(&vf);
        let (ox, oy) = leray_oracle(&fv, &gv, 8, length);
        worst = worst.max(rel_diff(p.x.coeffs(), &ox)).max(rel_diff(p.y.coeffs(), &oy));
    }
    ensure(worst < 1e-12, format!("max relative deviation {worst:.2e} (tol 1e-12)"))
}

fn energy_law() -> Outcome {
    let cfg = config("n = 64\nic = orszag_tang\nt_end = 2\ndt = 1e-3\nobserve_every = 0.1\n");
    let sim = simulate(&cfg, |_| Ok(())).map_err(|e| e.to_string())?;
    let h = &sim.history;
    let res = residuals(h).map_err(|e| e.to_string())?;
    let worst = res.iter().copied().fold(0.0, f64::max);
    let worst_rise = h
        .windows(2)
        .map(|w| (w[1].energy_alpha - w[0].energy_alpha) / w[0].energy_alpha.max(1.0))
        .fold(f64::NEG_INFINITY, f64::max);
    ensure(
        sim.outcome.completed() && worst < 1e-6 && worst_rise <= 1e-6,
        format!(
            "{} records, max residual {worst:.2e} (tol 1e-6), largest relative energy change {worst_rise:.2e}",
            h.len()
        ),
    )
}

fn inviscid_conservation() -> Outcome {
    let cfg = config("n = 64\nic = orszag_tang\nnu = 0\neta = 0\nt_end = 1\ndt = 1e-3\nobserve_every = 0.05\n");
    let sim = simulate(&cfg, |_| Ok(())).map_err(|e| e.to_string())?;
    let e0 = sim.history[0].energy_alpha;
    let drift = sim
        .history
        .iter()
        .map(|r| (r.energy_alpha - e0).abs() / e0)
        .fold(0.0, f64::max);
    ensure(
        sim.outcome.completed() && drift < 1e-6,
        format!("max relative drift {drift:.2e} (tol 1e-6)"),
    )
}

fn formulation_equivalence() -> Outcome {
    let g = SpectralGrid::new(32).unwrap();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for seed in 0..20 {
        let spec = RandomSpec {
            seed,
            k_min: 1,
            k_max: g.cutoff() as u32,
            spectrum_slope: -1.0,
            target_h3_v: 5.0,
            target_h3_b: 5.0,
        };
        let state = random_band_limited(&g, &spec).unwrap();
        for r1 in [0.25, 0.5, 0.75] {
            for alpha in [0.5, 1.0, 2.0] {
                let p = PhysicalParams::new(1.0, 1.0, alpha, r1, 1.0 - r1).unwrap();
                worst = worst.max(cross_check_formulations(&state, &p).map_err(|e| e.to_string())?);
                cases += 1;
            }
        }
    }
    ensure(worst < 1e-10, format!("{cases} cases, max discrepancy {worst:.2e} (tol 1e-10)"))
}

fn critical_line_sweep() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut base = config(
        "n = 128\nic = random\nseed = 2024\nk_min = 1\nk_max = 8\ntarget_h3_v = 5\ntarget_h3_b = 5\n\
         enforce_critical_line = true\nt_end = 10\nobserve_every = 0.1\n",
    );
    base.out_dir = tmp.path().to_path_buf();
    let out = sweep(&base, &[0.25, 0.5, 0.75], 0.0).map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    let mut ok = true;
    for e in &out.entries {
        match &e.result {
            Ok(r) => {
                let sup_v = r.summary(Norm::Lam3V).map_or(f64::NAN, |s| s.sup);
                let sup_b = r.summary(Norm::Lam3B).map_or(f64::NAN, |s| s.sup);
                let iv = r.integral(Integral::Lam3pR1VSq).unwrap_or(f64::NAN);
                let ib = r.integral(Integral::Lam3pR2BSq).unwrap_or(f64::NAN);
                ok &= e.exit_code() == 0 && [sup_v, sup_b, iv, ib].iter().all(|v| v.is_finite());
                lines.push(format!(
                    "r1={} {} exit={} sup|L3v|={sup_v:.4} sup|L3b|={sup_b:.4} int|L^(3+r1)v|^2={iv:.4} int|L^(3+r2)b|^2={ib:.4}",
                    e.r1,
                    r.verdict,
                    e.exit_code()
                ));
            }
            Err(msg) => {
                ok = false;
                lines.push(format!("r1={} FAILED: {msg}", e.r1));
            }
        }
    }
    ensure(ok && out.entries.len() == 3, lines.join("; "))
}

fn positivity_suite() -> Outcome {
    let g = SpectralGrid::new(16).unwrap();
    let mut rng = Rng::new(77);
    let (mut worst, mut worst_eq) = (f64::NEG_INFINITY, 0.0f64);
    let mut failures = 0;
    for case in 0..750u64 {
        let band = 1 + (case % 4) as i64;
        let f = band_limited(&g, 5000 + case, band);
        let gamma = rng.uniform(0.0, 1.0);
        let p = 2 * (1 + (case % 4) as u32);
        let (lhs, rhs) = positivity_inequality(&f, gamma, p).map_err(|e| e.to_string())?;
        let excess = (lhs - rhs) / rhs.abs();
        worst = worst.max(excess);
        if lhs > rhs + 1e-10 * rhs.abs() {
            failures += 1;
        }
        if p == 2 {
            worst_eq = worst_eq.max((lhs - rhs).abs() / rhs.abs());
        }
    }
    ensure(
        failures == 0 && worst_eq < 1e-12,
        format!("750 cases, {failures} violations, max (lhs-rhs)/|rhs| {worst:.2e}, p=2 max gap {worst_eq:.2e}"),
    )
}

fn gradient_curl_identity() -> Outcome {
    let g = SpectralGrid::new(32).unwrap();
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let f = if seed % 2 == 0 {
            perp_gradient(&band_limited(&g, 9000 + seed, 1 + (seed % 10) as i64))
        } else {
            let raw = VectorField::new(band_limited(&g, 9000 + seed, 10), band_limited(&g, 19000 + seed, 10)).unwrap();
            leray_project(&raw)
        };
        let (grad, curl) = gradient_curl_norms(&f);
        worst = worst.max((grad - curl).abs() / grad);
    }
    ensure(worst < 1e-12, format!("50 fields, max relative gap {worst:.2e} (tol 1e-12)"))
}

fn final_state(state: &MhdAlphaState, params: &PhysicalParams, t_end: f64, dt: f64) -> MhdAlphaState {
    let cfg = IntegratorConfig {
        t_end,
        fixed_dt: Some(dt),
        observe_every: t_end,
        ..IntegratorConfig::default()
    };
    integrate(state, params, &cfg, |_| {}).unwrap().state
}

fn distance(a: &MhdAlphaState, b: &MhdAlphaState) -> f64 {
    a.w.coeff_distance(&b.w) + a.a.coeff_distance(&b.a)
}

fn integrator_order() -> Outcome {
    let g = SpectralGrid::new(32).unwrap();
    let params = PhysicalParams::default();
    let s0 = orszag_tang(&g, 1.0, 1.0);
    let t_end = 0.5;
    let reference = final_state(&s0, &params, t_end, t_end / 1024.0);
    let dts: Vec<f64> = [8.0, 16.0, 32.0, 64.0].iter().map(|m| t_end / m).collect();
    let errs: Vec<f64> = dts.iter().map(|&dt| distance(&final_state(&s0, &params, t_end, dt), &reference)).collect();
    let orders: Vec<f64> = errs.windows(2).map(|e| (e[0] / e[1]).log2()).collect();
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);

    let lin = single_mode(&g, 1, 0, 1.0, 1.0).unwrap();
    let mut lin_err: f64 = 0.0;
    for dt in [1.0, 0.5, 0.25, 0.1] {
        let mut s = lin.clone();
        let steps = (1.0 / dt as f64).round() as usize;
        for _ in 0..steps {
            s = step(&s, &params, Scheme::Ifrk4, dt).unwrap();
        }
        let want = (-1.0f64).exp();
        let got = s.w.mode(1, 0).re / lin.w.mode(1, 0).re;
        lin_err = lin_err.max((got - want).abs()).max((s.a.mode(1, 0).re / lin.a.mode(1, 0).re - want).abs());
    }
    ensure(
        min_order >= 3.7 && lin_err < 1e-12,
        format!(
            "orders {:?}, errors {:?}, linear decay error {lin_err:.2e}",
            orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>(),
            errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>()
        ),
    )
}

fn determinism_and_formats() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let text = "n = 32\nic = random\nseed = 11\nk_max = 8\nt_end = 0.5\nobserve_every = 0.05\n";
    let mut bytes = Vec::new();
    for name in ["a", "b"] {
        let mut cfg = config(text);
        cfg.out_dir = tmp.path().join(name);
        run(&cfg).map_err(|e| e.to_string())?;
        bytes.push(fs::read(cfg.out_dir.join("diagnostics.csv")).map_err(|e| e.to_string())?);
    }
    let identical = bytes[0] == bytes[1];

    let mut state = random_band_limited(&SpectralGrid::new(32).unwrap(), &RandomSpec::default()).unwrap();
    state.t = 0.375;
    let path = tmp.path().join("s.bin");
    write_snapshot(&path, &state).map_err(|e| e.to_string())?;
    let back = read_snapshot(&path).map_err(|e| e.to_string())?;
    let roundtrip = back == state && encode(&back) == fs::read(&path).unwrap() && decode(&encode(&state)).unwrap() == state;

    let mut zero = config("n = 16\nic = zero\nt_end = 0.3\nobserve_every = 0.1\ndt = 0.1\n");
    zero.out_dir = tmp.path().join("zero");
    run(&zero).map_err(|e| e.to_string())?;
    let golden = fs::read_to_string(zero.out_dir.join("diagnostics.csv")).unwrap()
        == include_str!("golden/zero_ic_diagnostics.csv");
    ensure(
        identical && roundtrip && golden,
        format!("byte-identical csv: {identical}, snapshot roundtrip: {roundtrip}, golden zero run: {golden}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("operator oracles", operator_oracles),
        ("energy law", energy_law),
        ("inviscid conservation", inviscid_conservation),
        ("formulation equivalence", formulation_equivalence),
        ("critical-line sweep", critical_line_sweep),
        ("positivity inequality", positivity_suite),
        ("gradient-curl identity", gradient_curl_identity),
        ("integrator order", integrator_order),
        ("determinism and formats", determinism_and_formats),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} [{name}]: PASS ({secs:.1}s) {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL ({secs:.1}s) {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
