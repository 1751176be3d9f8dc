//! Flat `key = value` run configuration.
//!
//! ```text
//! # Orszag-Tang at 64^2
//! n = 64
//! ic = orszag_tang
//! t_end = 2.0
//! dt = 1e-3
//! ```
//!
//! Blank lines and `#` comments are ignored. Unknown or repeated keys are errors.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;
use crate::initial::RandomSpec;
use crate::integrate::{IntegratorConfig, Scheme};
use crate::model::PhysicalParams;

const KEYS: &[&str] = &[
    "n",
    "length",
    "nu",
    "eta",
    "alpha",
    "r1",
    "r2",
    "enforce_critical_line",
    "scheme",
    "cfl",
    "dt_max",
    "dt_min",
    "dt",
    "t_end",
    "observe_every",
    "h3_ceiling",
    "ic",
    "amplitude_w",
    "amplitude_a",
    "mode_kx",
    "mode_ky",
    "seed",
    "k_min",
    "k_max",
    "spectrum_slope",
    "target_h3_v",
    "target_h3_b",
    "rng",
    "snapshot_every",
    "out_dir",
];

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    Zero,
    OrszagTang { amplitude_w: f64, amplitude_a: f64 },
    SingleMode { kx: i64, ky: i64, amplitude_w: f64, amplitude_a: f64 },
    Random(RandomSpec),
}

/// A validated run description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub length: f64,
    pub params: PhysicalParams,
    /// When set, `r2` is derived as `1 - r1`.
    pub enforce_critical_line: bool,
    pub integrator: IntegratorConfig,
    pub ic: InitialCondition,
    /// Snapshot cadence in simulation time; snapshots land on observation times.
    pub snapshot_every: Option<f64>,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 64,
            length: 2.0 * std::f64::consts::PI,
            params: PhysicalParams::default(),
            enforce_critical_line: false,
            integrator: IntegratorConfig::default(),
            ic: InitialCondition::OrszagTang {
                amplitude_w: 1.0,
                amplitude_a: 1.0,
            },
            snapshot_every: None,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<SpectralGrid> {
        SpectralGrid::with_length(self.n, self.length)
    }

    /// Checks cross-field invariants not tied to a single line.
    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.params.validate()?;
        self.integrator.validate()?;
        if let Some(s) = self.snapshot_every {
            if !(s > 0.0) {
                return Err(Error::Domain(format!("snapshot_every must be > 0, got {s}")));
            }
        }
        Ok(())
    }
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries(HashMap<String, Entry>);

impl Entries {
    fn line(&self, key: &str) -> usize {
        self.0.get(key).map_or(0, |e| e.line)
    }

    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|_| Error::Config {
                line: e.line,
                msg: format!("cannot parse `{}` as a value for {key}", e.value),
            }),
        }
    }

    fn bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.0.get(key) {
            None => Ok(default),
            Some(e) => match e.value.as_str() {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                other => Err(Error::Config {
                    line: e.line,
                    msg: format!("cannot parse `{other}` as a boolean for {key}"),
                }),
            },
        }
    }

    fn check(&self, key: &str, ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::Config {
                line: self.line(key),
                msg: msg(),
            })
        }
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim().trim_matches('"').to_string();
        if !KEYS.contains(&key) {
            return Err(Error::Config {
                line,
                msg: format!("unknown key `{key}`"),
            });
        }
        if let Some(prev) = map.insert(key.to_string(), Entry { line, value }) {
            return Err(Error::Config {
                line,
                msg: format!("key `{key}` already set on line {}", prev.line),
            });
        }
    }
    Ok(Entries(map))
}

/// Parses and validates a configuration; missing keys take their defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let e = tokenize(text)?;
    let d = RunConfig::default();

    let n: usize = e.get("n", d.n)?;
    e.check("n", n >= 8 && n % 2 == 0, || format!("n must be even and >= 8, got {n}"))?;
    let length: f64 = e.get("length", d.length)?;
    e.check("length", length > 0.0 && length.is_finite(), || {
        format!("length must be > 0, got {length}")
    })?;

    let nu: f64 = e.get("nu", d.params.nu)?;
    e.check("nu", nu >= 0.0 && nu.is_finite(), || format!("nu must be >= 0, got {nu}"))?;
    let eta: f64 = e.get("eta", d.params.eta)?;
    e.check("eta", eta >= 0.0 && eta.is_finite(), || format!("eta must be >= 0, got {eta}"))?;
    let alpha: f64 = e.get("alpha", d.params.alpha)?;
    e.check("alpha", alpha > 0.0 && alpha.is_finite(), || {
        format!("alpha must be > 0, got {alpha}")
    })?;
    let r1: f64 = e.get("r1", d.params.r1)?;
    e.check("r1", (0.0..=1.0).contains(&r1), || format!("r1 must lie in [0, 1], got {r1}"))?;
    let enforce = e.bool("enforce_critical_line", d.enforce_critical_line)?;
    let r2 = if enforce {
        let derived = 1.0 - r1;
        if let Some(given) = e.opt::<f64>("r2")? {
            e.check("r2", (given - derived).abs() < 1e-12, || {
                format!("r2 = {given} contradicts enforce_critical_line (1 - r1 = {derived})")
            })?;
        }
        derived
    } else {
        e.get("r2", d.params.r2)?
    };
    e.check("r2", (0.0..=1.0).contains(&r2), || format!("r2 must lie in [0, 1], got {r2}"))?;
    let params = PhysicalParams { nu, eta, alpha, r1, r2 };

    let di = &d.integrator;
    let scheme: Scheme = e.get("scheme", di.scheme)?;
    let cfl: f64 = e.get("cfl", di.cfl)?;
    e.check("cfl", cfl > 0.0 && cfl <= 1.0, || format!("cfl must lie in (0, 1], got {cfl}"))?;
    let dt_max: f64 = e.get("dt_max", di.dt_max)?;
    e.check("dt_max", dt_max > 0.0 && dt_max.is_finite(), || {
        format!("dt_max must be > 0, got {dt_max}")
    })?;
    let dt_min: f64 = e.get("dt_min", di.dt_min)?;
    e.check("dt_min", dt_min > 0.0 && dt_min < dt_max, || {
        format!("dt_min must satisfy 0 < dt_min < dt_max = {dt_max}, got {dt_min}")
    })?;
    let fixed_dt: Option<f64> = e.opt("dt")?;
    if let Some(dt) = fixed_dt {
        e.check("dt", dt > 0.0 && dt.is_finite(), || format!("dt must be > 0, got {dt}"))?;
    }
    let t_end: f64 = e.get("t_end", di.t_end)?;
    e.check("t_end", t_end > 0.0 && t_end.is_finite(), || {
        format!("t_end must be > 0, got {t_end}")
    })?;
    let observe_every: f64 = e.get("observe_every", di.observe_every)?;
    e.check("observe_every", observe_every > 0.0 && observe_every.is_finite(), || {
        format!("observe_every must be > 0, got {observe_every}")
    })?;
    let h3_ceiling: f64 = e.get("h3_ceiling", di.h3_ceiling)?;
    e.check("h3_ceiling", h3_ceiling > 0.0, || {
        format!("h3_ceiling must be > 0, got {h3_ceiling}")
    })?;
    let integrator = IntegratorConfig {
        scheme,
        cfl,
        dt_max,
        dt_min,
        t_end,
        fixed_dt,
        observe_every,
        h3_ceiling,
    };

    let rng: String = e.get("rng", "chacha20".to_string())?;
    e.check("rng", rng == "chacha20", || {
        format!("unsupported rng `{rng}`, only `chacha20` is available")
    })?;
    let amplitude_w: f64 = e.get("amplitude_w", 1.0)?;
    let amplitude_a: f64 = e.get("amplitude_a", 1.0)?;
    e.check("amplitude_w", amplitude_w.is_finite(), || "amplitude_w must be finite".into())?;
    e.check("amplitude_a", amplitude_a.is_finite(), || "amplitude_a must be finite".into())?;
    let ic_name: String = e.get("ic", "orszag_tang".to_string())?;
    let cutoff = (n - 1) / 3;
    let ic = match ic_name.as_str() {
        "zero" => InitialCondition::Zero,
        "orszag_tang" => InitialCondition::OrszagTang { amplitude_w, amplitude_a },
        "single_mode" => {
            let kx: i64 = e.get("mode_kx", 1)?;
            let ky: i64 = e.get("mode_ky", 0)?;
            e.check("mode_kx", kx != 0 || ky != 0, || "single mode needs a nonzero wavevector".into())?;
            e.check("mode_kx", kx.unsigned_abs() as usize <= cutoff, || {
                format!("mode_kx must satisfy |mode_kx| <= {cutoff}, got {kx}")
            })?;
            e.check("mode_ky", ky.unsigned_abs() as usize <= cutoff, || {
                format!("mode_ky must satisfy |mode_ky| <= {cutoff}, got {ky}")
            })?;
            InitialCondition::SingleMode { kx, ky, amplitude_w, amplitude_a }
        }
        "random" => {
            let dr = RandomSpec::default();
            let k_min: u32 = e.get("k_min", dr.k_min)?;
            let k_max: u32 = e.get("k_max", dr.k_max.min(cutoff as u32))?;
            e.check("k_min", k_min >= 1 && k_min <= k_max, || {
                format!("k_min must satisfy 1 <= k_min <= k_max = {k_max}, got {k_min}")
            })?;
            e.check("k_max", k_max as usize <= cutoff, || {
                format!("k_max must not exceed the dealiasing cutoff {cutoff}, got {k_max}")
            })?;
            let spectrum_slope: f64 = e.get("spectrum_slope", dr.spectrum_slope)?;
            e.check("spectrum_slope", spectrum_slope.is_finite(), || {
                "spectrum_slope must be finite".into()
            })?;
            let target_h3_v: f64 = e.get("target_h3_v", dr.target_h3_v)?;
            e.check("target_h3_v", target_h3_v >= 0.0 && target_h3_v.is_finite(), || {
                format!("target_h3_v must be >= 0, got {target_h3_v}")
            })?;
            let target_h3_b: f64 = e.get("target_h3_b", dr.target_h3_b)?;
            e.check("target_h3_b", target_h3_b >= 0.0 && target_h3_b.is_finite(), || {
                format!("target_h3_b must be >= 0, got {target_h3_b}")
            })?;
            InitialCondition::Random(RandomSpec {
                seed: e.get("seed", dr.seed)?,
                k_min,
                k_max,
                spectrum_slope,
                target_h3_v,
                target_h3_b,
            })
        }
        other => {
            return Err(Error::Config {
                line: e.line("ic"),
                msg: format!("unknown initial condition `{other}` (zero, orszag_tang, single_mode, random)"),
            })
        }
    };

    let snapshot_every: Option<f64> = e.opt("snapshot_every")?;
    if let Some(s) = snapshot_every {
        e.check("snapshot_every", s > 0.0 && s.is_finite(), || {
            format!("snapshot_every must be > 0, got {s}")
        })?;
    }
    let out_dir: String = e.get("out_dir", d.out_dir.display().to_string())?;

    Ok(RunConfig {
        n,
        length,
        params,
        enforce_critical_line: enforce,
        integrator,
        ic,
        snapshot_every,
        out_dir: PathBuf::from(out_dir),
    })
}

/// Writes the configuration back out in parseable form, every key explicit.
impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        let i = &self.integrator;
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "length = {:?}", self.length)?;
        writeln!(f, "nu = {:?}", p.nu)?;
        writeln!(f, "eta = {:?}", p.eta)?;
        writeln!(f, "alpha = {:?}", p.alpha)?;
        writeln!(f, "r1 = {:?}", p.r1)?;
        if self.enforce_critical_line {
            writeln!(f, "enforce_critical_line = true")?;
        } else {
            writeln!(f, "r2 = {:?}", p.r2)?;
        }
        writeln!(f, "scheme = {}", i.scheme)?;
        writeln!(f, "cfl = {:?}", i.cfl)?;
        writeln!(f, "dt_max = {:?}", i.dt_max)?;
        writeln!(f, "dt_min = {:?}", i.dt_min)?;
        if let Some(dt) = i.fixed_dt {
            writeln!(f, "dt = {dt:?}")?;
        }
        writeln!(f, "t_end = {:?}", i.t_end)?;
        writeln!(f, "observe_every = {:?}", i.observe_every)?;
        writeln!(f, "h3_ceiling = {:?}", i.h3_ceiling)?;
        match &self.ic {
            InitialCondition::Zero => writeln!(f, "ic = zero")?,
            InitialCondition::OrszagTang { amplitude_w, amplitude_a } => {
                writeln!(f, "ic = orszag_tang")?;
                writeln!(f, "amplitude_w = {amplitude_w:?}")?;
                writeln!(f, "amplitude_a = {amplitude_a:?}")?;
            }
            InitialCondition::SingleMode { kx, ky, amplitude_w, amplitude_a } => {
                writeln!(f, "ic = single_mode")?;
                writeln!(f, "mode_kx = {kx}")?;
                writeln!(f, "mode_ky = {ky}")?;
                writeln!(f, "amplitude_w = {amplitude_w:?}")?;
                writeln!(f, "amplitude_a = {amplitude_a:?}")?;
            }
            InitialCondition::Random(r) => {
                writeln!(f, "ic = random")?;
                writeln!(f, "rng = chacha20")?;
                writeln!(f, "seed = {}", r.seed)?;
                writeln!(f, "k_min = {}", r.k_min)?;
                writeln!(f, "k_max = {}", r.k_max)?;
                writeln!(f, "spectrum_slope = {:?}", r.spectrum_slope)?;
                writeln!(f, "target_h3_v = {:?}", r.target_h3_v)?;
                writeln!(f, "target_h3_b = {:?}", r.target_h3_b)?;
            }
        }
        if let Some(s) = self.snapshot_every {
            writeln!(f, "snapshot_every = {s:?}")?;
        }
        writeln!(f, "out_dir = {}", self.out_dir.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(err: Error) -> usize {
        match err {
            Error::Config { line, .. } => line,
            other => panic!("expected a configuration error, got {other}"),
        }
    }

    #[test]
    fn empty_is_default() {
        let c = parse_config("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.params, PhysicalParams::new(1.0, 1.0, 1.0, 0.5, 0.5).unwrap());
    }

    #[test]
    fn critical_line_derives_r2() {
        let c = parse_config("r1 = 0.75\nenforce_critical_line = true\n").unwrap();
        assert_eq!(c.params.r2, 0.25);
        let err = parse_config("r1 = 0.75\nr2 = 0.5\nenforce_critical_line = true\n").unwrap_err();
        assert_eq!(line_of(err), 2);
    }

    #[test]
    fn errors_carry_lines() {
        let err = parse_config("# comment\n\nr1 = 1.5\n").unwrap_err();
        assert!(err.to_string().contains("[0, 1]"));
        assert_eq!(line_of(err), 3);
        assert_eq!(line_of(parse_config("n = 64\nbogus = 1\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_config("nu = abc").unwrap_err()), 1);
        assert_eq!(line_of(parse_config("n = 64\nn = 32").unwrap_err()), 2);
        assert_eq!(line_of(parse_config("just words").unwrap_err()), 1);
        assert_eq!(line_of(parse_config("ic = vortex").unwrap_err()), 1);
        assert_eq!(line_of(parse_config("ic = random\nk_max = 30").unwrap_err()), 2);
        assert_eq!(line_of(parse_config("scheme = euler").unwrap_err()), 1);
        assert_eq!(line_of(parse_config("rng = mt19937").unwrap_err()), 1);
    }

    #[test]
    fn inline_comments_and_quotes() {
        let c = parse_config("t_end = 3 # long run\nout_dir = \"runs/a\"\ndt = 1e-3").unwrap();
        assert_eq!(c.integrator.t_end, 3.0);
        assert_eq!(c.integrator.fixed_dt, Some(1e-3));
        assert_eq!(c.out_dir, PathBuf::from("runs/a"));
    }

    #[test]
    fn display_roundtrips() {
        let texts = [
            "",
            "ic = random\nseed = 7\nk_max = 10\nr1 = 0.3\nenforce_critical_line = true\nsnapshot_every = 0.5",
            "ic = single_mode\nmode_kx = 2\nmode_ky = -1\nscheme = ifrk3\ndt = 0.01\nlength = 1.0",
            "ic = zero\nnu = 0\neta = 0",
        ];
        for t in texts {
            let c = parse_config(t).unwrap();
            assert_eq!(parse_config(&c.to_string()).unwrap(), c);
        }
    }
}
