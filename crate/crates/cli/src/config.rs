//! Flat `key = value` run configuration.
//!
//! One pair per line, `#` starts a comment, keys are dotted
//! (`grid.nx = 64`, `scenario.name = "alfven"`). Values use TOML literal
//! syntax: numbers, quoted strings, booleans and arrays. Every key except
//! `grid.nx`, `grid.ny`, `grid.nz` and `scenario.name` has a default.
//! Unknown keys, duplicated keys and keys that do not apply to the chosen
//! scenario are errors.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use modmhd_core::dynamics::Formulation;
use modmhd_core::fieldkit::{GridSpec, StencilOrder};
use modmhd_core::scenarios::ScenarioSpec;
use modmhd_core::{GaugeMode, GaugePolicy, PhysParams};
use toml::Value;

/// Where a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    /// The n-th `--set` override (1-based).
    Override(usize),
    Missing,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override(n) => write!(f, "--set #{n}"),
            Origin::Missing => write!(f, "not set"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{key} ({origin}): {message}")]
pub struct ConfigError {
    pub key: String,
    pub origin: Origin,
    pub message: String,
}

impl ConfigError {
    fn new(key: &str, origin: Origin, message: impl Into<String>) -> Self {
        Self { key: key.to_string(), origin, message: message.into() }
    }
}

/// Scenario parameters after defaults have been applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub spec: ScenarioSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionConfig {
    pub rho0: f64,
    pub p0: f64,
    pub h0: [f64; 3],
    pub k: Vec<[i64; 3]>,
    pub formulations: Vec<Formulation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceConfig {
    pub resolutions: Vec<usize>,
    pub t_probe: f64,
    pub expected_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub formulation: Formulation,
    pub scenario: ScenarioSpec,
    pub seed: u64,
    pub c: f64,
    pub gamma: f64,
    pub courant: f64,
    pub stencil_order: StencilOrder,
    pub gauge_mode: GaugeMode,
    pub gauge_tol: f64,
    pub t_end: f64,
    pub out_every: u64,
    /// Write a snapshot every this many steps; 0 writes only the final one.
    pub snapshot_every: u64,
    /// 0 means unlimited.
    pub max_steps: u64,
    pub output_dir: String,
    pub identity_resolutions: Vec<usize>,
    pub dispersion: DispersionConfig,
    pub convergence: ConvergenceConfig,
}

impl RunConfig {
    pub fn params(&self) -> PhysParams {
        PhysParams {
            c: self.c,
            gamma: self.gamma,
            courant: self.courant,
            order: self.stencil_order,
            gauge: GaugePolicy { mode: self.gauge_mode, tol: self.gauge_tol },
        }
    }
}

/// Every accepted key with its documented default (`None` = required or
/// scenario-dependent).
pub const KEYS: &[(&str, &str)] = &[
    ("grid.nx", "required"),
    ("grid.ny", "required"),
    ("grid.nz", "required"),
    ("grid.lx", "6.283185307179586 (2 pi)"),
    ("grid.ly", "6.283185307179586 (2 pi)"),
    ("grid.lz", "6.283185307179586 (2 pi)"),
    ("formulation", "\"modified\" (or \"traditional\")"),
    ("seed", "1"),
    ("scenario.name", "required: uniform_rest | alfven | sound | random_solenoidal | orszag_tang | manufactured"),
    ("scenario.rho0", "per scenario"),
    ("scenario.p0", "per scenario"),
    ("scenario.b0", "per scenario (float for alfven, [x, y, z] otherwise)"),
    ("scenario.delta", "alfven 1e-3, sound 1e-4"),
    ("scenario.mode", "1"),
    ("scenario.amplitude", "0.1"),
    ("scenario.k_max", "2"),
    ("scenario.a0", "0.28209479177387814 (1/sqrt(4 pi))"),
    ("scenario.v0", "1.0"),
    ("physics.c", "1.0"),
    ("physics.gamma", "1.6666666666666667 (5/3)"),
    ("numerics.courant", "0.4"),
    ("numerics.stencil_order", "2 (or 4)"),
    ("numerics.gauge_policy", "\"every_step\" (or \"off\", \"every_n:<n>\")"),
    ("numerics.gauge_tol", "1e-10"),
    ("numerics.t_end", "1.0"),
    ("numerics.out_every", "1"),
    ("numerics.snapshot_every", "0 (final snapshot only)"),
    ("numerics.max_steps", "0 (unlimited)"),
    ("output.dir", "\"out\""),
    ("identities.resolutions", "[16, 32]"),
    ("dispersion.rho0", "1.0"),
    ("dispersion.p0", "0.6"),
    ("dispersion.h0", "[1.0, 0.0, 0.0]"),
    ("dispersion.k", "[[1, 0, 0]]"),
    ("dispersion.formulations", "\"both\" (or \"modified\", \"traditional\")"),
    ("convergence.resolutions", "[16, 32, 64]"),
    ("convergence.t_probe", "0.2"),
    ("convergence.expected_order", "unset (no check)"),
];

/// Scenario keys each scenario accepts.
fn scenario_keys(name: &str) -> &'static [&'static str] {
    match name {
        "uniform_rest" => &["rho0", "p0", "b0"],
        "alfven" => &["rho0", "p0", "b0", "delta", "mode"],
        "sound" => &["rho0", "p0", "delta", "mode"],
        "random_solenoidal" => &["rho0", "p0", "b0", "amplitude", "k_max"],
        "orszag_tang" => &["rho0", "p0", "a0", "v0"],
        _ => &[],
    }
}

struct Entries {
    map: BTreeMap<String, (Origin, Value)>,
}

fn parse_value(key: &str, origin: Origin, raw: &str) -> Result<Value, ConfigError> {
    let doc = format!("v = {raw}");
    let mut table: toml::Table =
        toml::from_str(&doc).map_err(|e| ConfigError::new(key, origin, format!("cannot parse value `{raw}`: {}", e.message())))?;
    table.remove("v").ok_or_else(|| ConfigError::new(key, origin, "missing value"))
}

fn split_line(line: &str) -> Option<(&str, &str)> {
    // a '#' inside a quoted string is not a comment
    let mut in_str = false;
    let mut cut = line.len();
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_str = !in_str,
            '#' if !in_str => {
                cut = i;
                break;
            }
            _ => {}
        }
    }
    let body = line[..cut].trim();
    if body.is_empty() {
        return None;
    }
    Some(body.split_once('=').map_or((body, ""), |(k, v)| (k.trim(), v.trim())))
}

impl Entries {
    fn insert(&mut self, key: &str, origin: Origin, raw: &str, allow_replace: bool) -> Result<(), ConfigError> {
        if key.is_empty() {
            return Err(ConfigError::new("<empty>", origin, "expected `key = value`"));
        }
        if raw.is_empty() {
            return Err(ConfigError::new(key, origin, "expected `key = value`"));
        }
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(ConfigError::new(key, origin, "unknown key"));
        }
        let value = parse_value(key, origin, raw)?;
        if !allow_replace {
            if let Some((first, _)) = self.map.get(key) {
                return Err(ConfigError::new(key, origin, format!("duplicate key (first set at {first})")));
            }
        }
        self.map.insert(key.to_string(), (origin, value));
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<(Origin, Value)> {
        self.map.remove(key)
    }

    fn float(&mut self, key: &str, default: Option<f64>) -> Result<(f64, Origin), ConfigError> {
        match self.take(key) {
            Some((o, Value::Float(f))) => Ok((f, o)),
            Some((o, Value::Integer(i))) => Ok((i as f64, o)),
            Some((o, v)) => Err(ConfigError::new(key, o, format!("expected a number, found {}", v.type_str()))),
            None => default.map(|d| (d, Origin::Missing)).ok_or_else(|| ConfigError::new(key, Origin::Missing, "required key")),
        }
    }

    fn int(&mut self, key: &str, default: Option<i64>) -> Result<(i64, Origin), ConfigError> {
        match self.take(key) {
            Some((o, Value::Integer(i))) => Ok((i, o)),
            Some((o, v)) => Err(ConfigError::new(key, o, format!("expected an integer, found {}", v.type_str()))),
            None => default.map(|d| (d, Origin::Missing)).ok_or_else(|| ConfigError::new(key, Origin::Missing, "required key")),
        }
    }

    fn string(&mut self, key: &str, default: Option<&str>) -> Result<(String, Origin), ConfigError> {
        match self.take(key) {
            Some((o, Value::String(s))) => Ok((s, o)),
            Some((o, v)) => Err(ConfigError::new(key, o, format!("expected a string, found {}", v.type_str()))),
            None => default
                .map(|d| (d.to_string(), Origin::Missing))
                .ok_or_else(|| ConfigError::new(key, Origin::Missing, "required key")),
        }
    }

    fn array(&mut self, key: &str) -> Option<(Origin, Vec<Value>)> {
        self.take(key).map(|(o, v)| match v {
            Value::Array(a) => (o, a),
            other => (o, vec![other]),
        })
    }

    fn vec3(&mut self, key: &str, default: [f64; 3]) -> Result<([f64; 3], Origin), ConfigError> {
        match self.take(key) {
            None => Ok((default, Origin::Missing)),
            Some((o, Value::Array(a))) if a.len() == 3 => {
                let mut out = [0.0; 3];
                for (slot, v) in out.iter_mut().zip(&a) {
                    *slot = as_f64(v).ok_or_else(|| ConfigError::new(key, o, "expected three numbers"))?;
                }
                Ok((out, o))
            }
            Some((o, _)) => Err(ConfigError::new(key, o, "expected an array of three numbers")),
        }
    }

    fn usize_list(&mut self, key: &str, default: &[usize]) -> Result<(Vec<usize>, Origin), ConfigError> {
        match self.array(key) {
            None => Ok((default.to_vec(), Origin::Missing)),
            Some((o, vals)) => {
                let list = vals
                    .iter()
                    .map(|v| match v {
                        Value::Integer(i) if *i > 0 => Ok(*i as usize),
                        _ => Err(ConfigError::new(key, o, "expected a list of positive integers")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok((list, o))
            }
        }
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn check(ok: bool, key: &str, origin: Origin, msg: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::new(key, origin, msg))
    }
}

fn positive_f(e: &mut Entries, key: &str, default: Option<f64>) -> Result<f64, ConfigError> {
    let (v, o) = e.float(key, default)?;
    check(v.is_finite() && v > 0.0, key, o, "must be finite and > 0")?;
    Ok(v)
}

fn finite_f(e: &mut Entries, key: &str, default: f64) -> Result<f64, ConfigError> {
    let (v, o) = e.float(key, Some(default))?;
    check(v.is_finite(), key, o, "must be finite")?;
    Ok(v)
}

fn positive_i(e: &mut Entries, key: &str, default: Option<i64>) -> Result<i64, ConfigError> {
    let (v, o) = e.int(key, default)?;
    check(v > 0, key, o, "must be a positive integer")?;
    Ok(v)
}

fn nonneg_i(e: &mut Entries, key: &str, default: i64) -> Result<u64, ConfigError> {
    let (v, o) = e.int(key, Some(default))?;
    check(v >= 0, key, o, "must be a non-negative integer")?;
    Ok(v as u64)
}

fn parse_formulation(key: &str, origin: Origin, s: &str) -> Result<Formulation, ConfigError> {
    Formulation::parse(s).ok_or_else(|| ConfigError::new(key, origin, "must be \"modified\" or \"traditional\""))
}

fn parse_gauge(key: &str, origin: Origin, s: &str) -> Result<GaugeMode, ConfigError> {
    match s {
        "every_step" => Ok(GaugeMode::EveryStep),
        "off" => Ok(GaugeMode::Off),
        _ => match s.strip_prefix("every_n:").and_then(|n| n.parse::<u32>().ok()) {
            Some(n) if n >= 1 => Ok(GaugeMode::EveryN(n)),
            _ => Err(ConfigError::new(key, origin, "must be \"every_step\", \"off\" or \"every_n:<n>\" with n >= 1")),
        },
    }
}

fn gauge_name(m: GaugeMode) -> String {
    match m {
        GaugeMode::EveryStep => "every_step".into(),
        GaugeMode::Off => "off".into(),
        GaugeMode::EveryN(n) => format!("every_n:{n}"),
    }
}

/// Parses `text`, then applies `overrides` (each `key=value`) on top.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let mut e = Entries { map: BTreeMap::new() };
    for (i, line) in text.lines().enumerate() {
        if let Some((k, v)) = split_line(line) {
            e.insert(k, Origin::Line(i + 1), v, false)?;
        }
    }
    for (i, ov) in overrides.iter().enumerate() {
        let origin = Origin::Override(i + 1);
        let (k, v) = ov
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| ConfigError::new(ov, origin, "expected key=value"))?;
        e.insert(k, origin, v, true)?;
    }
    build(&mut e)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &[])
}

fn build(e: &mut Entries) -> Result<RunConfig, ConfigError> {
    let nx = positive_i(e, "grid.nx", None)? as usize;
    let ny = positive_i(e, "grid.ny", None)? as usize;
    let nz = positive_i(e, "grid.nz", None)? as usize;
    let lx = positive_f(e, "grid.lx", Some(2.0 * PI))?;
    let ly = positive_f(e, "grid.ly", Some(2.0 * PI))?;
    let lz = positive_f(e, "grid.lz", Some(2.0 * PI))?;

    let c = positive_f(e, "physics.c", Some(1.0))?;
    let (gamma, go) = e.float("physics.gamma", Some(5.0 / 3.0))?;
    check(gamma.is_finite() && gamma > 1.0, "physics.gamma", go, "must be finite and > 1")?;

    let (courant, co) = e.float("numerics.courant", Some(0.4))?;
    check(courant > 0.0 && courant <= 1.0, "numerics.courant", co, "must lie in (0, 1]")?;
    let (order, oo) = e.int("numerics.stencil_order", Some(2))?;
    let stencil_order = u32::try_from(order)
        .ok()
        .and_then(StencilOrder::from_int)
        .ok_or_else(|| ConfigError::new("numerics.stencil_order", oo, "must be 2 or 4"))?;
    let (gp, gpo) = e.string("numerics.gauge_policy", Some("every_step"))?;
    let gauge_mode = parse_gauge("numerics.gauge_policy", gpo, &gp)?;
    let gauge_tol = positive_f(e, "numerics.gauge_tol", Some(1e-10))?;
    let (t_end, to) = e.float("numerics.t_end", Some(1.0))?;
    check(t_end.is_finite() && t_end >= 0.0, "numerics.t_end", to, "must be finite and >= 0")?;
    let out_every = positive_i(e, "numerics.out_every", Some(1))? as u64;
    let snapshot_every = nonneg_i(e, "numerics.snapshot_every", 0)?;
    let max_steps = nonneg_i(e, "numerics.max_steps", 0)?;

    let grid = GridSpec::new(nx, ny, nz, lx, ly, lz).map_err(|err| ConfigError::new("grid", Origin::Missing, err.to_string()))?;
    if grid.check_order(stencil_order).is_err() {
        let min = stencil_order.min_cells();
        let (key, n) = [("grid.nx", nx), ("grid.ny", ny), ("grid.nz", nz)].into_iter().find(|(_, n)| *n < min).expect("some axis too small");
        return Err(ConfigError::new(key, Origin::Missing, format!("{n} cells is below the minimum {min} for order {}", stencil_order.as_int())));
    }

    let (form, fo) = e.string("formulation", Some("modified"))?;
    let formulation = parse_formulation("formulation", fo, &form)?;
    let (seed, so) = e.int("seed", Some(1))?;
    check(seed >= 0, "seed", so, "must be a non-negative integer")?;

    let (name, no) = e.string("scenario.name", None)?;
    if !ScenarioSpec::NAMES.contains(&name.as_str()) {
        return Err(ConfigError::new("scenario.name", no, format!("unknown scenario; expected one of {}", ScenarioSpec::NAMES.join(", "))));
    }
    let allowed = scenario_keys(&name);
    for key in e.map.keys().filter(|k| k.starts_with("scenario.")) {
        if !allowed.contains(&&key["scenario.".len()..]) {
            let (o, _) = e.map[key];
            return Err(ConfigError::new(key, o, format!("not used by scenario \"{name}\"")));
        }
    }
    let scenario = match name.as_str() {
        "uniform_rest" => ScenarioSpec::UniformRest {
            rho0: positive_f(e, "scenario.rho0", Some(1.0))?,
            p0: positive_f(e, "scenario.p0", Some(1.0))?,
            b0: finite3(e, "scenario.b0", [0.0; 3])?,
        },
        "alfven" => ScenarioSpec::Alfven {
            rho0: positive_f(e, "scenario.rho0", Some(1.0))?,
            p0: positive_f(e, "scenario.p0", Some(1.0))?,
            b0: finite_f(e, "scenario.b0", 1.0)?,
            delta: finite_f(e, "scenario.delta", 1e-3)?,
            mode: nonzero_mode(e)?,
        },
        "sound" => ScenarioSpec::Sound {
            rho0: positive_f(e, "scenario.rho0", Some(1.0))?,
            p0: positive_f(e, "scenario.p0", Some(0.6))?,
            delta: finite_f(e, "scenario.delta", 1e-4)?,
            mode: nonzero_mode(e)?,
        },
        "random_solenoidal" => ScenarioSpec::RandomSolenoidal {
            rho0: positive_f(e, "scenario.rho0", Some(1.0))?,
            p0: positive_f(e, "scenario.p0", Some(1.0))?,
            b0: finite3(e, "scenario.b0", [1.0, 0.0, 0.0])?,
            amplitude: finite_f(e, "scenario.amplitude", 0.1)?,
            k_max: positive_i(e, "scenario.k_max", Some(2))? as u32,
            seed: seed as u64,
        },
        "orszag_tang" => ScenarioSpec::OrszagTang {
            rho0: positive_f(e, "scenario.rho0", Some(25.0 / (36.0 * PI)))?,
            p0: positive_f(e, "scenario.p0", Some(5.0 / (12.0 * PI)))?,
            a0: finite_f(e, "scenario.a0", 1.0 / (4.0 * PI).sqrt())?,
            v0: finite_f(e, "scenario.v0", 1.0)?,
        },
        _ => ScenarioSpec::Manufactured,
    };

    let (output_dir, _) = e.string("output.dir", Some("out"))?;

    let (identity_resolutions, io) = e.usize_list("identities.resolutions", &[16, 32])?;
    check(!identity_resolutions.is_empty(), "identities.resolutions", io, "must not be empty")?;
    check(
        identity_resolutions.iter().all(|&n| n >= stencil_order.min_cells()),
        "identities.resolutions",
        io,
        "every resolution must meet the stencil minimum",
    )?;

    let d_rho0 = positive_f(e, "dispersion.rho0", Some(1.0))?;
    let d_p0 = positive_f(e, "dispersion.p0", Some(0.6))?;
    let d_h0 = finite3(e, "dispersion.h0", [1.0, 0.0, 0.0])?;
    let d_k = match e.array("dispersion.k") {
        None => vec![[1, 0, 0]],
        Some((o, list)) => {
            let bad = || ConfigError::new("dispersion.k", o, "expected a list of integer triples such as [[1, 0, 0]]");
            let list = if list.iter().all(|v| v.is_integer()) { vec![Value::Array(list)] } else { list };
            let ks = list
                .iter()
                .map(|v| match v {
                    Value::Array(t) if t.len() == 3 => {
                        let mut k = [0i64; 3];
                        for (slot, x) in k.iter_mut().zip(t) {
                            *slot = x.as_integer().ok_or_else(bad)?;
                        }
                        Ok(k)
                    }
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>, _>>()?;
            check(!ks.is_empty(), "dispersion.k", o, "must not be empty")?;
            check(ks.iter().all(|k| *k != [0, 0, 0]), "dispersion.k", o, "wavevector (0, 0, 0) has no propagation direction")?;
            ks
        }
    };
    let (df, dfo) = e.string("dispersion.formulations", Some("both"))?;
    let d_forms = match df.as_str() {
        "both" => vec![Formulation::TraditionalH, Formulation::ModifiedA],
        other => vec![parse_formulation("dispersion.formulations", dfo, other)
            .map_err(|_| ConfigError::new("dispersion.formulations", dfo, "must be \"both\", \"modified\" or \"traditional\""))?],
    };

    let (conv_res, cro) = e.usize_list("convergence.resolutions", &[16, 32, 64])?;
    check(conv_res.len() >= 2, "convergence.resolutions", cro, "a convergence study needs at least two resolutions")?;
    check(conv_res.windows(2).all(|w| w[0] < w[1]), "convergence.resolutions", cro, "must be strictly increasing")?;
    check(
        conv_res.iter().all(|&n| n >= stencil_order.min_cells()),
        "convergence.resolutions",
        cro,
        "every resolution must meet the stencil minimum",
    )?;
    let (t_probe, tpo) = e.float("convergence.t_probe", Some(0.2))?;
    check(t_probe.is_finite() && t_probe >= 0.0, "convergence.t_probe", tpo, "must be finite and >= 0")?;
    let expected_order = match e.take("convergence.expected_order") {
        None => None,
        Some((o, v)) => {
            let x = as_f64(&v).ok_or_else(|| ConfigError::new("convergence.expected_order", o, "expected a number"))?;
            check(x.is_finite() && x > 0.0, "convergence.expected_order", o, "must be finite and > 0")?;
            Some(x)
        }
    };

    debug_assert!(e.map.is_empty(), "unconsumed keys: {:?}", e.map.keys());
    let cfg = RunConfig {
        grid,
        formulation,
        scenario,
        seed: seed as u64,
        c,
        gamma,
        courant,
        stencil_order,
        gauge_mode,
        gauge_tol,
        t_end,
        out_every,
        snapshot_every,
        max_steps,
        output_dir,
        identity_resolutions,
        dispersion: DispersionConfig { rho0: d_rho0, p0: d_p0, h0: d_h0, k: d_k, formulations: d_forms },
        convergence: ConvergenceConfig { resolutions: conv_res, t_probe, expected_order },
    };
    cfg.params().validate().map_err(|m| ConfigError::new("physics", Origin::Missing, m))?;
    Ok(cfg)
}

fn finite3(e: &mut Entries, key: &str, default: [f64; 3]) -> Result<[f64; 3], ConfigError> {
    let (v, o) = e.vec3(key, default)?;
    check(v.iter().all(|x| x.is_finite()), key, o, "must be finite")?;
    Ok(v)
}

fn nonzero_mode(e: &mut Entries) -> Result<i64, ConfigError> {
    let (m, o) = e.int("scenario.mode", Some(1))?;
    check(m != 0, "scenario.mode", o, "must be a nonzero integer")?;
    Ok(m)
}

fn f(x: f64) -> String {
    // Debug formatting is the shortest representation that round-trips.
    format!("{x:?}")
}

fn f3(v: [f64; 3]) -> String {
    format!("[{}, {}, {}]", f(v[0]), f(v[1]), f(v[2]))
}

fn list<T: fmt::Display>(v: &[T]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Writes every key explicitly; `parse_config(&serialize(c)) == c`.
pub fn serialize(c: &RunConfig) -> String {
    let mut out = Vec::new();
    let mut kv = |k: &str, v: String| out.push(format!("{k} = {v}"));
    let g = &c.grid;
    kv("grid.nx", g.nx.to_string());
    kv("grid.ny", g.ny.to_string());
    kv("grid.nz", g.nz.to_string());
    kv("grid.lx", f(g.lx));
    kv("grid.ly", f(g.ly));
    kv("grid.lz", f(g.lz));
    kv("formulation", format!("\"{}\"", c.formulation.name()));
    kv("seed", c.seed.to_string());
    kv("scenario.name", format!("\"{}\"", c.scenario.name()));
    match &c.scenario {
        ScenarioSpec::UniformRest { rho0, p0, b0 } => {
            kv("scenario.rho0", f(*rho0));
            kv("scenario.p0", f(*p0));
            kv("scenario.b0", f3(*b0));
        }
        ScenarioSpec::Alfven { rho0, p0, b0, delta, mode } => {
            kv("scenario.rho0", f(*rho0));
            kv("scenario.p0", f(*p0));
            kv("scenario.b0", f(*b0));
            kv("scenario.delta", f(*delta));
            kv("scenario.mode", mode.to_string());
        }
        ScenarioSpec::Sound { rho0, p0, delta, mode } => {
            kv("scenario.rho0", f(*rho0));
            kv("scenario.p0", f(*p0));
            kv("scenario.delta", f(*delta));
            kv("scenario.mode", mode.to_string());
        }
        ScenarioSpec::RandomSolenoidal { rho0, p0, b0, amplitude, k_max, .. } => {
            kv("scenario.rho0", f(*rho0));
            kv("scenario.p0", f(*p0));
            kv("scenario.b0", f3(*b0));
            kv("scenario.amplitude", f(*amplitude));
            kv("scenario.k_max", k_max.to_string());
        }
        ScenarioSpec::OrszagTang { rho0, p0, a0, v0 } => {
            kv("scenario.rho0", f(*rho0));
            kv("scenario.p0", f(*p0));
            kv("scenario.a0", f(*a0));
            kv("scenario.v0", f(*v0));
        }
        ScenarioSpec::Manufactured => {}
    }
    kv("physics.c", f(c.c));
    kv("physics.gamma", f(c.gamma));
    kv("numerics.courant", f(c.courant));
    kv("numerics.stencil_order", c.stencil_order.as_int().to_string());
    kv("numerics.gauge_policy", format!("\"{}\"", gauge_name(c.gauge_mode)));
    kv("numerics.gauge_tol", f(c.gauge_tol));
    kv("numerics.t_end", f(c.t_end));
    kv("numerics.out_every", c.out_every.to_string());
    kv("numerics.snapshot_every", c.snapshot_every.to_string());
    kv("numerics.max_steps", c.max_steps.to_string());
    kv("output.dir", Value::String(c.output_dir.clone()).to_string());
    kv("identities.resolutions", list(&c.identity_resolutions));
    kv("dispersion.rho0", f(c.dispersion.rho0));
    kv("dispersion.p0", f(c.dispersion.p0));
    kv("dispersion.h0", f3(c.dispersion.h0));
    let ks: Vec<String> = c.dispersion.k.iter().map(|k| list(k)).collect();
    kv("dispersion.k", format!("[{}]", ks.join(", ")));
    let forms = if c.dispersion.formulations.len() == 2 { "both" } else { c.dispersion.formulations[0].name() };
    kv("dispersion.formulations", format!("\"{forms}\""));
    kv("convergence.resolutions", list(&c.convergence.resolutions));
    kv("convergence.t_probe", f(c.convergence.t_probe));
    if let Some(o) = c.convergence.expected_order {
        kv("convergence.expected_order", f(o));
    }
    out.join("\n") + "\n"
}
