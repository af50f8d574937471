//! Subcommand implementations. Each returns an [`Exit`] and writes its
//! human-readable report to `out`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use modmhd_core::analysis::{
    convergence_study, dispersion, identity_suite, Background, ConvergenceError, DispersionError, IdentityKind,
    IdentityReport, Reference, ORDER_SLACK,
};
use modmhd_core::dynamics::{run, Formulation, RunControl, SimState};
use modmhd_core::fieldkit::{Central, DiffOps, FieldError};
use modmhd_core::scenarios::ScenarioError;

use crate::config::{serialize, RunConfig, KEYS};
use crate::output::{diagnostics_csv, fmt_f64, write_atomic};
use crate::snapshot::{write_snapshot, VERSION};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    /// A physics or consistency check did not hold.
    CheckFailed = 1,
    Config = 2,
    /// Numerical failure or I/O failure while producing results.
    Numerical = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CmdError {
    pub exit: Exit,
    pub message: String,
}

impl CmdError {
    fn config(m: impl Into<String>) -> Self {
        Self { exit: Exit::Config, message: m.into() }
    }
    fn numerical(m: impl Into<String>) -> Self {
        Self { exit: Exit::Numerical, message: m.into() }
    }
    fn check(m: impl Into<String>) -> Self {
        Self { exit: Exit::CheckFailed, message: m.into() }
    }
}

pub type CmdResult = Result<(), CmdError>;

fn io_err(path: &Path, e: std::io::Error) -> CmdError {
    CmdError::numerical(format!("cannot write {}: {e}", path.display()))
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CmdError> {
    let path = dir.join(name);
    write_atomic(&path, text.as_bytes()).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

fn prepare_dir(cfg: &RunConfig) -> Result<PathBuf, CmdError> {
    let dir = PathBuf::from(&cfg.output_dir);
    std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    Ok(dir)
}

fn scenario_err(e: ScenarioError) -> CmdError {
    match e {
        ScenarioError::State(_) | ScenarioError::Field(FieldError::NotConverged { .. }) => {
            CmdError::numerical(format!("scenario: {e}"))
        }
        _ => CmdError::config(format!("scenario: {e}")),
    }
}

/// Runs the configured scenario, writing `diagnostics.csv`, snapshots and
/// the fully resolved configuration to the output directory.
pub fn cmd_run(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let params = cfg.params();
    let scenario = cfg.scenario.build(&cfg.grid, cfg.formulation, &params).map_err(scenario_err)?;
    let dir = prepare_dir(cfg)?;
    for w in &scenario.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    write_file(&dir, "config.resolved", &serialize(cfg))?;

    let control = RunControl {
        t_end: cfg.t_end,
        out_every: cfg.out_every,
        max_steps: (cfg.max_steps > 0).then_some(cfg.max_steps),
    };
    let mut snap_err: Option<CmdError> = None;
    let every = cfg.snapshot_every;
    let mut observer = |s: &SimState, step: u64| {
        if every > 0 && step.is_multiple_of(every) && snap_err.is_none() {
            let path = dir.join(format!("snapshot_{step:06}.bin"));
            if let Err(e) = write_snapshot(s, &path) {
                snap_err = Some(CmdError::numerical(e.to_string()));
            }
        }
    };
    let result = run(&scenario.state, &params, &control, scenario.forcing(), &mut observer);
    match result {
        Ok(outcome) => {
            write_file(&dir, "diagnostics.csv", &diagnostics_csv(&outcome.records))?;
            let final_path = dir.join("final.bin");
            write_snapshot(&outcome.state, &final_path).map_err(|e| CmdError::numerical(e.to_string()))?;
            if let Some(e) = snap_err {
                return Err(e);
            }
            let last = outcome.records.last().expect("initial record");
            let first = outcome.records.first().expect("initial record");
            let _ = writeln!(
                out,
                "{} {} on {:?}: {} steps to t = {}; mass drift {:e}, energy drift {:e}, max div A {:e}",
                cfg.scenario.name(),
                cfg.formulation.name(),
                cfg.grid.dims(),
                outcome.steps,
                outcome.state.t,
                (last.mass - first.mass) / first.mass,
                (last.e_tot - first.e_tot) / first.e_tot,
                outcome.records.iter().map(|r| r.div_a_max).fold(0.0, f64::max),
            );
            Ok(())
        }
        Err(failure) => {
            // keep whatever was produced before the failure
            write_file(&dir, "diagnostics.csv", &diagnostics_csv(&failure.records))?;
            let _ = write_snapshot(&failure.state, &dir.join("last_good.bin"));
            Err(CmdError::numerical(failure.to_string()))
        }
    }
}

fn kind_name(k: IdentityKind) -> &'static str {
    match k {
        IdentityKind::Exact => "exact",
        IdentityKind::Convergent => "convergent",
        IdentityKind::Positive => "positive",
        IdentityKind::Info => "info",
    }
}

pub fn identities_csv(report: &IdentityReport) -> String {
    let mut s = String::from("id,kind,quantity");
    for n in &report.resolutions {
        let _ = write!(s, ",n{n}");
    }
    s.push_str(",order,passed\n");
    for row in &report.rows {
        let opt = |o: Option<f64>| o.map(fmt_f64).unwrap_or_default();
        let passed = row.passed.map(|p| p.to_string()).unwrap_or_default();
        let vals = |v: &[f64]| v.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "{},{},residual,{},{},{}", row.id, kind_name(row.kind), vals(&row.residuals), opt(row.order), passed);
        for (name, v) in &row.extra {
            let _ = writeln!(s, "{},{},{},{},,", row.id, kind_name(row.kind), name, vals(v));
        }
    }
    s
}

fn identities_table(report: &IdentityReport) -> String {
    let mut s = format!("identity suite, stencil order {}\n", report.stencil_order);
    let _ = write!(s, "{:<4} {:<11}", "id", "kind");
    for n in &report.resolutions {
        let _ = write!(s, " {:>12}", format!("n={n}"));
    }
    let _ = writeln!(s, " {:>7}  result  description", "order");
    for row in &report.rows {
        let _ = write!(s, "{:<4} {:<11}", row.id, kind_name(row.kind));
        for r in &row.residuals {
            let _ = write!(s, " {r:>12.3e}");
        }
        let order = row.order.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into());
        let result = match row.passed {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "-",
        };
        let _ = writeln!(s, " {order:>7}  {result:<6}  {}", row.name);
    }
    s
}

pub fn cmd_identities(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    cmd_identities_with(cfg, &Central(cfg.stencil_order), out)
}

/// Same as [`cmd_identities`] with caller-supplied difference operators.
pub fn cmd_identities_with(cfg: &RunConfig, ops: &dyn DiffOps, out: &mut dyn Write) -> CmdResult {
    if cfg.identity_resolutions.is_empty() {
        return Err(CmdError::config("identities.resolutions: must not be empty"));
    }
    let report = identity_suite(&cfg.identity_resolutions, &cfg.params(), ops).map_err(CmdError::config)?;
    let dir = prepare_dir(cfg)?;
    write_file(&dir, "identities.csv", &identities_csv(&report))?;
    let _ = out.write_all(identities_table(&report).as_bytes());
    let failed: Vec<&str> = report.failures().iter().map(|r| r.id).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CmdError::check(format!("identities failed: {}", failed.join(", "))))
    }
}

fn dispersion_err(e: DispersionError) -> CmdError {
    match e {
        DispersionError::Rhs(_) => CmdError::numerical(e.to_string()),
        _ => CmdError::config(format!("dispersion: {e}")),
    }
}

/// Relative tolerance for the zero-field agreement check between the two
/// formulations.
pub const HYDRO_LIMIT_TOL: f64 = 1e-6;

pub fn cmd_dispersion(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let d = &cfg.dispersion;
    let params = cfg.params();
    let bg = Background::new(d.rho0, d.p0, d.h0);
    let mut csv = String::from("kx,ky,kz,formulation,index,re_omega,im_omega\n");
    let mut blocks: Vec<(Formulation, [i64; 3], Vec<f64>)> = Vec::new();
    let _ = writeln!(
        out,
        "background rho0 = {}, P0 = {}, H0 = {:?}; v_A = {:.6}, c_s = {:.6}",
        d.rho0,
        d.p0,
        d.h0,
        bg.alfven_speed(),
        bg.sound_speed(cfg.gamma)
    );
    for &k in &d.k {
        for &f in &d.formulations {
            let r = dispersion(&bg, k, f, &params, &cfg.grid).map_err(dispersion_err)?;
            for (i, w) in r.omega.iter().enumerate() {
                let _ = writeln!(csv, "{},{},{},{},{i},{},{}", k[0], k[1], k[2], f.name(), fmt_f64(w.re), fmt_f64(w.im));
            }
            let mut speeds = r.phase_speeds();
            speeds.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1e-300));
            let shown: Vec<String> = speeds.iter().map(|s| format!("{s:.6}")).collect();
            let _ = writeln!(out, "k = {k:?} {:<11} |k~| = {:.6}  distinct phase speeds: {}", f.name(), r.k_tilde_norm(), shown.join(" "));
            if r.eps_warning {
                let _ = writeln!(out, "warning: eigenvalues sensitive to the linearization step ({:e})", r.eps_sensitivity);
            }
            blocks.push((f, k, r.omega.iter().map(|w| w.re).collect()));
        }
    }
    let dir = prepare_dir(cfg)?;
    write_file(&dir, "dispersion.csv", &csv)?;

    if d.h0 == [0.0; 3] && d.formulations.len() == 2 {
        for &k in &d.k {
            let block = |f: Formulation| &blocks.iter().find(|(g, kk, _)| *g == f && *kk == k).expect("computed").2;
            let (a, b) = (block(Formulation::ModifiedA), block(Formulation::TraditionalH));
            let scale = a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
            let diff = a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale;
            let _ = writeln!(out, "k = {k:?}: zero-field formulations differ by {diff:.3e} (relative)");
            if diff > HYDRO_LIMIT_TOL {
                return Err(CmdError::check(format!("zero-field limit mismatch {diff:e} at k = {k:?}")));
            }
        }
    }
    Ok(())
}

pub fn cmd_convergence(cfg: &RunConfig, out: &mut dyn Write) -> CmdResult {
    let c = &cfg.convergence;
    let report = convergence_study(&cfg.scenario, &cfg.grid, &c.resolutions, c.t_probe, cfg.formulation, &cfg.params())
        .map_err(|e| match e {
            ConvergenceError::Run { .. } => CmdError::numerical(e.to_string()),
            ConvergenceError::Scenario(inner) => scenario_err(inner),
            ConvergenceError::InvalidSweep(m) => CmdError::config(format!("convergence: {m}")),
        })?;
    let reference = match report.reference {
        Reference::Exact => "exact",
        Reference::FinestGrid => "finest_grid",
    };
    let order = report.order.map(fmt_f64).unwrap_or_default();
    let mut csv = String::from("scenario,formulation,reference,n,steps,error,fitted_order\n");
    for ((n, e), s) in report.resolutions.iter().zip(&report.errors).zip(&report.steps) {
        let _ = writeln!(csv, "{},{},{reference},{n},{s},{},{order}", report.scenario, report.formulation.name(), fmt_f64(*e));
    }
    let dir = prepare_dir(cfg)?;
    write_file(&dir, "convergence.csv", &csv)?;
    for (n, e) in report.resolutions.iter().zip(&report.errors) {
        let _ = writeln!(out, "n = {n:>4}  error = {e:.6e}");
    }
    match report.order {
        Some(o) => {
            let _ = writeln!(out, "fitted order {o:.3} (reference: {reference})");
        }
        None => {
            let _ = writeln!(out, "fitted order undefined (errors at roundoff)");
        }
    }
    if let Some(expected) = c.expected_order {
        match report.order {
            Some(o) if (o - expected).abs() <= ORDER_SLACK => {}
            Some(o) => return Err(CmdError::check(format!("fitted order {o:.3} outside {expected} +/- {ORDER_SLACK}"))),
            None => return Err(CmdError::check(format!("fitted order undefined, expected {expected} +/- {ORDER_SLACK}"))),
        }
    }
    Ok(())
}

pub fn cmd_info(out: &mut dyn Write) -> CmdResult {
    let mut s = format!("modmhd {}\n", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "snapshot format: magic MODMHD1\\0, version {VERSION}, little-endian");
    let _ = writeln!(s, "diagnostics.csv columns: {}", modmhd_core::analysis::DiagnosticsRecord::COLUMNS.join(","));
    let _ = writeln!(s, "exit codes: 0 success, 1 check failed, 2 config error, 3 numerical failure");
    let _ = writeln!(s, "\nconfiguration keys and defaults:");
    for (k, d) in KEYS {
        let _ = writeln!(s, "  {k:<28} {d}");
    }
    out.write_all(s.as_bytes()).map_err(|e| CmdError::numerical(e.to_string()))
}
