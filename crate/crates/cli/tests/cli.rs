//! End-to-end tests of the `modmhd` binary.

use std::path::Path;
use std::process::{Command, Output};

use modmhd_cli::output::parse_diagnostics_csv;
use modmhd_cli::snapshot::{read_snapshot, SnapshotError};

fn modmhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modmhd")).args(args).output().expect("spawn modmhd")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_cfg(dir: &Path, body: &str) -> String {
    let p = dir.join("test.cfg");
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

const REST: &str = "grid.nx = 8\ngrid.ny = 8\ngrid.nz = 8\nscenario.name = \"uniform_rest\"\nscenario.b0 = [0.2, 0.0, 0.5]\n";

#[test]
fn fixed_point_ten_steps_gives_eleven_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &format!("{REST}numerics.t_end = 100.0\nnumerics.max_steps = 10\n"));
    let out = dir.path().join("o");
    let o = modmhd(&["run", "--config", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let recs = parse_diagnostics_csv(&std::fs::read_to_string(out.join("diagnostics.csv")).unwrap()).unwrap();
    assert_eq!(recs.len(), 11);
    let m0 = recs[0].mass;
    assert!(recs.iter().all(|r| (r.mass - m0).abs() <= 1e-12 * m0));
    assert!(recs.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn zero_end_time_gives_a_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &format!("{REST}numerics.t_end = 0.0\n"));
    let out = dir.path().join("o");
    let o = modmhd(&["run", "--config", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert_eq!(read_snapshot(&out.join("final.bin")).unwrap().t, 0.0);
}

#[test]
fn reruns_are_bitwise_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "grid.nx = 8\ngrid.ny = 8\ngrid.nz = 8\nscenario.name = \"orszag_tang\"\nformulation = \"traditional\"\nnumerics.t_end = 0.05\n",
    );
    let mut csvs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        assert_eq!(code(&modmhd(&["run", "--config", &cfg, "--out-dir", out.to_str().unwrap()])), 0);
        csvs.push(std::fs::read(out.join("diagnostics.csv")).unwrap());
    }
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn periodic_snapshots_and_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &format!("{REST}numerics.max_steps = 4\nnumerics.snapshot_every = 2\n"));
    let out = dir.path().join("o");
    assert_eq!(code(&modmhd(&["run", "--config", &cfg, "--out-dir", out.to_str().unwrap()])), 0);
    for name in ["snapshot_000000.bin", "snapshot_000002.bin", "snapshot_000004.bin", "final.bin", "config.resolved"] {
        assert!(out.join(name).exists(), "{name}");
    }
    // the resolved config reproduces the run
    let resolved = out.join("config.resolved");
    let again = dir.path().join("again");
    let o = modmhd(&["run", "--config", resolved.to_str().unwrap(), "--out-dir", again.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read(out.join("final.bin")).unwrap(), std::fs::read(again.join("final.bin")).unwrap());
}

#[test]
fn config_errors_exit_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "grid.nx = -4\ngrid.ny = 8\ngrid.nz = 8\nscenario.name = \"sound\"\n");
    let o = modmhd(&["run", "--config", &cfg]);
    assert_eq!(code(&o), 2);
    let e = stderr(&o);
    assert!(e.contains("grid.nx") && e.contains("line 1") && e.contains("positive"), "{e}");

    let cfg = write_cfg(dir.path(), &format!("{REST}numerics.courrant = 0.3\n"));
    let o = modmhd(&["run", "--config", &cfg]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown key"));

    assert_eq!(code(&modmhd(&["run", "--config", "/nonexistent/x.cfg"])), 2);
    assert_eq!(code(&modmhd(&["frobnicate"])), 2);
    assert_eq!(code(&modmhd(&["run", "--set", "noequals"])), 2);
}

#[test]
fn empty_identity_resolutions_exit_two() {
    let o = modmhd(&[
        "identities", "--set", "grid.nx=8", "--set", "grid.ny=8", "--set", "grid.nz=8",
        "--set", "scenario.name=\"uniform_rest\"", "--set", "identities.resolutions=[]",
    ]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn identities_pass_on_a_correct_build() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), REST);
    let out = dir.path().join("o");
    let o = modmhd(&["identities", "--config", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = String::from_utf8_lossy(&o.stdout);
    assert!(!table.contains("FAIL"), "{table}");
    let csv = std::fs::read_to_string(out.join("identities.csv")).unwrap();
    assert!(csv.starts_with("id,kind,quantity,n16,n32,order,passed\n"));
    for id in ["a", "b", "c", "d", "e", "f"] {
        assert!(csv.lines().any(|l| l.starts_with(&format!("{id},")) && l.contains(",residual,")), "{id}");
    }
}

#[test]
fn dispersion_traditional_parallel_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = modmhd(&[
        "dispersion", "--out-dir", out.to_str().unwrap(), "--set", "grid.nx=64", "--set", "grid.ny=4",
        "--set", "grid.nz=4", "--set", "scenario.name=\"uniform_rest\"", "--set", "dispersion.formulations=\"traditional\"",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("dispersion.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("kx,ky,kz,formulation,index,re_omega,im_omega"));
    let omegas: Vec<f64> = lines.map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect();
    assert_eq!(omegas.len(), 16);
    let h = 2.0 * std::f64::consts::PI / 64.0;
    let kt = h.sin() / h;
    let va = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    let cs = (5.0f64 / 3.0 * 0.6).sqrt();
    let mut pos: Vec<f64> = omegas.into_iter().filter(|w| *w > 1e-9).collect();
    pos.sort_by(f64::total_cmp);
    let want = [va, va, va, va, cs, cs].map(|s| s * kt);
    for (w, e) in pos.iter().zip(want) {
        assert!((w - e).abs() <= 5e-3 * e, "{w} vs {e}");
    }
}

#[test]
fn dispersion_zero_field_blocks_agree_and_zero_k_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let base = [
        "dispersion", "--out-dir", out.to_str().unwrap(), "--set", "grid.nx=16", "--set", "grid.ny=16",
        "--set", "grid.nz=16", "--set", "scenario.name=\"uniform_rest\"", "--set", "dispersion.h0=[0, 0, 0]",
    ];
    let mut args = base.to_vec();
    args.extend(["--set", "dispersion.k=[[1, 2, -1], [0, 0, 3]]"]);
    let o = modmhd(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("dispersion.csv")).unwrap();
    let block = |f: &str, k: &str| -> Vec<f64> {
        csv.lines().filter(|l| l.starts_with(k) && l.contains(f)).map(|l| l.split(',').nth(5).unwrap().parse().unwrap()).collect()
    };
    for k in ["1,2,-1,", "0,0,3,"] {
        let (m, t) = (block("modified", k), block("traditional", k));
        assert_eq!(m.len(), 16);
        let scale = m.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        for (a, b) in m.iter().zip(&t) {
            assert!((a - b).abs() <= 1e-6 * scale);
        }
    }

    let mut args = base.to_vec();
    args.extend(["--set", "dispersion.k=[0, 0, 0]"]);
    assert_eq!(code(&modmhd(&args)), 2);
    let mut args = base.to_vec();
    args.extend(["--set", "dispersion.k=[[9, 0, 0]]"]);
    assert_eq!(code(&modmhd(&args)), 2, "unresolved wavevector");
}

#[test]
fn convergence_alfven_traditional_is_second_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "grid.nx = 16\ngrid.ny = 4\ngrid.nz = 4\nscenario.name = \"alfven\"\nformulation = \"traditional\"\nconvergence.t_probe = 1.0\nconvergence.expected_order = 2.0\n",
    );
    let out = dir.path().join("o");
    let o = modmhd(&["convergence", "--config", &cfg, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("convergence.csv")).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    let order: f64 = rows[0][6].parse().unwrap();
    assert!((order - 2.0).abs() <= 0.3);
    // independent two-point orders from the error column
    let errs: Vec<f64> = rows.iter().map(|r| r[5].parse().unwrap()).collect();
    for w in errs.windows(2) {
        assert!(((w[0] / w[1]).log2() - 2.0).abs() <= 0.3);
    }

    let o = modmhd(&["convergence", "--config", &cfg, "--set", "convergence.resolutions=[32]"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn numerical_failure_exits_three_with_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = modmhd(&[
        "run", "--out-dir", out.to_str().unwrap(), "--set", "grid.nx=32", "--set", "grid.ny=4", "--set", "grid.nz=4",
        "--set", "scenario.name=\"alfven\"", "--set", "numerics.gauge_tol=1e-30",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("did not converge"));
    let recs = parse_diagnostics_csv(&std::fs::read_to_string(out.join("diagnostics.csv")).unwrap()).unwrap();
    assert!(!recs.is_empty());
    assert!(out.join("last_good.bin").exists());
    let leftovers: Vec<_> = std::fs::read_dir(&out).unwrap().filter_map(|e| e.ok()).filter(|e| e.file_name().to_string_lossy().ends_with(".tmp")).collect();
    assert!(leftovers.is_empty());
}

#[test]
fn info_lists_defaults_and_formats() {
    let o = modmhd(&["info"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("version 1"));
    assert!(s.contains("numerics.courant"));
    assert!(s.contains("divA_l2"));
}

#[test]
fn truncated_and_future_snapshots_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), &format!("{REST}numerics.t_end = 0.0\n"));
    let out = dir.path().join("o");
    assert_eq!(code(&modmhd(&["run", "--config", &cfg, "--out-dir", out.to_str().unwrap()])), 0);
    let bytes = std::fs::read(out.join("final.bin")).unwrap();
    let cut = dir.path().join("cut.bin");
    std::fs::write(&cut, &bytes[..bytes.len() / 2]).unwrap();
    let err = read_snapshot(&cut).unwrap_err();
    assert!(matches!(err, SnapshotError::Truncated { .. }));
    assert!(err.to_string().contains("truncated"));
    let mut v2 = bytes.clone();
    v2[8..12].copy_from_slice(&2u32.to_le_bytes());
    let future = dir.path().join("v2.bin");
    std::fs::write(&future, v2).unwrap();
    assert!(read_snapshot(&future).unwrap_err().to_string().contains("version 2"));
}
