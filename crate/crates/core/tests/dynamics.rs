//! Whole-run behaviour of both formulations.

use std::f64::consts::PI;

use modmhd_core::analysis::diagnostics;
use modmhd_core::dynamics::{run, Formulation, Magnetic, RunControl, SimState};
use modmhd_core::fieldkit::GridSpec;
use modmhd_core::scenarios::ScenarioSpec;
use modmhd_core::PhysParams;

fn run_to(s: &SimState, params: &PhysParams, t: f64) -> SimState {
    run(s, params, &RunControl::until(t), None, &mut |_, _| {}).unwrap().state
}

fn line_grid(n: usize) -> GridSpec {
    GridSpec::new(n, 4, 4, 2.0 * PI, 2.0 * PI, 2.0 * PI).unwrap()
}

/// Phase of `f` against `sin x` / `cos x`, such that `sin(x - phi)`.
fn phase(f: &modmhd_core::fieldkit::ScalarField, offset: f64) -> f64 {
    let g = *f.grid();
    let (mut s, mut c) = (0.0, 0.0);
    for (idx, [x, _, _]) in g.points() {
        let v = f.data()[idx] - offset;
        s += v * x.sin();
        c += v * x.cos();
    }
    // sin(x - phi) = sin x cos phi - cos x sin phi
    (-c).atan2(s)
}

#[test]
fn sound_wave_travels_at_the_sound_speed() {
    let params = PhysParams::default();
    let (rho0, p0) = (1.0, 0.6);
    let cs = (params.gamma * p0 / rho0).sqrt();
    let g = line_grid(64);
    for f in [Formulation::ModifiedA, Formulation::TraditionalH] {
        let s0 = ScenarioSpec::Sound { rho0, p0, delta: 1e-5, mode: 1 }.build(&g, f, &params).unwrap().state;
        let t = 1.0;
        let s1 = run_to(&s0, &params, t);
        let speed = (phase(&s1.rho, rho0) - phase(&s0.rho, rho0)) / t;
        let h = g.spacing()[0];
        // semi-discrete speed is c_s sin(h)/h
        let expected = cs * h.sin() / h;
        assert!((speed - expected).abs() < 1e-3 * cs, "{}: {speed} vs {expected}", f.name());
    }
}

#[test]
fn without_magnetic_field_both_formulations_coincide() {
    let params = PhysParams::default();
    let g = line_grid(32);
    let spec = ScenarioSpec::Sound { rho0: 1.0, p0: 0.6, delta: 1e-2, mode: 2 };
    let a = run_to(&spec.build(&g, Formulation::ModifiedA, &params).unwrap().state, &params, 0.5);
    let b = run_to(&spec.build(&g, Formulation::TraditionalH, &params).unwrap().state, &params, 0.5);
    assert_eq!(a.v, b.v);
    assert_eq!(a.rho, b.rho);
    assert_eq!(a.p, b.p);
}

#[test]
fn orszag_tang_conserves_mass_and_momentum() {
    let params = PhysParams::default();
    let g = GridSpec::cube(16).unwrap();
    // gentle amplitudes: central differences carry no shock dissipation
    let spec = ScenarioSpec::OrszagTang { rho0: 1.0, p0: 1.0, a0: 0.3, v0: 0.2 };
    let s0 = spec.build(&g, Formulation::TraditionalH, &params).unwrap().state;
    let out = run(&s0, &params, &RunControl::steps(30), None, &mut |_, _| {}).unwrap();
    let (first, last) = (out.records.first().unwrap(), out.records.last().unwrap());
    assert!((last.mass - first.mass).abs() <= 1e-12 * first.mass);
    // central differences conserve the flux-form momentum of the field form
    let p_scale = first.mass;
    for d in 0..3 {
        assert!((last.momentum[d] - first.momentum[d]).abs() <= 1e-10 * p_scale, "{d}: {:?} {:?}", first.momentum, last.momentum);
    }
    assert!((last.e_tot - first.e_tot).abs() <= 1e-3 * first.e_tot);
}

#[test]
fn modified_orszag_tang_keeps_the_potential_solenoidal() {
    let params = PhysParams::default();
    let g = GridSpec::cube(16).unwrap();
    let spec = ScenarioSpec::OrszagTang { rho0: 1.0, p0: 1.0, a0: 0.3, v0: 0.3 };
    let s0 = spec.build(&g, Formulation::ModifiedA, &params).unwrap().state;
    let out = run(&s0, &params, &RunControl::steps(20), None, &mut |s, _| {
        let Magnetic::Potential { a, .. } = &s.magnetic else { unreachable!() };
        let rec = diagnostics(s, &params);
        assert!(rec.div_a_l2 <= 1e-9 * a.l2() / g.h_min(), "{}", rec.div_a_l2);
    })
    .unwrap();
    assert_eq!(out.steps, 20);
    let (first, last) = (out.records.first().unwrap(), out.records.last().unwrap());
    assert!((last.mass - first.mass).abs() <= 1e-12 * first.mass);
}

#[test]
fn alfven_potential_form_is_dispersive_in_the_symmetric_gauge() {
    // The potential-form transverse branch travels at v_A / sqrt(2) for the
    // symmetric background encoding; the field-form wave at v_A.
    let params = PhysParams::default();
    let g = line_grid(64);
    let spec = ScenarioSpec::Alfven { rho0: 1.0, p0: 1.0, b0: 1.0, delta: 1e-4, mode: 1 };
    let va = 1.0 / (4.0 * PI).sqrt();
    let s0 = spec.build(&g, Formulation::TraditionalH, &params).unwrap().state;
    let t = 2.0;
    let s1 = run_to(&s0, &params, t);
    let hy = |s: &SimState| s.magnetic.evolved().y().clone();
    // H_y = delta cos(x - v t) = sin(x - v t + pi/2)
    let speed = (phase(&hy(&s1), 0.0) - phase(&hy(&s0), 0.0)) / t;
    assert!((speed - va).abs() < 5e-3 * va, "{speed}");

    let m0 = spec.build(&g, Formulation::ModifiedA, &params).unwrap().state;
    let m1 = run_to(&m0, &params, t);
    let vy = |s: &SimState| s.v.y().clone();
    let before = vy(&m0).l2();
    let after = vy(&m1).l2();
    // the initial condition is not an eigenmode of the potential form, so
    // the transverse velocity is not merely translated
    assert!((after - before).abs() > 1e-3 * before, "{before} {after}");
}
