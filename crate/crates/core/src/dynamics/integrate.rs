use std::f64::consts::PI;

use super::{rhs, DynamicsError, Magnetic, Rates, SimState};
use crate::fieldkit::{div, helmholtz_project};
use crate::params::PhysParams;

/// Extra source terms added to the right-hand side, e.g. by a manufactured
/// solution.
pub trait Forcing {
    fn add_source(&self, t: f64, rates: &mut Rates);
}

#[derive(Default, Clone, Copy)]
pub struct StepContext<'a> {
    /// Zero-based index of the step being taken; drives `GaugeMode::EveryN`.
    pub index: u64,
    pub forcing: Option<&'a dyn Forcing>,
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub state: SimState,
    /// `||div A||_2` after the Runge-Kutta update, before any projection.
    /// Zero for the traditional formulation.
    pub gauge_drift: f64,
    pub projected: bool,
}

fn eval(state: &SimState, params: &PhysParams, forcing: Option<&dyn Forcing>) -> Result<Rates, DynamicsError> {
    let mut r = rhs(state, params)?;
    if let Some(f) = forcing {
        f.add_source(state.t, &mut r);
    }
    Ok(r)
}

/// One classical four-stage Runge-Kutta step, followed by the gauge
/// projection if the policy calls for it on this step.
pub fn step_rk4(state: &SimState, dt: f64, params: &PhysParams, ctx: StepContext<'_>) -> Result<StepResult, DynamicsError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(DynamicsError::InvalidTimeStep(dt));
    }
    let f = ctx.forcing;
    let half = 0.5 * dt;

    let k1 = eval(state, params, f)?;
    let mut y = state.add_scaled(half, &k1);
    y.t = state.t + half;
    let k2 = eval(&y, params, f)?;
    let mut y = state.add_scaled(half, &k2);
    y.t = state.t + half;
    let k3 = eval(&y, params, f)?;
    let mut y = state.add_scaled(dt, &k3);
    y.t = state.t + dt;
    let k4 = eval(&y, params, f)?;

    let mut sum = k1;
    sum.axpy(2.0, &k2);
    sum.axpy(2.0, &k3);
    sum.axpy(1.0, &k4);
    let mut next = state.add_scaled(dt / 6.0, &sum);
    next.t = state.t + dt;

    let (next, gauge_drift, projected) = if params.gauge.applies_after(ctx.index) {
        let (s, drift) = enforce_gauge(&next, params)?;
        (s, drift, true)
    } else {
        let drift = gauge_drift(&next, params);
        (next, drift, false)
    };
    Ok(StepResult { state: next, gauge_drift, projected })
}

/// `||div A_periodic||_2`, or zero for the traditional formulation.
pub fn gauge_drift(state: &SimState, params: &PhysParams) -> f64 {
    match &state.magnetic {
        Magnetic::Potential { a, .. } => div(a, params.order).l2(),
        Magnetic::Field { .. } => 0.0,
    }
}

/// Projects `A_periodic` onto its divergence-free part. Returns the new
/// state and the divergence norm measured before projection.
pub fn enforce_gauge(state: &SimState, params: &PhysParams) -> Result<(SimState, f64), DynamicsError> {
    match &state.magnetic {
        Magnetic::Potential { a, bg } => {
            let drift = div(a, params.order).l2();
            let (projected, _) = helmholtz_project(a, params.gauge.tol, params.order)?;
            let out = SimState { magnetic: Magnetic::Potential { a: projected, bg: *bg }, ..state.clone() };
            Ok((out, drift))
        }
        Magnetic::Field { .. } => Ok((state.clone(), 0.0)),
    }
}

/// Largest signal speed `|v| + v_A + c_s` over the grid.
pub fn max_signal_speed(state: &SimState, params: &PhysParams) -> f64 {
    let h = state.h_total(params);
    let mut s_max = 0.0_f64;
    for idx in 0..state.grid().len() {
        let rho = state.rho.data()[idx];
        let p = state.p.data()[idx];
        let v = state.v.at(idx);
        let b = h.at(idx);
        let speed = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let b2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
        let va = (b2 / (4.0 * PI * rho)).sqrt();
        let cs = (params.gamma * p / rho).sqrt();
        s_max = s_max.max(speed + va + cs);
    }
    s_max
}

/// `dt = courant * h_min / max(|v| + v_A + c_s)`, identical for both
/// formulations.
pub fn cfl_dt(state: &SimState, params: &PhysParams) -> Result<f64, DynamicsError> {
    super::validate_state(state)?;
    let s_max = max_signal_speed(state, params);
    let dt = params.courant * state.grid().h_min() / s_max;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(DynamicsError::InvalidTimeStep(dt));
    }
    Ok(dt)
}
