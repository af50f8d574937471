//! Semidiscrete right-hand sides of both formulations.

use std::f64::consts::PI;

use super::{DynamicsError, Magnetic, Rates, SimState};
use crate::emcore::{force_modified_from_a, h_from_a};
use crate::fieldkit::{advect, curl, div, grad, ScalarField, VectorField};
use crate::params::PhysParams;

/// Rejects non-finite fields and non-positive density or pressure, naming
/// the first offending quantity.
pub fn validate_state(state: &SimState) -> Result<(), DynamicsError> {
    let (mag_name, mag) = match &state.magnetic {
        Magnetic::Potential { a, .. } => (["A_x", "A_y", "A_z"], a),
        Magnetic::Field { h, .. } => (["H_x", "H_y", "H_z"], h),
    };
    let finite = |name: &'static str, f: &ScalarField| -> Result<(), DynamicsError> {
        match f.data().iter().position(|v| !v.is_finite()) {
            Some(index) => Err(DynamicsError::InvalidState { quantity: name, index, value: f.data()[index] }),
            None => Ok(()),
        }
    };
    for c in 0..3 {
        finite(mag_name[c], mag.comp(c))?;
    }
    for (c, name) in ["v_x", "v_y", "v_z"].into_iter().enumerate() {
        finite(name, state.v.comp(c))?;
    }
    for (name, f) in [("rho", &state.rho), ("P", &state.p)] {
        finite(name, f)?;
        if let Some(index) = f.data().iter().position(|&v| v <= 0.0) {
            return Err(DynamicsError::InvalidState { quantity: name, index, value: f.data()[index] });
        }
    }
    Ok(())
}

/// Shared fluid terms: `(-(v.grad)v - grad P / rho + f / rho, -div(rho v), -v.grad P - gamma P div v)`.
fn fluid_rates(state: &SimState, force: &VectorField, params: &PhysParams) -> (VectorField, ScalarField, ScalarField) {
    let o = params.order;
    let inv_rho = state.rho.map(|r| 1.0 / r);
    let grad_p = grad(&state.p, o);
    let dv = advect(&state.v, &state.v, o)
        .scale(-1.0)
        .sub(&grad_p.mul_scalar(&inv_rho))
        .add(&force.mul_scalar(&inv_rho));
    let drho = div(&state.v.mul_scalar(&state.rho), o).scale(-1.0);
    let div_v = div(&state.v, o);
    let dp = state
        .v
        .dot(&grad_p)
        .scale(-1.0)
        .sub(&state.p.mul(&div_v).scale(params.gamma));
    (dv, drho, dp)
}

/// Modified system:
/// `dA/dt = v x H`, `dv/dt = -(v.grad)v - grad P/rho + f/rho` with
/// `f = -(1/4 pi)[(curl curl A).grad]A`, continuity, adiabatic pressure.
pub fn rhs_modified(state: &SimState, params: &PhysParams) -> Result<Rates, DynamicsError> {
    let Magnetic::Potential { a, bg } = &state.magnetic else {
        return Err(DynamicsError::FormulationMismatch { expected: "modified" });
    };
    validate_state(state)?;
    let h = h_from_a(a, bg, params);
    let da = state.v.cross(&h);
    let force = force_modified_from_a(a, bg, params);
    let (dv, drho, dp) = fluid_rates(state, &force, params);
    Ok(Rates { magnetic: da, v: dv, rho: drho, p: dp })
}

/// Traditional system:
/// `dH/dt = curl(v x H)`, Lorentz force `(curl H) x H / 4 pi`, continuity,
/// adiabatic pressure.
pub fn rhs_traditional(state: &SimState, params: &PhysParams) -> Result<Rates, DynamicsError> {
    let Magnetic::Field { h, h0 } = &state.magnetic else {
        return Err(DynamicsError::FormulationMismatch { expected: "traditional" });
    };
    validate_state(state)?;
    let o = params.order;
    let h_total = h.add_uniform(*h0);
    let dh = curl(&state.v.cross(&h_total), o);
    let force = curl(h, o).cross(&h_total).scale(1.0 / (4.0 * PI));
    let (dv, drho, dp) = fluid_rates(state, &force, params);
    Ok(Rates { magnetic: dh, v: dv, rho: drho, p: dp })
}

/// Dispatches on the state's formulation.
pub fn rhs(state: &SimState, params: &PhysParams) -> Result<Rates, DynamicsError> {
    match state.magnetic {
        Magnetic::Potential { .. } => rhs_modified(state, params),
        Magnetic::Field { .. } => rhs_traditional(state, params),
    }
}
