use std::f64::consts::PI;

use crate::dynamics::{Magnetic, SimState};
use crate::emcore::{e_from_a_dot, e_ideal_ohm};
use crate::fieldkit::div;
use crate::params::PhysParams;

/// Conserved quantities, constraint norms and residuals at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub dt: f64,
    pub mass: f64,
    pub momentum: [f64; 3],
    pub e_kin: f64,
    pub e_mag: f64,
    pub e_int: f64,
    pub e_tot: f64,
    pub div_a_l2: f64,
    pub div_a_max: f64,
    pub div_h_l2: f64,
    /// `||E(dA/dt) - E_ohm||`; zero for the traditional formulation.
    pub ohm_resid: f64,
    pub gauge_drift: f64,
    /// `integral rho ln(P rho^-gamma)`; only differences are meaningful.
    pub entropy: f64,
}

impl DiagnosticsRecord {
    pub const COLUMNS: [&'static str; 16] = [
        "t", "dt", "mass", "momx", "momy", "momz", "e_kin", "e_mag", "e_int", "e_tot", "divA_l2", "divA_max",
        "divH_l2", "ohm_resid", "gauge_drift", "entropy",
    ];

    /// Values in `COLUMNS` order.
    pub fn values(&self) -> [f64; 16] {
        [
            self.t,
            self.dt,
            self.mass,
            self.momentum[0],
            self.momentum[1],
            self.momentum[2],
            self.e_kin,
            self.e_mag,
            self.e_int,
            self.e_tot,
            self.div_a_l2,
            self.div_a_max,
            self.div_h_l2,
            self.ohm_resid,
            self.gauge_drift,
            self.entropy,
        ]
    }

    pub fn from_values(v: [f64; 16]) -> Self {
        Self {
            t: v[0],
            dt: v[1],
            mass: v[2],
            momentum: [v[3], v[4], v[5]],
            e_kin: v[6],
            e_mag: v[7],
            e_int: v[8],
            e_tot: v[9],
            div_a_l2: v[10],
            div_a_max: v[11],
            div_h_l2: v[12],
            ohm_resid: v[13],
            gauge_drift: v[14],
            entropy: v[15],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values().iter().all(|v| v.is_finite())
    }
}

/// Evaluates every diagnostic on `state`. `dt` and `gauge_drift` are left at
/// zero for the caller to fill in.
pub fn diagnostics(state: &SimState, params: &PhysParams) -> DiagnosticsRecord {
    let o = params.order;
    let h = state.h_total(params);
    let mass = state.rho.integrate();
    let momentum = state.v.mul_scalar(&state.rho).integrate();
    let e_kin = 0.5 * state.v.magnitude_sq().mul(&state.rho).integrate();
    let e_mag = h.magnitude_sq().integrate() / (8.0 * PI);
    let e_int = state.p.integrate() / (params.gamma - 1.0);
    let gamma = params.gamma;
    let entropy = state.rho.zip_map(&state.p, |r, p| r * (p * r.powf(-gamma)).ln()).integrate();

    let (div_a_l2, div_a_max, ohm_resid) = match &state.magnetic {
        Magnetic::Potential { a, .. } => {
            let n = div(a, o).norms();
            let a_dot = state.v.cross(&h);
            let resid = e_from_a_dot(&a_dot, params).sub(&e_ideal_ohm(&state.v, &h, params)).l2();
            (n.l2, n.max, resid)
        }
        Magnetic::Field { .. } => (0.0, 0.0, 0.0),
    };
    let div_h_l2 = div(&h, o).l2();

    DiagnosticsRecord {
        t: state.t,
        dt: 0.0,
        mass,
        momentum,
        e_kin,
        e_mag,
        e_int,
        e_tot: e_kin + e_mag + e_int,
        div_a_l2,
        div_a_max,
        div_h_l2,
        ohm_resid,
        gauge_drift: 0.0,
        entropy,
    }
}
