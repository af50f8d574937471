//! Electromagnetic quantities derived from the vector potential, and the
//! force densities of both formulations.
//!
//! The total potential is `A = A0(x) + A_periodic` where `A0 = M x` is an
//! affine background carrying the uniform mean field. Every derivative of
//! the background is taken analytically (`d_k A0_i = M_ik`), never by
//! stencil.

use std::f64::consts::PI;

use crate::fieldkit::{advect, curl, curl_curl, grad, grad_contract, ScalarField, VectorField};
use crate::params::PhysParams;

/// Affine background potential `A0(x) = M x`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BackgroundPotential {
    pub m: [[f64; 3]; 3],
}

impl BackgroundPotential {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_matrix(m: [[f64; 3]; 3]) -> Self {
        Self { m }
    }

    /// Symmetric-gauge encoding `A0 = (1/2) H0 x r`, i.e.
    /// `M_ik = (1/2) eps_ijk H0_j`. Antisymmetric and trace free.
    pub fn symmetric(h0: [f64; 3]) -> Self {
        let [a, b, c] = h0;
        Self {
            m: [
                [0.0, -0.5 * c, 0.5 * b],
                [0.5 * c, 0.0, -0.5 * a],
                [-0.5 * b, 0.5 * a, 0.0],
            ],
        }
    }

    /// Uniform field `curl(M x)` from the antisymmetric part of `M`.
    pub fn field(&self) -> [f64; 3] {
        let m = &self.m;
        [m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]]
    }

    /// `div A0 = trace(M)`.
    pub fn divergence(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self { m: [0, 1, 2].map(|i| [0, 1, 2].map(|k| m[k][i])) }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(|&v| v == 0.0)
    }
}

/// Two charged species with signed charge densities and velocities.
#[derive(Debug, Clone)]
pub struct TwoFluidState {
    pub rho_plus: ScalarField,
    pub rho_minus: ScalarField,
    pub v_plus: VectorField,
    pub v_minus: VectorField,
}

impl TwoFluidState {
    /// `j = rho+ v+ + rho- v-`
    pub fn current(&self) -> VectorField {
        self.v_plus.mul_scalar(&self.rho_plus).add(&self.v_minus.mul_scalar(&self.rho_minus))
    }

    /// Largest `|rho+ + rho-|` relative to `max |rho+|`.
    pub fn neutrality_defect(&self) -> f64 {
        let scale = self.rho_plus.max_abs().max(f64::MIN_POSITIVE);
        self.rho_plus.add(&self.rho_minus).max_abs() / scale
    }

    pub fn is_quasineutral(&self, tol: f64) -> bool {
        self.neutrality_defect() <= tol
    }
}

/// `(v . grad) A_total` with the background contribution added analytically.
fn advect_total(v: &VectorField, a: &VectorField, bg: &BackgroundPotential, params: &PhysParams) -> VectorField {
    let out = advect(v, a, params.order);
    if bg.is_zero() {
        out
    } else {
        out.add(&v.mat_mul(&bg.m))
    }
}

/// `H = curl(A_periodic) + H0`.
pub fn h_from_a(a: &VectorField, bg: &BackgroundPotential, params: &PhysParams) -> VectorField {
    let h = curl(a, params.order);
    let h0 = bg.field();
    if h0 == [0.0; 3] {
        h
    } else {
        h.add_uniform(h0)
    }
}

/// `j = (c / 4 pi) curl curl A`. The affine background has zero curl-curl
/// and is not differentiated.
pub fn current_from_a(a: &VectorField, params: &PhysParams) -> VectorField {
    curl_curl(a, params.order).scale(params.c / (4.0 * PI))
}

/// `E = -(1/c) dA/dt` (scalar potential zero).
pub fn e_from_a_dot(a_dot: &VectorField, params: &PhysParams) -> VectorField {
    a_dot.scale(-1.0 / params.c)
}

/// Ideal Ohm's law `E = -(1/c) v x H`.
pub fn e_ideal_ohm(v: &VectorField, h: &VectorField, params: &PhysParams) -> VectorField {
    v.cross(h).scale(-1.0 / params.c)
}

/// Modified force density `f = -(1/c) (j . grad) A_total`.
pub fn force_modified(j: &VectorField, a: &VectorField, bg: &BackgroundPotential, params: &PhysParams) -> VectorField {
    advect_total(j, a, bg, params).scale(-1.0 / params.c)
}

/// Modified force written entirely in terms of the potential:
/// `f = -(1/4 pi) [(curl curl A) . grad] A`.
pub fn force_modified_from_a(a: &VectorField, bg: &BackgroundPotential, params: &PhysParams) -> VectorField {
    let j = current_from_a(a, params);
    force_modified(&j, a, bg, params)
}

/// Species-summed force `f = -sum_s (rho_s / c) [dA/dt + (v_s . grad) A]`.
///
/// Under quasineutrality the `dA/dt` terms cancel and this equals
/// `force_modified` with `j = rho+ v+ + rho- v-`.
pub fn force_two_fluid(
    tf: &TwoFluidState,
    a_dot: &VectorField,
    a: &VectorField,
    bg: &BackgroundPotential,
    params: &PhysParams,
) -> VectorField {
    let species = |rho: &ScalarField, v: &VectorField| {
        a_dot.add(&advect_total(v, a, bg, params)).mul_scalar(rho)
    };
    species(&tf.rho_plus, &tf.v_plus)
        .add(&species(&tf.rho_minus, &tf.v_minus))
        .scale(-1.0 / params.c)
}

/// Reduced quasineutral form `f = (rho+ / c) [(v- - v+) . grad] A`.
pub fn force_two_fluid_reduced(
    tf: &TwoFluidState,
    a: &VectorField,
    bg: &BackgroundPotential,
    params: &PhysParams,
) -> VectorField {
    let dv = tf.v_minus.sub(&tf.v_plus);
    advect_total(&dv, a, bg, params).mul_scalar(&tf.rho_plus).scale(1.0 / params.c)
}

/// Species sum with the electron bracket entering with a `+` sign:
/// `-(rho+/c)[dA/dt + (v+ . grad) A] + (rho-/c)[dA/dt + (v- . grad) A]`.
///
/// Kept only so its disagreement with the current form can be measured.
pub fn force_two_fluid_mirrored(
    tf: &TwoFluidState,
    a_dot: &VectorField,
    a: &VectorField,
    bg: &BackgroundPotential,
    params: &PhysParams,
) -> VectorField {
    let bracket = |v: &VectorField| a_dot.add(&advect_total(v, a, bg, params));
    bracket(&tf.v_minus)
        .mul_scalar(&tf.rho_minus)
        .sub(&bracket(&tf.v_plus).mul_scalar(&tf.rho_plus))
        .scale(1.0 / params.c)
}

/// Classical Lorentz force density `f = (1/c) j x H`.
pub fn force_lorentz(j: &VectorField, h: &VectorField, params: &PhysParams) -> VectorField {
    j.cross(h).scale(1.0 / params.c)
}

/// `G_i = sum_k j_k d_i A_total_k`, background included as `sum_k j_k M_ki`.
pub fn grad_contract_total(j: &VectorField, a: &VectorField, bg: &BackgroundPotential, params: &PhysParams) -> VectorField {
    let g = grad_contract(j, a, params.order);
    if bg.is_zero() {
        g
    } else {
        g.add(&j.mat_mul(&bg.transpose().m))
    }
}

/// Relative change of the potential-form force under `A -> A + grad chi`:
/// `||f(A + grad chi) - f(A)|| / ||f(A)||`.
///
/// When `f(A)` vanishes the shifted force's norm is used as the scale; zero
/// is returned when both vanish.
pub fn gauge_shift_sensitivity(a: &VectorField, bg: &BackgroundPotential, chi: &ScalarField, params: &PhysParams) -> f64 {
    let base = force_modified_from_a(a, bg, params);
    let shifted_a = a.add(&grad(chi, params.order));
    let shifted = force_modified_from_a(&shifted_a, bg, params);
    let diff = shifted.sub(&base).l2();
    let scale = {
        let b = base.l2();
        if b > 0.0 {
            b
        } else {
            shifted.l2()
        }
    };
    if scale == 0.0 {
        0.0
    } else {
        diff / scale
    }
}
