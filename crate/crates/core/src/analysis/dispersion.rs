//! Linear dispersion of the semidiscrete systems about a uniform state,
//! obtained from the implemented right-hand side by directional differencing.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};

use crate::dynamics::{rhs, Formulation, Magnetic, SimState};
use crate::emcore::BackgroundPotential;
use crate::fieldkit::{GridSpec, ScalarField, StencilOrder, VectorField};
use crate::params::PhysParams;

/// Relative probe amplitude.
pub const EPSILON: f64 = 1e-6;
/// Relative eigenvalue change between `EPSILON` and `EPSILON / 10` above
/// which the result is flagged.
pub const EPS_CONSISTENCY: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DispersionError {
    #[error("wavevector must have a nonzero component")]
    ZeroWavevector,
    #[error("wavevector component {component} = {value} is not resolved by {n} cells")]
    Unresolved { component: usize, value: i64, n: usize },
    #[error("background is not uniform: {0}")]
    NonUniform(String),
    #[error("invalid background: {0}")]
    InvalidBackground(String),
    #[error("right-hand side failed: {0}")]
    Rhs(String),
}

/// Uniform equilibrium `{rho0, P0, H0, v = 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    pub rho0: f64,
    pub p0: f64,
    pub h0: [f64; 3],
    /// Background potential matrix for the potential form; `None` selects
    /// the symmetric gauge.
    pub potential: Option<[[f64; 3]; 3]>,
}

impl Background {
    pub fn new(rho0: f64, p0: f64, h0: [f64; 3]) -> Self {
        Self { rho0, p0, h0, potential: None }
    }

    fn bg_potential(&self) -> BackgroundPotential {
        match self.potential {
            Some(m) => BackgroundPotential::from_matrix(m),
            None => BackgroundPotential::symmetric(self.h0),
        }
    }

    /// Extracts the background from a state, rejecting anything non-uniform.
    pub fn from_state(state: &SimState) -> Result<Self, DispersionError> {
        let uniform = |f: &ScalarField| {
            let v0 = f.data()[0];
            f.data().iter().all(|&v| v == v0)
        };
        if !state.v.components().iter().all(|c| c.data().iter().all(|&v| v == 0.0)) {
            return Err(DispersionError::NonUniform("velocity must vanish".into()));
        }
        if !state.magnetic.evolved().components().iter().all(|c| c.data().iter().all(|&v| v == 0.0)) {
            return Err(DispersionError::NonUniform("magnetic fluctuation must vanish".into()));
        }
        if !uniform(&state.rho) || !uniform(&state.p) {
            return Err(DispersionError::NonUniform("density and pressure must be constant".into()));
        }
        let potential = match &state.magnetic {
            Magnetic::Potential { bg, .. } => Some(bg.m),
            Magnetic::Field { .. } => None,
        };
        Ok(Self { rho0: state.rho.data()[0], p0: state.p.data()[0], h0: state.magnetic.mean_field(), potential })
    }

    pub fn state(&self, grid: GridSpec, formulation: Formulation) -> SimState {
        let magnetic = match formulation {
            Formulation::ModifiedA => Magnetic::Potential { a: VectorField::zeros(grid), bg: self.bg_potential() },
            Formulation::TraditionalH => Magnetic::Field { h: VectorField::zeros(grid), h0: self.h0 },
        };
        SimState {
            magnetic,
            v: VectorField::zeros(grid),
            rho: ScalarField::constant(grid, self.rho0),
            p: ScalarField::constant(grid, self.p0),
            t: 0.0,
        }
    }

    pub fn alfven_speed(&self) -> f64 {
        let b2: f64 = self.h0.iter().map(|b| b * b).sum();
        (b2 / (4.0 * PI * self.rho0)).sqrt()
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p0 / self.rho0).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionResult {
    pub k: [i64; 3],
    /// Modified wavevector of the stencil, per axis.
    pub k_tilde: [f64; 3],
    /// Eigenfrequencies sorted by `|Re omega|`.
    pub omega: Vec<Complex<f64>>,
    /// Largest distance from any `omega` to the nearest `-conj(omega)`
    /// partner, relative to `max |omega|`.
    pub max_unpaired: f64,
    /// Largest eigenvalue change between `EPSILON` and `EPSILON / 10`,
    /// relative to `max |omega|`.
    pub eps_sensitivity: f64,
    pub eps_warning: bool,
}

impl DispersionResult {
    pub fn k_tilde_norm(&self) -> f64 {
        self.k_tilde.iter().map(|k| k * k).sum::<f64>().sqrt()
    }

    /// `|Re omega| / |k~|`, in the same order as `omega`.
    pub fn phase_speeds(&self) -> Vec<f64> {
        let kt = self.k_tilde_norm();
        self.omega.iter().map(|w| w.re.abs() / kt).collect()
    }
}

/// Modified wavenumber `k~` of the first-derivative stencil.
pub fn modified_wavenumber(k: f64, h: f64, order: StencilOrder) -> f64 {
    match order {
        StencilOrder::Order2 => (k * h).sin() / h,
        StencilOrder::Order4 => (8.0 * (k * h).sin() - (2.0 * k * h).sin()) / (6.0 * h),
    }
}

/// Eigenfrequencies of the semidiscrete system linearized about `background`
/// for the single Fourier mode `k` (integer mode numbers per axis).
pub fn dispersion(
    background: &Background,
    k: [i64; 3],
    formulation: Formulation,
    params: &PhysParams,
    grid: &GridSpec,
) -> Result<DispersionResult, DispersionError> {
    if k == [0, 0, 0] {
        return Err(DispersionError::ZeroWavevector);
    }
    for (component, (&value, &n)) in k.iter().zip(grid.dims().iter()).enumerate() {
        if 2 * value.unsigned_abs() as usize >= n {
            return Err(DispersionError::Unresolved { component, value, n });
        }
    }
    if !(background.rho0 > 0.0 && background.p0 > 0.0) || !background.h0.iter().all(|b| b.is_finite()) {
        return Err(DispersionError::InvalidBackground(format!("{background:?}")));
    }
    params.validate().map_err(DispersionError::InvalidBackground)?;

    let lengths = grid.lengths();
    let kvec: [f64; 3] = std::array::from_fn(|d| 2.0 * PI * k[d] as f64 / lengths[d]);
    let h = grid.spacing();
    let k_tilde: [f64; 3] = std::array::from_fn(|d| modified_wavenumber(kvec[d], h[d], params.order));

    let omega = eigenfrequencies(background, kvec, formulation, params, grid, EPSILON)?;
    let omega_fine = eigenfrequencies(background, kvec, formulation, params, grid, EPSILON / 10.0)?;
    let scale = omega.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let rel = |x: f64| if scale > 0.0 { x / scale } else { x };
    // degenerate +-omega pairs may swap places in the sorted lists, so match
    // each eigenvalue to its nearest unused partner instead of by index
    let mut unused: Vec<Complex<f64>> = omega_fine.clone();
    let mut worst = 0.0f64;
    for a in &omega {
        let (j, d) = unused
            .iter()
            .enumerate()
            .map(|(j, b)| (j, (a - b).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("equal lengths");
        worst = worst.max(d);
        unused.swap_remove(j);
    }
    let eps_sensitivity = rel(worst);
    let max_unpaired = rel(omega
        .iter()
        .map(|w| omega.iter().map(|u| (u + w.conj()).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max));

    Ok(DispersionResult {
        k,
        k_tilde,
        omega,
        max_unpaired,
        eps_sensitivity,
        eps_warning: eps_sensitivity > EPS_CONSISTENCY,
    })
}

/// Builds the 16x16 real Jacobian in the `{cos, sin}(k.x)` basis of the
/// eight unknowns and returns `omega = i lambda` for its eigenvalues.
fn eigenfrequencies(
    background: &Background,
    kvec: [f64; 3],
    formulation: Formulation,
    params: &PhysParams,
    grid: &GridSpec,
    eps: f64,
) -> Result<Vec<Complex<f64>>, DispersionError> {
    let g = *grid;
    let base = background.state(g, formulation);
    let phase = ScalarField::from_fn(g, |x, y, z| kvec[0] * x + kvec[1] * y + kvec[2] * z);
    let basis = [phase.map(f64::cos), phase.map(f64::sin)];
    let kmag = kvec.iter().map(|k| k * k).sum::<f64>().sqrt();

    // probe sizes per unknown, relative to the natural scale of each
    let b_ref = background.h0.iter().map(|b| b * b).sum::<f64>().sqrt().max(1.0);
    let speed = background.sound_speed(params.gamma).max(background.alfven_speed()).max(1.0);
    let mag_ref = match formulation {
        Formulation::ModifiedA => b_ref / kmag,
        Formulation::TraditionalH => b_ref,
    };
    let refs = [mag_ref, mag_ref, mag_ref, speed, speed, speed, background.rho0, background.p0];

    let perturbed = |comp: usize, shape: &ScalarField, amp: f64| {
        let mut s = base.clone();
        let target = match comp {
            0..=2 => s.magnetic.evolved_mut().comp_mut(comp),
            3..=5 => s.v.comp_mut(comp - 3),
            6 => &mut s.rho,
            _ => &mut s.p,
        };
        target.axpy(amp, shape);
        s
    };
    let n = g.len() as f64;
    let mut jac = DMatrix::<f64>::zeros(16, 16);
    for comp in 0..8 {
        for (b, shape) in basis.iter().enumerate() {
            let amp = eps * refs[comp];
            let plus = rhs(&perturbed(comp, shape, amp), params).map_err(|e| DispersionError::Rhs(e.to_string()))?;
            let minus = rhs(&perturbed(comp, shape, -amp), params).map_err(|e| DispersionError::Rhs(e.to_string()))?;
            let (pc, mc) = (plus.components(), minus.components());
            for row in 0..8 {
                let d = pc[row].sub(mc[row]).scale(1.0 / (2.0 * amp));
                for (rb, proj) in basis.iter().enumerate() {
                    jac[(2 * row + rb, 2 * comp + b)] = 2.0 * d.dot(proj) / n;
                }
            }
        }
    }

    let mut omega: Vec<Complex<f64>> =
        jac.complex_eigenvalues().iter().map(|l| Complex::new(-l.im, l.re)).collect();
    omega.sort_by(|a, b| {
        a.re.abs()
            .total_cmp(&b.re.abs())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
    Ok(omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> GridSpec {
        GridSpec::cube(n).unwrap()
    }

    #[test]
    fn zero_and_unresolved_wavevectors_are_rejected() {
        let bg = Background::new(1.0, 1.0, [0.0; 3]);
        let params = PhysParams::default();
        assert_eq!(
            dispersion(&bg, [0, 0, 0], Formulation::TraditionalH, &params, &grid(8)).unwrap_err(),
            DispersionError::ZeroWavevector
        );
        assert!(matches!(
            dispersion(&bg, [4, 0, 0], Formulation::TraditionalH, &params, &grid(8)),
            Err(DispersionError::Unresolved { .. })
        ));
    }

    #[test]
    fn non_uniform_state_is_rejected() {
        let g = grid(8);
        let mut s = Background::new(1.0, 1.0, [1.0, 0.0, 0.0]).state(g, Formulation::ModifiedA);
        assert!(Background::from_state(&s).is_ok());
        s.rho.data_mut()[3] = 1.1;
        assert!(matches!(Background::from_state(&s), Err(DispersionError::NonUniform(_))));
    }

    #[test]
    fn hydrodynamic_limit_has_only_sound_modes() {
        let g = grid(16);
        let params = PhysParams::default();
        let bg = Background::new(1.0, 0.6, [0.0; 3]);
        let r = dispersion(&bg, [1, 0, 0], Formulation::TraditionalH, &params, &g).unwrap();
        let kt = r.k_tilde_norm();
        let speeds = r.phase_speeds();
        let cs = bg.sound_speed(params.gamma);
        // each frequency shows up for k and -k, with both signs
        assert!(speeds[..12].iter().all(|&s| s < 1e-8));
        assert!(speeds[12..].iter().all(|&s| (s - cs).abs() < 1e-6 * cs));
        assert!((kt - (2.0 * PI / 16.0).sin() / (2.0 * PI / 16.0)).abs() < 1e-15);
        assert!(r.max_unpaired < 1e-8);
        assert!(!r.eps_warning);
    }
}
