//! Grid-convergence studies against exact solutions or, failing that,
//! against the finest grid of the sweep.

use super::identities::fit_order;
use crate::dynamics::{run, DynamicsError, Formulation, RunControl, SimState};
use crate::fieldkit::{GridSpec, ScalarField};
use crate::params::PhysParams;
use crate::scenarios::{ScenarioError, ScenarioSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConvergenceError {
    #[error("{0}")]
    InvalidSweep(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("resolution {n}: {error}")]
    Run { n: usize, error: DynamicsError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    Exact,
    /// Errors are differences to the finest grid of the sweep.
    FinestGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scenario: &'static str,
    pub formulation: Formulation,
    pub reference: Reference,
    pub t_probe: f64,
    /// Resolutions with a measured error (the finest is dropped for
    /// `FinestGrid`).
    pub resolutions: Vec<usize>,
    pub errors: Vec<f64>,
    pub steps: Vec<u64>,
    pub order: Option<f64>,
}

/// The grid at resolution `n`: one-dimensional scenarios refine x only.
pub fn sweep_grid(base: &GridSpec, spec: &ScenarioSpec, n: usize) -> Result<GridSpec, ScenarioError> {
    let g = if spec.is_one_dimensional() {
        GridSpec::new(n, base.ny, base.nz, base.lx, base.ly, base.lz)
    } else {
        GridSpec::new(n, n, n, base.lx, base.ly, base.lz)
    };
    Ok(g?)
}

/// Discrete L2 distance over all eight unknowns, sampling `fine` at the
/// points of `coarse` when the grids differ by an integer factor.
pub fn state_distance(coarse: &SimState, fine: &SimState) -> f64 {
    let (gc, gf) = (*coarse.grid(), *fine.grid());
    let fc = coarse.evolved_components();
    let ff = fine.evolved_components();
    let ratio: [usize; 3] = std::array::from_fn(|d| gf.dims()[d] / gc.dims()[d]);
    let mut sum = 0.0;
    for c in 0..8 {
        let sampled = if gc == gf {
            ff[c].clone()
        } else {
            let [nx, ny, nz] = gc.dims();
            let mut data = Vec::with_capacity(gc.len());
            for k in 0..nz {
                for j in 0..ny {
                    for i in 0..nx {
                        data.push(ff[c].data()[gf.index(i * ratio[0], j * ratio[1], k * ratio[2])]);
                    }
                }
            }
            ScalarField::from_vec(gc, data).expect("sampled length")
        };
        sum += fc[c].sub(&sampled).l2().powi(2);
    }
    sum.sqrt()
}

/// Runs `spec` to `t_probe` at every resolution of the sweep and fits the
/// convergence order of the error.
pub fn convergence_study(
    spec: &ScenarioSpec,
    base: &GridSpec,
    resolutions: &[usize],
    t_probe: f64,
    formulation: Formulation,
    params: &PhysParams,
) -> Result<ConvergenceReport, ConvergenceError> {
    if resolutions.len() < 2 {
        return Err(ConvergenceError::InvalidSweep("a convergence study needs at least two resolutions".into()));
    }
    if resolutions.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ConvergenceError::InvalidSweep("resolutions must be strictly increasing".into()));
    }
    if !(t_probe.is_finite() && t_probe >= 0.0) {
        return Err(ConvergenceError::InvalidSweep(format!("t_probe = {t_probe} must be finite and >= 0")));
    }

    let mut finals = Vec::new();
    let mut steps = Vec::new();
    let mut exact = None;
    for &n in resolutions {
        let g = sweep_grid(base, spec, n)?;
        let scenario = spec.build(&g, formulation, params)?;
        let out = run(&scenario.state, params, &RunControl::until(t_probe), scenario.forcing(), &mut |_, _| {})
            .map_err(|f| ConvergenceError::Run { n, error: f.error })?;
        steps.push(out.steps);
        finals.push((g, out.state));
        exact = scenario.exact;
    }

    let (reference, used, errors) = match &exact {
        Some(ex) => {
            let errs: Vec<f64> = finals.iter().map(|(g, s)| state_distance(s, &ex.state_at(g, t_probe))).collect();
            (Reference::Exact, resolutions.to_vec(), errs)
        }
        None => {
            if resolutions.len() < 3 {
                return Err(ConvergenceError::InvalidSweep(
                    "without an exact solution the sweep needs at least three resolutions".into(),
                ));
            }
            let finest = resolutions[resolutions.len() - 1];
            for &n in &resolutions[..resolutions.len() - 1] {
                if !finest.is_multiple_of(n) {
                    return Err(ConvergenceError::InvalidSweep(format!("{n} does not divide the finest resolution {finest}")));
                }
            }
            let (_, fine) = finals.last().expect("non-empty");
            let errs: Vec<f64> = finals[..finals.len() - 1].iter().map(|(_, s)| state_distance(s, fine)).collect();
            steps.pop();
            (Reference::FinestGrid, resolutions[..resolutions.len() - 1].to_vec(), errs)
        }
    };
    let order = fit_order(&used, &errors);
    Ok(ConvergenceReport {
        scenario: spec.name(),
        formulation,
        reference,
        t_probe,
        resolutions: used,
        errors,
        steps,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_has_zero_error_everywhere() {
        let spec = ScenarioSpec::UniformRest { rho0: 1.0, p0: 1.0, b0: [0.4, 0.0, 0.0] };
        let base = GridSpec::cube(8).unwrap();
        for f in [Formulation::ModifiedA, Formulation::TraditionalH] {
            let r = convergence_study(&spec, &base, &[8, 16], 0.2, f, &PhysParams::default()).unwrap();
            assert_eq!(r.reference, Reference::Exact);
            assert_eq!(r.errors, vec![0.0, 0.0]);
            assert_eq!(r.order, None);
        }
    }

    #[test]
    fn single_resolution_is_rejected() {
        let spec = ScenarioSpec::Manufactured;
        let base = GridSpec::cube(8).unwrap();
        let r = convergence_study(&spec, &base, &[16], 0.1, Formulation::ModifiedA, &PhysParams::default());
        assert!(matches!(r, Err(ConvergenceError::InvalidSweep(_))));
    }

    #[test]
    fn alfven_field_form_converges_at_second_order() {
        let spec = ScenarioSpec::Alfven { rho0: 1.0, p0: 1.0, b0: 1.0, delta: 1e-3, mode: 1 };
        let base = GridSpec::new(16, 4, 4, 2.0 * std::f64::consts::PI, 1.0, 1.0).unwrap();
        let r = convergence_study(&spec, &base, &[16, 32, 64], 1.0, Formulation::TraditionalH, &PhysParams::default())
            .unwrap();
        let o = r.order.unwrap();
        assert!((o - 2.0).abs() < 0.3, "{r:?}");
    }

    #[test]
    fn finest_grid_reference_for_scenarios_without_exact_solution() {
        let spec = ScenarioSpec::Sound { rho0: 1.0, p0: 0.6, delta: 1e-3, mode: 1 };
        let base = GridSpec::new(16, 4, 4, 2.0 * std::f64::consts::PI, 1.0, 1.0).unwrap();
        let r = convergence_study(&spec, &base, &[16, 32, 64], 0.5, Formulation::ModifiedA, &PhysParams::default())
            .unwrap();
        assert_eq!(r.reference, Reference::FinestGrid);
        assert_eq!(r.resolutions, vec![16, 32]);
        assert!(r.errors[0] > r.errors[1]);
    }
}
