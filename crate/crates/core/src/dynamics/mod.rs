//! Right-hand sides, time integration, CFL control and Coulomb-gauge
//! enforcement for both formulations.

mod integrate;
mod rhs;
mod run;
mod state;

pub use integrate::{
    cfl_dt, enforce_gauge, gauge_drift, max_signal_speed, step_rk4, Forcing, StepContext, StepResult,
};
pub use rhs::{rhs, rhs_modified, rhs_traditional, validate_state};
pub use run::{run, RunControl, RunFailure, RunOutcome};
pub use state::{Formulation, Magnetic, Rates, SimState};

use crate::fieldkit::FieldError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid state: {quantity} = {value} at grid index {index}")]
    InvalidState { quantity: &'static str, index: usize, value: f64 },
    #[error("time step {0} must be positive and finite")]
    InvalidTimeStep(f64),
    #[error("state does not belong to the {expected} formulation")]
    FormulationMismatch { expected: &'static str },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("gauge projection failed: {0}")]
    Solver(#[from] FieldError),
}
