//! Diagnostics, the derivation-identity suite, linear dispersion analysis
//! and convergence studies.

mod convergence;
mod diagnostics;
mod dispersion;
mod identities;

pub use convergence::{convergence_study, state_distance, sweep_grid, ConvergenceError, ConvergenceReport, Reference};
pub use diagnostics::{diagnostics, DiagnosticsRecord};
pub use dispersion::{
    dispersion, modified_wavenumber, Background, DispersionError, DispersionResult, EPSILON, EPS_CONSISTENCY,
};
pub use identities::{
    fit_order, identity_suite, identity_suite_scaled, IdentityKind, IdentityReport, IdentityRow, EXACT_TOL, ORDER_SLACK,
};
