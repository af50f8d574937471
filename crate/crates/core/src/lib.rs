//! Vector-potential ("modified") MHD alongside classical ideal MHD on a
//! periodic finite-difference grid.
//!
//! The modified system evolves the vector potential `A` in Coulomb gauge and
//! replaces the Lorentz force density by `-(1/c) (j . grad) A`. The
//! classical system evolves `H` with the Lorentz force. Both share the
//! continuity equation and the adiabatic pressure closure.

pub mod fieldkit;
pub mod emcore;
pub mod params;

pub use params::{GaugeMode, GaugePolicy, PhysParams};
pub mod analysis;
pub mod dynamics;
pub mod scenarios;
