//! Numerical toolkit for the complexified exotic oscillator: a harmonic
//! oscillator with position-dependent mass continued to complex position and
//! momentum.
//!
//! * [`model`]: `H`, `G`, equations of motion (1D and n-D) and a complex
//!   arithmetic oracle.
//! * [`integrator`]: adaptive Dormand–Prince 5(4) with dense output and
//!   conserved-quantity audit.
//! * [`initcond`]: literal initial-condition families and a constrained
//!   Newton solver.
//! * [`analysis`]: closure, PT-symmetry and spiral classification, parameter
//!   scans.
//! * [`brackets`]: numeric Poisson brackets and the constraint algebra check.

pub mod analysis;
pub mod brackets;
pub mod initcond;
pub mod integrator;
pub mod model;

pub use integrator::{
    integrate, integrate_1d, Ceo1d, CeoNd, IntegrationError, IntegratorConfig, RealEo, Trajectory,
};
pub use model::{Params, State1D, StateNd};
