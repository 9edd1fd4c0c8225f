//! Charger and battery amplitudes driven by a single-photon pulse.
//!
//! Three independent engines compute the same amplitudes: analytic closed
//! forms, quadrature of the response-function convolutions, and direct
//! integration of the equations of motion.

pub mod closed_form;
pub mod convolution;
pub mod ledger;
pub mod oracle;
pub mod trace;

pub use closed_form::{
    amplitude_closed_form, amplitudes_closed_form, trace_closed_form, Amplitudes, ClosedForm,
};
pub use convolution::{amplitude_convolution, amplitudes_convolution};
pub use ledger::{norm_ledger, norm_ledger_ode, norm_ledger_unchecked, NormLedger, LEDGER_TOL};
pub use oracle::{amplitude_ode_oracle, ode_samples, OdeSample};
pub use trace::{
    default_grid, energy_and_ergotropy, ergotropy, uniform_grid, AmplitudeTrace, Method,
    DEFAULT_GRID_POINTS,
};
