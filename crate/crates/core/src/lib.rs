//! Single-photon charging of a harmonic-oscillator quantum battery through a
//! damped two-level charger.
//!
//! The physics is generic over the floating-point type (`f32` or `f64`);
//! the aliases below fix it to `f64` for everyday use.
//!
//! ```
//! use qpulse_core::{min_time, p_of_duration, Params};
//!
//! let params = Params::new(1.0, 0.0, 0.25, 1.0).unwrap();
//! let p = p_of_duration(&params, 8.0).unwrap();
//! let t = min_time(&params, p).unwrap();
//! assert!((t.t_min - 8.0).abs() < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod greens;
pub mod numerics;
pub mod optimal;
pub mod params;
pub mod pulse;
pub mod scalar;

pub use dynamics::{
    amplitude_closed_form, amplitude_convolution, amplitude_ode_oracle, amplitudes_closed_form,
    default_grid, energy_and_ergotropy, norm_ledger, norm_ledger_ode, norm_ledger_unchecked,
    trace_closed_form, uniform_grid, AmplitudeTrace, Amplitudes, Method, NormLedger,
};
pub use error::{Error, Result};
pub use greens::{green, green_sq_integral, GreensEval, Kernel};
pub use optimal::{
    charging_bound, min_time, optimal_pulse, p_of_duration, p_of_duration_quadrature,
    power_optimal, ChargingBound, MinTimeResult, PowerCandidate, PowerResult, SolverReport,
};
pub use params::{classify_regime, Regime, RegimeData, SystemParams, EP_TOL};
pub use pulse::{OptimalPulse, PulseSpec, PulseWidth, SampledPulse};
pub use scalar::Real;

pub type Params = SystemParams<f64>;
pub type Pulse = PulseSpec<f64>;
pub type Trace = AmplitudeTrace<f64>;
pub type Ledger = NormLedger<f64>;

pub type Params32 = SystemParams<f32>;
pub type Pulse32 = PulseSpec<f32>;
pub type Trace32 = AmplitudeTrace<f32>;
