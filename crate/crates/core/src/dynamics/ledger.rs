//! Bookkeeping of the single excitation between charger, battery and the two output channels.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::ode::OdeOptions;
use crate::numerics::quadrature::{integrate_complex_split, split_points};
use crate::params::SystemParams;
use crate::pulse::PulseSpec;
use crate::scalar::{abs2, Real};

use super::closed_form::ClosedForm;
use super::convolution::amplitudes_convolution;
use super::oracle::ode_samples;

/// Largest accepted |total − 1|.
pub const LEDGER_TOL: f64 = 1e-5;

const LEDGER_QUAD_TOL: f64 = 1e-10;

/// Where the excitation sits at time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormLedger<T = f64> {
    pub t: T,
    pub p_tls: T,
    pub p_battery: T,
    /// Pulse-mode probability: the re-emitted field up to t plus the part of ξ not yet arrived.
    pub p_emitted_pulse: T,
    pub p_emitted_env: T,
    pub total: T,
}

impl<T: Real> NormLedger<T> {
    fn new(t: T, alpha0: Complex<T>, alpha1: Complex<T>, pulse: T, env: T) -> Self {
        let (p_tls, p_battery) = (abs2(alpha0), abs2(alpha1));
        Self {
            t,
            p_tls,
            p_battery,
            p_emitted_pulse: pulse,
            p_emitted_env: env,
            total: p_tls + p_battery + pulse + env,
        }
    }

    /// Errors with [`Error::LedgerViolation`] if the total is off by more than `tol`.
    pub fn check(self, tol: T) -> Result<Self> {
        if (self.total - T::one()).abs() > tol || !self.total.is_finite() {
            return Err(Error::LedgerViolation {
                t: self.t.as_f64(),
                total: self.total.as_f64(),
                tol: tol.as_f64(),
            });
        }
        Ok(self)
    }
}

/// Ledger at time `t` by quadrature over the analytic (or convolved) charger amplitude.
///
/// Within τ ≤ t the pulse mode carries |ξ(τ) + √Γ α₀(τ)|², beyond t the
/// undisturbed |ξ(τ)|² (Θ(0) = 1 at τ = t).
pub fn norm_ledger<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    t: T,
) -> Result<NormLedger<T>> {
    norm_ledger_unchecked(params, spec, t, T::lit(LEDGER_QUAD_TOL))?.check(T::lit(LEDGER_TOL))
}

/// Same ledger at a caller-chosen quadrature tolerance, without the conservation check.
pub fn norm_ledger_unchecked<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    t: T,
    quad_tol: T,
) -> Result<NormLedger<T>> {
    if !spec.is_pointwise() {
        return Err(Error::DeltaNotPointwise);
    }
    let closed = match ClosedForm::new(params, spec) {
        Ok(cf) => Some(cf),
        Err(Error::UnsupportedShape(_)) => None,
        Err(e) => return Err(e),
    };
    let alpha0 = |tau: T| -> Result<Complex<T>> {
        match &closed {
            Some(cf) => Ok(cf.at(tau)?.alpha0),
            None => Ok(amplitudes_convolution(params, spec, tau)?.alpha0),
        }
    };
    let here = match &closed {
        Some(cf) => cf.at(t)?,
        None => amplitudes_convolution(params, spec, t)?,
    };

    let sg = params.gamma_pulse().sqrt();
    let tol = quad_tol;
    let (a, b) = spec.support();
    let zero = Complex::new(T::zero(), T::zero());
    let mut failure = None;

    let (mut emitted, mut env) = (T::zero(), T::zero());
    if t > a {
        let pts = split_points(a, t, &spec.breakpoints());
        let mut integrand = |tau: T| -> Complex<T> {
            match alpha0(tau) {
                Ok(a0) => {
                    let x = spec.value(tau).unwrap_or_default();
                    Complex::new(abs2(x + a0 * sg), abs2(a0))
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    zero
                }
            }
        };
        let r = integrate_complex_split(&mut integrand, &pts, tol)?.value;
        emitted = r.re;
        env = params.gamma_env() * r.im;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let lo = t.max(a);
    if b > lo {
        let pts = split_points(lo, b, &spec.breakpoints());
        let mut rest = |tau: T| Complex::new(abs2(spec.value(tau).unwrap_or_default()), T::zero());
        emitted = emitted + integrate_complex_split(&mut rest, &pts, tol)?.value.re;
    }
    Ok(NormLedger::new(t, here.alpha0, here.alpha1, emitted, env))
}

/// Ledgers at every grid time from a single augmented ODE run.
pub fn norm_ledger_ode<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    times: &[T],
) -> Result<Vec<NormLedger<T>>> {
    if !spec.is_pointwise() {
        return Err(Error::DeltaNotPointwise);
    }
    let samples = ode_samples(params, spec, times, OdeOptions::default())?;
    let (a, b) = spec.support();
    let tol = T::lit(LEDGER_QUAD_TOL);
    samples
        .into_iter()
        .map(|s| {
            let lo = s.t.max(a);
            let mut remaining = T::zero();
            if b > lo {
                let pts = split_points(lo, b, &spec.breakpoints());
                let mut rest =
                    |tau: T| Complex::new(abs2(spec.value(tau).unwrap_or_default()), T::zero());
                remaining = integrate_complex_split(&mut rest, &pts, tol)?.value.re;
            }
            NormLedger::new(
                s.t,
                s.alpha0,
                s.alpha1,
                s.emitted_pulse_so_far + remaining,
                s.emitted_env,
            )
            .check(T::lit(LEDGER_TOL))
        })
        .collect()
}
