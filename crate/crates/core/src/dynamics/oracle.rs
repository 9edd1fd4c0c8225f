//! Brute-force integration of the amplitude equations of motion.
//!
//!   α̇₀ = −i f α₁ − √Γ ξ(t) − γ α₀,   α̇₁ = −i f α₀
//!
//! started from rest before the pulse. Two extra components accumulate the
//! excitation radiated back into the pulse mode and into the environment, so
//! the same run also yields the excitation ledger.

use num_complex::Complex;

use crate::error::Result;
use crate::numerics::ode::{DormandPrince, OdeOptions, State};
use crate::params::SystemParams;
use crate::pulse::PulseSpec;
use crate::scalar::{abs2, Real};

use super::trace::{AmplitudeTrace, Method};

/// Populations and emitted probabilities recorded by the ODE run at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSample<T = f64> {
    pub t: T,
    pub alpha0: Complex<T>,
    pub alpha1: Complex<T>,
    /// ∫_{start}^{t} |ξ + √Γ α₀|² dτ.
    pub emitted_pulse_so_far: T,
    /// Γ⊥ ∫_{start}^{t} |α₀|² dτ.
    pub emitted_env: T,
}

/// ODE amplitudes on an ascending grid, using default stepper tolerances.
pub fn amplitude_ode_oracle<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    times: &[T],
) -> Result<AmplitudeTrace<T>> {
    let samples = ode_samples(params, spec, times, OdeOptions::default())?;
    Ok(AmplitudeTrace::new(
        params,
        times.to_vec(),
        samples.iter().map(|s| s.alpha0).collect(),
        samples.iter().map(|s| s.alpha1).collect(),
        Method::OdeOracle,
    ))
}

/// Full ODE state (amplitudes and emission accumulators) at each grid time.
pub fn ode_samples<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    times: &[T],
    opts: OdeOptions<T>,
) -> Result<Vec<OdeSample<T>>> {
    let zero = Complex::new(T::zero(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let f = params.coupling();
    let sg = params.gamma_pulse().sqrt();
    let gamma = params.gamma();
    let g_env = params.gamma_env();

    let (start, end) = spec.support();
    let mut y: State<T, 4> = [zero; 4];
    if let PulseSpec::Delta { .. } = spec {
        // ∫ −√Γ δ(τ − t₀)/√Γ dτ kicks α₀ to −1 at the arrival time. The
        // emitted-pulse accumulator is not meaningful for a delta input.
        y[0] = Complex::new(-T::one(), T::zero());
    }
    let mut breaks: Vec<T> = spec
        .breakpoints()
        .into_iter()
        .filter(|b| *b > start && *b < end)
        .collect();
    breaks.push(end);
    let mut stepper = DormandPrince::new(start, y, opts);
    let mut seg_lo = start;
    let mut next_break = 0;
    let mut out = Vec::with_capacity(times.len());

    for &t in times {
        if t < start {
            out.push(OdeSample {
                t,
                alpha0: zero,
                alpha1: zero,
                emitted_pulse_so_far: T::zero(),
                emitted_env: T::zero(),
            });
            continue;
        }
        loop {
            let seg_hi = if next_break < breaks.len() {
                breaks[next_break]
            } else {
                T::infinity()
            };
            let target = t.min(seg_hi);
            // Sample ξ strictly inside the current piece so one-sided limits are used at edges.
            let width = if seg_hi.is_finite() {
                seg_hi - seg_lo
            } else {
                T::one()
            };
            let nudge = width * T::lit(1e-12);
            let (lo_in, hi_in) = (
                seg_lo + nudge,
                if seg_hi.is_finite() {
                    seg_hi - nudge
                } else {
                    seg_hi
                },
            );
            let xi = |tau: T| -> Complex<T> {
                if !spec.is_pointwise() {
                    return zero;
                }
                spec.value(tau.max(lo_in).min(hi_in)).unwrap_or_default()
            };
            let mut rhs = |tau: T, s: &State<T, 4>| -> State<T, 4> {
                let x = xi(tau);
                let out_field = x + s[0] * sg;
                [
                    -i * f * s[1] - x * sg - s[0] * gamma,
                    -i * f * s[0],
                    Complex::new(abs2(out_field), T::zero()),
                    Complex::new(g_env * abs2(s[0]), T::zero()),
                ]
            };
            stepper.advance(&mut rhs, target)?;
            if target < seg_hi {
                break;
            }
            seg_lo = seg_hi;
            next_break += 1;
            if t <= seg_hi {
                break;
            }
        }
        let s = stepper.y;
        out.push(OdeSample {
            t,
            alpha0: s[0],
            alpha1: s[1],
            emitted_pulse_so_far: s[2].re,
            emitted_env: s[3].re,
        });
    }
    Ok(out)
}
