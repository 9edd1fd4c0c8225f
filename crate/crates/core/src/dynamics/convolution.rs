//! Amplitudes by direct quadrature of the response-function convolutions.

use num_complex::Complex;

use crate::error::Result;
use crate::greens::Kernel;
use crate::numerics::quadrature::{integrate_complex_split, split_points};
use crate::params::SystemParams;
use crate::pulse::PulseSpec;
use crate::scalar::Real;

use super::closed_form::Amplitudes;
use super::trace::{AmplitudeTrace, Method};

/// Absolute tolerance of each convolution integral.
pub const CONVOLUTION_TOL: f64 = 1e-11;

/// α₀(t), α₁(t) at one instant by adaptive quadrature.
pub fn amplitudes_convolution<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    t: T,
) -> Result<Amplitudes<T>> {
    let kernel = Kernel::new(params);
    convolve(&kernel, params, spec, t, T::lit(CONVOLUTION_TOL))
}

/// Convolution engine on a grid; works for every pulse shape.
pub fn amplitude_convolution<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    times: &[T],
) -> Result<AmplitudeTrace<T>> {
    let kernel = Kernel::new(params);
    let tol = T::lit(CONVOLUTION_TOL);
    let mut alpha0 = Vec::with_capacity(times.len());
    let mut alpha1 = Vec::with_capacity(times.len());
    for &t in times {
        let a = convolve(&kernel, params, spec, t, tol)?;
        alpha0.push(a.alpha0);
        alpha1.push(a.alpha1);
    }
    Ok(AmplitudeTrace::new(
        params,
        times.to_vec(),
        alpha0,
        alpha1,
        Method::Convolution,
    ))
}

fn convolve<T: Real>(
    kernel: &Kernel<T>,
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    t: T,
    tol: T,
) -> Result<Amplitudes<T>> {
    let i = Complex::new(T::zero(), T::one());
    let zero = Complex::new(T::zero(), T::zero());
    let f = params.coupling();
    if let PulseSpec::Delta { arrival } = spec {
        let e = kernel.eval(t - *arrival);
        return Ok(Amplitudes {
            alpha0: Complex::new(-e.g_prime, T::zero()),
            alpha1: i * f * e.g,
        });
    }
    let (a, b) = spec.support();
    let upper = t.min(b);
    if !(upper > a) {
        return Ok(Amplitudes {
            alpha0: zero,
            alpha1: zero,
        });
    }
    let pts = split_points(a, upper, &spec.breakpoints());
    let xi = |tau: T| spec.value(tau).unwrap_or_default();
    let mut g = |tau: T| xi(tau) * kernel.g(t - tau);
    let conv_g = integrate_complex_split(&mut g, &pts, tol)?.value;
    let mut gp = |tau: T| xi(tau) * kernel.g_prime(t - tau);
    let conv_gp = integrate_complex_split(&mut gp, &pts, tol)?.value;
    let sg = params.gamma_pulse().sqrt();
    Ok(Amplitudes {
        alpha0: -conv_gp * sg,
        alpha1: i * conv_g * (f * sg),
    })
}
