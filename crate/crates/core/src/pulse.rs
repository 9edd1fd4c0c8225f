//! Normalized single-photon temporal envelopes ξ(t).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::greens::{green_sq_integral, Kernel};
use crate::numerics::quadrature::{integrate_complex_split, integrate_split, split_points};
use crate::params::{classify_regime, Regime, SystemParams};
use crate::scalar::{abs2, Real};

/// Tolerance on ∫|ξ|² − 1 accepted for realizable pulses.
pub const NORM_TOL: f64 = 1e-6;

const QUAD_TOL: f64 = 1e-12;
const GAUSSIAN_SPAN: f64 = 12.0;
const DECAY_SPAN: f64 = 80.0;

/// Temporal envelope of the incident photon.
///
/// Square, decaying-exponential and Gaussian follow the usual unit-norm
/// definitions with width parameter `T`. `Delta` stands for δ(t − t₀)/√Γ and
/// has no pointwise value.
#[derive(Debug, Clone, PartialEq)]
pub enum PulseSpec<T: Real = f64> {
    /// Θ(t)Θ(T − t)/√T.
    Square {
        duration: T,
    },
    /// e^{−t/2T}Θ(t)/√T.
    DecayExp {
        timescale: T,
    },
    /// e^{−t²/4T²}/(2πT²)^{1/4}.
    Gaussian {
        width: T,
    },
    Delta {
        arrival: T,
    },
    OptimalTruncated(OptimalPulse<T>),
    Sampled(SampledPulse<T>),
}

/// Standard deviation of the intensity profile |ξ(t)|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseWidth<T = f64> {
    pub t_sigma: T,
}

fn positive<T: Real>(field: &'static str, v: T) -> Result<T> {
    if v.is_finite() && v > T::zero() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("{} must be finite and > 0", v.as_f64()),
        })
    }
}

impl<T: Real> PulseSpec<T> {
    pub fn square(duration: T) -> Result<Self> {
        Ok(Self::Square {
            duration: positive("duration", duration)?,
        })
    }

    pub fn decay_exp(timescale: T) -> Result<Self> {
        Ok(Self::DecayExp {
            timescale: positive("timescale", timescale)?,
        })
    }

    pub fn gaussian(width: T) -> Result<Self> {
        Ok(Self::Gaussian {
            width: positive("width", width)?,
        })
    }

    pub fn delta(arrival: T) -> Result<Self> {
        if !arrival.is_finite() {
            return Err(Error::InvalidParameter {
                field: "arrival",
                reason: "must be finite".into(),
            });
        }
        Ok(Self::Delta { arrival })
    }

    pub fn sampled(times: Vec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        Ok(Self::Sampled(SampledPulse::new(times, values)?))
    }

    /// Re-checks the invariants of a (possibly hand-built) variant.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Square { duration } => positive("duration", *duration).map(drop),
            Self::DecayExp { timescale } => positive("timescale", *timescale).map(drop),
            Self::Gaussian { width } => positive("width", *width).map(drop),
            Self::Delta { arrival } => Self::delta(*arrival).map(drop),
            Self::OptimalTruncated(_) | Self::Sampled(_) => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Square { .. } => "square",
            Self::DecayExp { .. } => "decay-exp",
            Self::Gaussian { .. } => "gaussian",
            Self::Delta { .. } => "delta",
            Self::OptimalTruncated(_) => "optimal",
            Self::Sampled(_) => "sampled",
        }
    }

    pub fn is_pointwise(&self) -> bool {
        !matches!(self, Self::Delta { .. })
    }

    /// ξ(t).
    pub fn value(&self, t: T) -> Result<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        let real = |x: T| Complex::new(x, T::zero());
        Ok(match self {
            Self::Square { duration } => {
                if t >= T::zero() && t <= *duration {
                    real(T::one() / duration.sqrt())
                } else {
                    zero
                }
            }
            Self::DecayExp { timescale } => {
                if t >= T::zero() {
                    real((-t / (T::two() * *timescale)).exp() / timescale.sqrt())
                } else {
                    zero
                }
            }
            Self::Gaussian { width } => {
                let norm = (T::two() * T::PI() * *width * *width).powf(T::lit(0.25));
                real((-t * t / (T::lit(4.0) * *width * *width)).exp() / norm)
            }
            Self::Delta { .. } => return Err(Error::DeltaNotPointwise),
            Self::OptimalTruncated(p) => real(p.value(t)),
            Self::Sampled(s) => s.value(t),
        })
    }

    /// Interval outside which ξ vanishes or is negligible (below ~e^{−36} in amplitude).
    pub fn support(&self) -> (T, T) {
        match self {
            Self::Square { duration } => (T::zero(), *duration),
            Self::DecayExp { timescale } => (T::zero(), T::lit(DECAY_SPAN) * *timescale),
            Self::Gaussian { width } => {
                let s = T::lit(GAUSSIAN_SPAN) * *width;
                (-s, s)
            }
            Self::Delta { arrival } => (*arrival, *arrival),
            Self::OptimalTruncated(p) => (-p.duration, T::zero()),
            Self::Sampled(s) => (s.times[0], s.times[s.times.len() - 1]),
        }
    }

    /// Interval carrying the bulk of the pulse, used to lay out default time grids.
    pub fn nominal_window(&self) -> (T, T) {
        match self {
            Self::DecayExp { timescale } => (T::zero(), T::lit(5.0) * *timescale),
            Self::Gaussian { width } => {
                let s = T::lit(4.0) * *width;
                (-s, s)
            }
            _ => self.support(),
        }
    }

    /// Points where ξ or its derivative is discontinuous.
    pub fn breakpoints(&self) -> Vec<T> {
        match self {
            Self::Square { duration } => vec![T::zero(), *duration],
            Self::DecayExp { .. } => vec![T::zero()],
            Self::Gaussian { .. } => Vec::new(),
            Self::Delta { arrival } => vec![*arrival],
            Self::OptimalTruncated(p) => vec![-p.duration, T::zero()],
            Self::Sampled(s) => s.times.clone(),
        }
    }

    /// ∫|ξ(τ)|² dτ by adaptive quadrature over the support.
    pub fn norm(&self) -> Result<T> {
        Ok(self.intensity_moments()?[0])
    }

    /// T_σ from the closed forms where they exist, by quadrature otherwise.
    pub fn width(&self) -> Result<PulseWidth<T>> {
        let t_sigma = match self {
            Self::Square { duration } => *duration / T::lit(12.0).sqrt(),
            Self::DecayExp { timescale } => *timescale,
            Self::Gaussian { width } => *width,
            Self::Delta { .. } => T::zero(),
            Self::OptimalTruncated(_) | Self::Sampled(_) => return self.width_by_quadrature(),
        };
        Ok(PulseWidth { t_sigma })
    }

    /// T_σ from numerically integrated moments of |ξ|².
    pub fn width_by_quadrature(&self) -> Result<PulseWidth<T>> {
        if !self.is_pointwise() {
            return Ok(PulseWidth { t_sigma: T::zero() });
        }
        let [m0, m1, m2] = self.intensity_moments()?;
        if m0 == T::zero() {
            return Ok(PulseWidth { t_sigma: T::zero() });
        }
        let mean = m1 / m0;
        // Central second moment integrated directly to avoid m2/m0 − mean² cancellation.
        let (a, b) = self.support();
        let pts = split_points(a, b, &self.breakpoints());
        let mut f = |t: T| abs2(self.value(t).unwrap_or_default()) * (t - mean) * (t - mean);
        let var =
            integrate_split(&mut f, &pts, T::lit(QUAD_TOL) * (m2 / m0).max(T::one()))?.value / m0;
        Ok(PulseWidth {
            t_sigma: var.max(T::zero()).sqrt(),
        })
    }

    fn intensity_moments(&self) -> Result<[T; 3]> {
        if !self.is_pointwise() {
            return Err(Error::DeltaNotPointwise);
        }
        let (a, b) = self.support();
        let pts = split_points(a, b, &self.breakpoints());
        let mut out = [T::zero(); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut f = |t: T| {
                let i = abs2(self.value(t).unwrap_or_default());
                Complex::new(i * t.powi(k as i32), T::zero())
            };
            *slot = integrate_complex_split(&mut f, &pts, T::lit(QUAD_TOL))?
                .value
                .re;
        }
        Ok(out)
    }
}

/// Time-reversed response G(−τ) restricted to [−𝒯, 0] and scaled to unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPulse<T: Real = f64> {
    params: SystemParams<T>,
    kernel: Kernel<T>,
    duration: T,
    scale: T,
}

impl<T: Real> OptimalPulse<T> {
    pub fn new(params: SystemParams<T>, duration: T) -> Result<Self> {
        positive("truncation", duration)?;
        let mass = green_sq_integral(&params, duration)?;
        Ok(Self {
            params,
            kernel: Kernel::new(&params),
            duration,
            scale: T::one() / mass.sqrt(),
        })
    }

    pub fn params(&self) -> &SystemParams<T> {
        &self.params
    }

    pub fn duration(&self) -> T {
        self.duration
    }

    pub fn kernel(&self) -> &Kernel<T> {
        &self.kernel
    }

    /// Multiplier c in ξ(τ) = c·G(−τ).
    pub fn scale(&self) -> T {
        self.scale
    }

    /// c divided by the untruncated prefactor √(2γ)·f; tends to 1 as 𝒯 → ∞.
    pub fn prefactor_ratio(&self) -> T {
        let p = &self.params;
        self.scale / ((T::two() * p.gamma()).sqrt() * p.coupling())
    }

    pub fn value(&self, tau: T) -> T {
        if tau > T::zero() || tau < -self.duration {
            return T::zero();
        }
        self.scale * self.kernel.g(-tau)
    }

    /// Closed-form T_σ of the untruncated pulse.
    pub fn asymptotic_width(&self) -> T {
        let data = classify_regime(&self.params);
        let g = data.gamma;
        if data.regime == Regime::ExceptionalPoint {
            return T::lit(3.0).sqrt() / g;
        }
        let f2 = self.params.coupling() * self.params.coupling();
        (T::one() / (g * g) + (g * g - T::two() * f2) / (T::lit(4.0) * f2 * f2)).sqrt()
    }
}

/// Piecewise-linear envelope through the given samples, zero outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPulse<T: Real = f64> {
    times: Vec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> SampledPulse<T> {
    /// Validates the grid and rescales the samples to unit norm.
    ///
    /// An all-zero sample set is kept as is (the vacuum input).
    pub fn new(times: Vec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if times.len() < 2 || times.len() != values.len() {
            return Err(Error::InvalidParameter {
                field: "times",
                reason: format!(
                    "need at least two samples with matching values ({} times, {} values)",
                    times.len(),
                    values.len()
                ),
            });
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                field: "times",
                reason: "grid must be finite and strictly increasing".into(),
            });
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidParameter {
                field: "values",
                reason: "samples must be finite".into(),
            });
        }
        let mut pulse = Self { times, values };
        let n = pulse.exact_norm();
        if n > T::zero() {
            let s = T::one() / n.sqrt();
            for v in pulse.values.iter_mut() {
                *v = *v * s;
            }
        }
        Ok(pulse)
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Same pulse multiplied by e^{iφ}.
    pub fn with_phase(&self, phi: T) -> Self {
        let rot = Complex::new(phi.cos(), phi.sin());
        Self {
            times: self.times.clone(),
            values: self.values.iter().map(|v| *v * rot).collect(),
        }
    }

    // ∫|a + (b − a)s|² h ds = h(|a|² + Re(a b̄) + |b|²)/3 per segment.
    fn exact_norm(&self) -> T {
        let third = T::one() / T::lit(3.0);
        self.times
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(t, v)| {
                let h = t[1] - t[0];
                h * (abs2(v[0]) + (v[0] * v[1].conj()).re + abs2(v[1])) * third
            })
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn value(&self, t: T) -> Complex<T> {
        let n = self.times.len();
        if t < self.times[0] || t > self.times[n - 1] {
            return Complex::new(T::zero(), T::zero());
        }
        let i = self.times.partition_point(|&x| x <= t);
        if i >= n {
            return self.values[n - 1];
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let w = (t - t0) / (t1 - t0);
        self.values[i - 1] * (T::one() - w) + self.values[i] * w
    }
}
