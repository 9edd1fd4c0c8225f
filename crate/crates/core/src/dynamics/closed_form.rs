//! Analytic amplitudes for the standard pulse shapes.
//!
//! Every non-EP response is a sum of two exponentials,
//! G(u) = (e^{r₊u} − e^{r₋u})/(r₊ − r₋), so the convolutions reduce to the
//! one-pole moments
//!
//!   I(r) = ∫ e^{r(t−τ)} ξ(τ) dτ,   J(r) = ∫ (t−τ) e^{r(t−τ)} ξ(τ) dτ
//!
//! over τ ≤ t. At the exceptional point G(u) = u·e^{ru} needs J as well.
//! Square, decaying-exponential and optimal pulses are sums of polynomial
//! times exponential pieces and integrate in closed form; the Gaussian goes
//! through erfcx.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::greens::Kernel;
use crate::numerics::faddeeva::erfcx;
use crate::params::{Regime, SystemParams};
use crate::pulse::PulseSpec;
use crate::scalar::Real;

use super::trace::{AmplitudeTrace, Method};

/// Charger and battery amplitudes at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes<T = f64> {
    pub alpha0: Complex<T>,
    pub alpha1: Complex<T>,
}

/// Battery amplitude α₁(t) from the closed forms.
pub fn amplitude_closed_form<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    t: T,
) -> Result<Complex<T>> {
    Ok(amplitudes_closed_form(params, spec, t)?.alpha1)
}

/// Both amplitudes α₀(t), α₁(t) from the closed forms.
pub fn amplitudes_closed_form<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    t: T,
) -> Result<Amplitudes<T>> {
    ClosedForm::new(params, spec)?.at(t)
}

/// Closed-form amplitudes on a grid.
pub fn trace_closed_form<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    times: &[T],
) -> Result<AmplitudeTrace<T>> {
    let cf = ClosedForm::new(params, spec)?;
    let mut alpha0 = Vec::with_capacity(times.len());
    let mut alpha1 = Vec::with_capacity(times.len());
    for &t in times {
        let a = cf.at(t)?;
        alpha0.push(a.alpha0);
        alpha1.push(a.alpha1);
    }
    Ok(AmplitudeTrace::new(
        params,
        times.to_vec(),
        alpha0,
        alpha1,
        Method::ClosedForm,
    ))
}

/// Closed-form evaluator bound to one parameter set and pulse.
#[derive(Debug, Clone)]
pub struct ClosedForm<T: Real> {
    kernel: Kernel<T>,
    coupling: T,
    sqrt_gamma_pulse: T,
    shape: Shape<T>,
}

#[derive(Debug, Clone)]
enum Shape<T: Real> {
    Pieces(Vec<Piece<T>>),
    Gaussian { width: T },
    Delta { arrival: T },
}

/// c·(p₀ + p₁τ)·e^{sτ} on [a, b]; `b` may be +∞.
#[derive(Debug, Clone, Copy)]
struct Piece<T> {
    coef: Complex<T>,
    poly: [T; 2],
    rate: Complex<T>,
    a: T,
    b: T,
}

fn cplx<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

impl<T: Real> ClosedForm<T> {
    pub fn new(params: &SystemParams<T>, spec: &PulseSpec<T>) -> Result<Self> {
        spec.validate()?;
        let shape = match spec {
            PulseSpec::Square { duration } => Shape::Pieces(vec![Piece {
                coef: cplx(T::one() / duration.sqrt()),
                poly: [T::one(), T::zero()],
                rate: cplx(T::zero()),
                a: T::zero(),
                b: *duration,
            }]),
            PulseSpec::DecayExp { timescale } => Shape::Pieces(vec![Piece {
                coef: cplx(T::one() / timescale.sqrt()),
                poly: [T::one(), T::zero()],
                rate: cplx(-T::one() / (T::two() * *timescale)),
                a: T::zero(),
                b: T::infinity(),
            }]),
            PulseSpec::Gaussian { width } => Shape::Gaussian { width: *width },
            PulseSpec::Delta { arrival } => Shape::Delta { arrival: *arrival },
            PulseSpec::OptimalTruncated(p) => {
                // ξ(τ) = c·G(−τ) written with the pulse's own poles.
                let k = p.kernel();
                let (a, b) = (-p.duration(), T::zero());
                let c = p.scale();
                Shape::Pieces(match k.regime() {
                    Regime::ExceptionalPoint => vec![Piece {
                        coef: cplx(c),
                        poly: [T::zero(), -T::one()],
                        rate: cplx(k.gamma() * T::half()),
                        a,
                        b,
                    }],
                    _ => {
                        let (rp, rm) = k.poles();
                        let w = cplx(c) / (rp - rm);
                        vec![
                            Piece {
                                coef: w,
                                poly: [T::one(), T::zero()],
                                rate: -rp,
                                a,
                                b,
                            },
                            Piece {
                                coef: -w,
                                poly: [T::one(), T::zero()],
                                rate: -rm,
                                a,
                                b,
                            },
                        ]
                    }
                })
            }
            PulseSpec::Sampled(_) => return Err(Error::UnsupportedShape("sampled")),
        };
        Ok(Self {
            kernel: Kernel::new(params),
            coupling: params.coupling(),
            sqrt_gamma_pulse: params.gamma_pulse().sqrt(),
            shape,
        })
    }

    pub fn at(&self, t: T) -> Result<Amplitudes<T>> {
        let k = &self.kernel;
        let i = Complex::new(T::zero(), T::one());
        if let Shape::Delta { arrival } = self.shape {
            let e = k.eval(t - arrival);
            return Ok(Amplitudes {
                alpha0: cplx(-e.g_prime),
                alpha1: i * self.coupling * e.g,
            });
        }
        // conv_g = ∫G(t−τ)ξ dτ, conv_gp = ∫G′(t−τ)ξ dτ
        let (conv_g, conv_gp) = match k.regime() {
            Regime::ExceptionalPoint => {
                let r = cplx(-k.gamma() * T::half());
                let (m_i, m_j) = (self.moment(r, t, false), self.moment(r, t, true));
                (m_j, m_i + r * m_j)
            }
            _ => {
                let (rp, rm) = k.poles();
                let (ip, im) = (self.moment(rp, t, false), self.moment(rm, t, false));
                let d = rp - rm;
                ((ip - im) / d, (rp * ip - rm * im) / d)
            }
        };
        // Every closed-form pulse is real, so the imaginary parts are rounding noise.
        let (conv_g, conv_gp) = (cplx(conv_g.re), cplx(conv_gp.re));
        Ok(Amplitudes {
            alpha0: -conv_gp * self.sqrt_gamma_pulse,
            alpha1: i * conv_g * (self.coupling * self.sqrt_gamma_pulse),
        })
    }

    fn moment(&self, r: Complex<T>, t: T, lagged: bool) -> Complex<T> {
        match &self.shape {
            Shape::Pieces(pieces) => pieces
                .iter()
                .map(|p| piece_moment(p, r, t, lagged))
                .fold(cplx(T::zero()), |a, b| a + b),
            Shape::Gaussian { width } => gaussian_moment(*width, r, t, lagged),
            Shape::Delta { .. } => unreachable!("delta handled before moments"),
        }
    }
}

/// E_k(z) = ∫₀¹ v^k e^{zv} dv for k = 0, 1, 2; callers keep Re z ≤ 0.
fn e_moments<T: Real>(z: Complex<T>) -> [Complex<T>; 3] {
    if z.norm() < T::two() {
        let mut out = [cplx(T::zero()); 3];
        let mut term = cplx(T::one());
        for j in 0..40 {
            if j > 0 {
                term = term * z / T::lit(j as f64);
            }
            for (k, slot) in out.iter_mut().enumerate() {
                *slot = *slot + term / T::lit((j + k + 1) as f64);
            }
            if term.norm() < T::epsilon() * T::lit(1e-3) {
                break;
            }
        }
        return out;
    }
    let ez = z.exp();
    let one = cplx(T::one());
    let two = cplx(T::two());
    let z2 = z * z;
    [
        (ez - one) / z,
        (ez * (z - one) + one) / z2,
        (ez * (z2 - z * T::two() + two) - two) / (z2 * z),
    ]
}

/// ∫_a^{min(t,b)} (t−τ)^{lag} e^{r(t−τ)} c(p₀ + p₁τ)e^{sτ} dτ.
fn piece_moment<T: Real>(p: &Piece<T>, r: Complex<T>, t: T, lagged: bool) -> Complex<T> {
    if t <= p.a {
        return cplx(T::zero());
    }
    let m = t.min(p.b);
    let len = m - p.a;
    // Q(τ) = (p₀ + p₁τ)·(t − τ)^lag as q₀ + q₁τ + q₂τ²
    let q = if lagged {
        [p.poly[0] * t, p.poly[1] * t - p.poly[0], -p.poly[1]]
    } else {
        [p.poly[0], p.poly[1], T::zero()]
    };
    let value = |x: T| q[0] + x * (q[1] + x * q[2]);
    let slope = |x: T| q[1] + T::two() * q[2] * x;
    let d = p.rate - r;
    // Expand around the end where e^{dτ} is largest so E_k sees Re z ≤ 0.
    let (anchor, prefactor, z, sign) = if d.re >= T::zero() {
        (m, (r * (t - m) + p.rate * m).exp(), -d * len, -T::one())
    } else {
        (p.a, (r * (t - p.a) + p.rate * p.a).exp(), d * len, T::one())
    };
    let e = e_moments(z);
    let sum =
        e[0] * value(anchor) + e[1] * (sign * len * slope(anchor)) + e[2] * (q[2] * len * len);
    p.coef * prefactor * sum * len
}

/// I(r) or J(r) for the unit-norm Gaussian of width `w`.
fn gaussian_moment<T: Real>(w: T, r: Complex<T>, t: T, lagged: bool) -> Complex<T> {
    let pi = T::PI();
    let norm = T::one() / (T::two() * pi * w * w).powf(T::lit(0.25));
    let a = (-t * t / (T::lit(4.0) * w * w)).exp();
    let shifted = r * (T::two() * w * w) + t; // t + 2rT²
    let u = shifted / (T::two() * w);
    // Both branches evaluate A·e^{u²}·erfc(−u) without overflow.
    let scaled = if u.re <= T::zero() {
        erfcx(-u) * a
    } else {
        (r * t + r * r * w * w).exp() * T::two() - erfcx(u) * a
    };
    let sqrt_pi = pi.sqrt();
    if lagged {
        (cplx(T::two() * w * a) + shifted * scaled * sqrt_pi) * (norm * w)
    } else {
        scaled * (norm * w * sqrt_pi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::{integrate_complex_split, split_points};
    use crate::pulse::OptimalPulse;

    fn p(ge: f64, f: f64) -> SystemParams {
        SystemParams::<f64>::new(1.0, ge, f, 1.0).unwrap()
    }

    fn regimes() -> Vec<SystemParams> {
        vec![
            p(0.0, 1.0),
            p(0.0, 0.25),
            p(0.0, 0.1),
            p(1.0, 0.5),
            p(0.5, 2.0),
            p(0.5, 0.2),
        ]
    }

    fn brute_moment(spec: &PulseSpec, r: Complex<f64>, t: f64, lagged: bool) -> Complex<f64> {
        let (a, b) = spec.support();
        if t <= a {
            return Complex::new(0.0, 0.0);
        }
        let pts = split_points(a, t.min(b), &spec.breakpoints());
        let mut f = |tau: f64| {
            let lag = if lagged { t - tau } else { 1.0 };
            (r * (t - tau)).exp() * lag * spec.value(tau).unwrap()
        };
        integrate_complex_split(&mut f, &pts, 1e-13).unwrap().value
    }

    #[test]
    fn e_moments_match_quadrature() {
        for z in [
            Complex::new(-0.3, 0.2),
            Complex::new(-1.9, 0.0),
            Complex::new(-2.1, 1.0),
            Complex::new(0.0, 5.0),
            Complex::new(-40.0, -3.0),
        ] {
            let e = e_moments(z);
            for (k, ek) in e.iter().enumerate() {
                let mut f = |v: f64| (z * v).exp() * v.powi(k as i32);
                let q = integrate_complex_split(&mut f, &[0.0, 1.0], 1e-13)
                    .unwrap()
                    .value;
                assert!((ek - q).norm() < 2e-13, "k={k} z={z}: {ek} vs {q}");
            }
        }
    }

    #[test]
    fn moments_match_quadrature() {
        let shapes = [
            PulseSpec::<f64>::square(2.5).unwrap(),
            PulseSpec::<f64>::decay_exp(1.3).unwrap(),
            PulseSpec::<f64>::gaussian(0.8).unwrap(),
            PulseSpec::<f64>::gaussian(3.0).unwrap(),
        ];
        let rates = [
            Complex::new(-0.25, 0.0),
            Complex::new(-0.5, 0.97),
            Complex::new(-0.5, -0.97),
            Complex::new(-1.9, 0.0),
            Complex::new(-0.01, 0.0),
        ];
        for spec in &shapes {
            let cf = ClosedForm::new(&p(0.0, 1.0), spec).unwrap();
            for &r in &rates {
                for t in [-1.0, 0.3, 2.0, 4.0, 9.0] {
                    for lagged in [false, true] {
                        let got = cf.moment(r, t, lagged);
                        let want = brute_moment(spec, r, t, lagged);
                        assert!(
                            (got - want).norm() < 1e-10,
                            "{} r={r} t={t} lag={lagged}: {got} vs {want}",
                            spec.name()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn delta_pulse_peak_at_ep() {
        let q = p(0.0, 0.25);
        let spec = PulseSpec::<f64>::delta(0.0).unwrap();
        let a = amplitude_closed_form(&q, &spec, 4.0).unwrap();
        assert!((a.norm_sqr() - (-2.0f64).exp()).abs() < 1e-15);
        let before = amplitudes_closed_form(&q, &spec, -0.1).unwrap();
        assert_eq!(before.alpha1.norm(), 0.0);
        let at = amplitudes_closed_form(&q, &spec, 0.0).unwrap();
        assert_eq!(at.alpha0, Complex::new(-1.0, 0.0));
    }

    #[test]
    fn zero_before_pulse() {
        for q in regimes() {
            for spec in [
                PulseSpec::<f64>::square(1.0).unwrap(),
                PulseSpec::<f64>::decay_exp(1.0).unwrap(),
            ] {
                let a = amplitudes_closed_form(&q, &spec, -0.5).unwrap();
                assert_eq!((a.alpha0.norm(), a.alpha1.norm()), (0.0, 0.0));
            }
        }
    }

    #[test]
    fn optimal_pulse_saturates_at_zero() {
        for q in regimes() {
            let opt = OptimalPulse::new(q, crate::greens::infinite_cutoff(&q)).unwrap();
            let a = amplitude_closed_form(&q, &PulseSpec::OptimalTruncated(opt), 0.0).unwrap();
            assert!(
                (a.norm_sqr() - q.charging_bound()).abs() < 1e-9,
                "{q:?}: {}",
                a.norm_sqr()
            );
        }
    }

    #[test]
    fn sampled_is_unsupported() {
        let s = PulseSpec::<f64>::sampled(vec![0.0, 1.0], vec![Complex::new(1.0, 0.0); 2]).unwrap();
        assert_eq!(
            amplitude_closed_form(&p(0.0, 1.0), &s, 1.0).unwrap_err(),
            Error::UnsupportedShape("sampled")
        );
    }

    #[test]
    fn gaussian_far_tail_is_finite() {
        let q = p(0.0, 3.0);
        let spec = PulseSpec::<f64>::gaussian(0.05).unwrap();
        for t in [-50.0, -0.6, 0.0, 0.6, 80.0] {
            let a = amplitudes_closed_form(&q, &spec, t).unwrap();
            assert!(
                a.alpha0.norm().is_finite() && a.alpha1.norm().is_finite(),
                "t={t}"
            );
        }
    }
}
