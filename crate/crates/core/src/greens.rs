//! Causal response G(t) of the driven, damped charger–battery pair and its derivative.
//!
//! G solves G″ + γG′ + f²G = 0 with G(0) = 0, G′(0) = 1 and vanishes for t < 0.
//! The overdamped branch is written as `e^{r₊t}·(1 − e^{−√κ t})/√κ`, which
//! neither overflows for large t nor cancels for small √κ·t.

use num_complex::Complex;

use crate::error::Result;
use crate::numerics::quadrature::integrate;
use crate::params::{classify_regime, Regime, SystemParams};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensEval<T = f64> {
    pub g: T,
    pub g_prime: T,
    pub regime_used: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Branch<T> {
    Under {
        omega: T,
    },
    Ep,
    Over {
        r_plus: T,
        r_minus: T,
        sqrt_kappa: T,
    },
}

/// Precomputed response of one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel<T = f64> {
    gamma: T,
    branch: Branch<T>,
}

impl<T: Real> Kernel<T> {
    pub fn new(params: &SystemParams<T>) -> Self {
        let data = classify_regime(params);
        let branch = match data.regime {
            Regime::ExceptionalPoint => Branch::Ep,
            Regime::Underdamped => Branch::Under {
                omega: data.omega_rabi.expect("underdamped regime carries Ω"),
            },
            Regime::Overdamped => {
                let (r_plus, r_minus) = data.roots.expect("overdamped regime carries r±");
                Branch::Over {
                    r_plus,
                    r_minus,
                    sqrt_kappa: data.kappa.sqrt(),
                }
            }
        };
        Self {
            gamma: data.gamma,
            branch,
        }
    }

    pub fn regime(&self) -> Regime {
        match self.branch {
            Branch::Under { .. } => Regime::Underdamped,
            Branch::Ep => Regime::ExceptionalPoint,
            Branch::Over { .. } => Regime::Overdamped,
        }
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    /// Slowest exponential decay rate of G.
    pub fn decay_rate(&self) -> T {
        match self.branch {
            Branch::Over { r_plus, .. } => -r_plus,
            _ => self.gamma * T::half(),
        }
    }

    /// Poles (r₊, r₋) of the response; equal at the exceptional point.
    pub fn poles(&self) -> (Complex<T>, Complex<T>) {
        let re = -self.gamma * T::half();
        match self.branch {
            Branch::Under { omega } => (Complex::new(re, omega), Complex::new(re, -omega)),
            Branch::Ep => (Complex::new(re, T::zero()), Complex::new(re, T::zero())),
            Branch::Over {
                r_plus, r_minus, ..
            } => (
                Complex::new(r_plus, T::zero()),
                Complex::new(r_minus, T::zero()),
            ),
        }
    }

    pub fn g(&self, t: T) -> T {
        self.eval(t).g
    }

    pub fn g_prime(&self, t: T) -> T {
        self.eval(t).g_prime
    }

    pub fn eval(&self, t: T) -> GreensEval<T> {
        let regime_used = self.regime();
        if t < T::zero() {
            return GreensEval {
                g: T::zero(),
                g_prime: T::zero(),
                regime_used,
            };
        }
        let half_gamma = self.gamma * T::half();
        let (g, g_prime) = match self.branch {
            Branch::Under { omega } => {
                let env = (-half_gamma * t).exp();
                let (s, c) = (omega * t).sin_cos();
                (env * s / omega, env * (c - half_gamma * s / omega))
            }
            Branch::Ep => {
                let env = (-half_gamma * t).exp();
                (t * env, env * (T::one() - half_gamma * t))
            }
            Branch::Over {
                r_plus,
                r_minus,
                sqrt_kappa,
            } => {
                let env = (r_plus * t).exp();
                let m = (-sqrt_kappa * t).exp_m1();
                (
                    -env * m / sqrt_kappa,
                    env * (T::one() - r_minus * m / sqrt_kappa),
                )
            }
        };
        GreensEval {
            g,
            g_prime,
            regime_used,
        }
    }
}

pub fn green<T: Real>(params: &SystemParams<T>, t: T) -> GreensEval<T> {
    Kernel::new(params).eval(t)
}

/// Point beyond which ∫|G|² has converged to ~e^{−80} relative accuracy.
pub fn infinite_cutoff<T: Real>(params: &SystemParams<T>) -> T {
    T::lit(40.0) / Kernel::new(params).decay_rate()
}

/// ∫₀^upper |G(u)|² du; `upper` may be `+∞`.
///
/// Uses the closed form `(2 − e^{−γU}(2 + 2γU + γ²U²))/γ³` at the
/// exceptional point and adaptive quadrature elsewhere.
pub fn green_sq_integral<T: Real>(params: &SystemParams<T>, upper: T) -> Result<T> {
    let kernel = Kernel::new(params);
    if kernel.regime() == Regime::ExceptionalPoint {
        return Ok(green_sq_integral_ep(kernel.gamma(), upper));
    }
    green_sq_integral_quadrature(params, upper, T::lit(1e-12))
}

/// Closed form of ∫₀^U u² e^{−γu} du.
pub fn green_sq_integral_ep<T: Real>(gamma: T, upper: T) -> T {
    let two = T::two();
    let g3 = gamma * gamma * gamma;
    if upper.is_infinite() {
        return two / g3;
    }
    let x = gamma * upper;
    if x < T::lit(0.1) {
        // Lower incomplete gamma series x³ Σ (−x)^j / (j!(j+3)).
        let mut term = T::one();
        let mut sum = T::zero();
        for j in 0..25 {
            if j > 0 {
                term = term * (-x) / T::lit(j as f64);
            }
            sum = sum + term / T::lit(j as f64 + 3.0);
        }
        return x * x * x * sum / g3;
    }
    (two - (-x).exp() * (two + two * x + x * x)) / g3
}

/// ∫₀^upper |G(u)|² du by adaptive quadrature in every regime.
///
/// `rel_tol` is relative to the infinite-horizon value 1/(2γf²).
pub fn green_sq_integral_quadrature<T: Real>(
    params: &SystemParams<T>,
    upper: T,
    rel_tol: T,
) -> Result<T> {
    let kernel = Kernel::new(params);
    let upper = if upper.is_infinite() {
        infinite_cutoff(params)
    } else {
        upper.min(infinite_cutoff(params))
    };
    if !(upper > T::zero()) {
        return Ok(T::zero());
    }
    let f = params.coupling();
    let scale = T::one() / (T::two() * kernel.gamma() * f * f);
    let r = integrate(
        |u| {
            let g = kernel.g(u);
            g * g
        },
        T::zero(),
        upper,
        rel_tol * scale,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ode::{DormandPrince, OdeOptions, State};

    fn p(g: f64, ge: f64, f: f64) -> SystemParams {
        SystemParams::new(g, ge, f, 1.0).unwrap()
    }

    fn all_regimes() -> Vec<SystemParams> {
        vec![
            p(1.0, 0.0, 1.0),
            p(1.0, 0.0, 0.25),
            p(1.0, 0.0, 0.1),
            p(1.0, 0.5, 0.2),
            p(2.0, 1.0, 0.75),
            p(1.0, 1.0, 3.0),
        ]
    }

    #[test]
    fn ep_peak() {
        let e = green(&p(1.0, 0.0, 0.25), 4.0);
        assert_eq!(e.regime_used, Regime::ExceptionalPoint);
        assert!((e.g - 4.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!(e.g_prime.abs() < 1e-15);
    }

    #[test]
    fn initial_conditions_and_causality() {
        for q in all_regimes() {
            let e = green(&q, 0.0);
            assert_eq!(e.g, 0.0);
            assert!((e.g_prime - 1.0).abs() < 1e-15);
            let before = green(&q, -1e-3);
            assert_eq!((before.g, before.g_prime), (0.0, 0.0));
        }
    }

    #[test]
    fn matches_ode_fundamental_solution() {
        // x'' + γx' + f²x = 0 with x(0) = 0, x'(0) = 1, integrated by the DP5 stepper.
        for q in all_regimes() {
            let (gamma, f) = (q.gamma(), q.coupling());
            let mut rhs = |_t: f64, y: &State<f64, 2>| [y[1], -y[1] * gamma - y[0] * (f * f)];
            let opts = OdeOptions {
                rtol: 1e-12,
                atol: 1e-14,
                max_steps: 1_000_000,
            };
            let zero = Complex::new(0.0, 0.0);
            let mut dp = DormandPrince::new(0.0, [zero, Complex::new(1.0, 0.0)], opts);
            let k = Kernel::new(&q);
            for i in 1..=20 {
                let t = i as f64 * 0.5;
                dp.advance(&mut rhs, t).unwrap();
                let e = k.eval(t);
                assert!((dp.y[0].re - e.g).abs() < 1e-8, "{q:?} t={t}");
                assert!((dp.y[1].re - e.g_prime).abs() < 1e-8, "{q:?} t={t}");
            }
        }
    }

    #[test]
    fn ode_residual_by_finite_differences() {
        for q in all_regimes() {
            let k = Kernel::new(&q);
            let (gamma, f) = (q.gamma(), q.coupling());
            let h = 1e-4;
            for i in 1..200 {
                let t = i as f64 * 20.0 / gamma / 200.0;
                let g2 = (k.g(t + h) - 2.0 * k.g(t) + k.g(t - h)) / (h * h);
                let g1 = (k.g(t + h) - k.g(t - h)) / (2.0 * h);
                assert!((g2 + gamma * g1 + f * f * k.g(t)).abs() < 1e-6);
                assert!((g1 - k.g_prime(t)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn overdamped_far_tail_is_finite() {
        let q = p(1.0, 0.0, 0.01);
        let e = green(&q, 1e5);
        assert!(e.g.is_finite() && e.g_prime.is_finite());
        assert!(e.g >= 0.0);
    }

    #[test]
    fn square_integral_ep_closed_form() {
        let q = p(1.0, 0.0, 0.25);
        assert!((green_sq_integral(&q, f64::INFINITY).unwrap() - 16.0).abs() < 1e-12);
        let quad = green_sq_integral_quadrature(&q, f64::INFINITY, 1e-13).unwrap();
        assert!((quad - 16.0).abs() < 1e-6);
        assert_eq!(green_sq_integral(&q, 0.0).unwrap(), 0.0);
        for u in [0.01, 0.1, 0.3, 2.0, 9.0] {
            let quad = green_sq_integral_quadrature(&q, u, 1e-13).unwrap();
            let closed = green_sq_integral(&q, u).unwrap();
            assert!(
                (quad - closed).abs() <= 2e-13 * 16.0,
                "u={u}: {quad} vs {closed}"
            );
        }
    }

    #[test]
    fn kernel_norm_matches_bound_in_every_regime() {
        for q in all_regimes() {
            let v = green_sq_integral(&q, f64::INFINITY).unwrap();
            let norm = q.coupling().powi(2) * q.gamma_pulse() * v;
            assert!((norm - q.charging_bound()).abs() < 1e-6, "{q:?}: {norm}");
        }
        let q = p(1.0, 0.5, 0.2);
        let v = green_sq_integral(&q, f64::INFINITY).unwrap();
        assert!((0.04 * v - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn branch_continuity_near_ep() {
        // |G_branch − G_EP| should scale linearly with the relative offset δ.
        for ge in [0.0, 0.5, 1.0] {
            let base = p(1.0, ge, 1.0);
            let f_ep = base.f_ep();
            let ep = Kernel::new(&base.with_coupling(f_ep).unwrap());
            let gamma = base.gamma();
            let mut ratios = Vec::new();
            for delta in [1e-3, 1e-5] {
                for sign in [-1.0, 1.0] {
                    let k = Kernel::new(&base.with_coupling(f_ep * (1.0 + sign * delta)).unwrap());
                    let mut worst = 0.0f64;
                    for i in 0..=400 {
                        let t = i as f64 * 20.0 / gamma / 400.0;
                        worst = worst.max((k.g(t) - ep.g(t)).abs());
                    }
                    ratios.push(worst / delta);
                }
            }
            let c = ratios.iter().cloned().fold(0.0, f64::max);
            let c_min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(c < 20.0 / gamma / gamma && c_min > 0.5 * c, "{ratios:?}");
        }
    }

    #[test]
    fn generic_over_f32() {
        let q = SystemParams::<f32>::new(1.0, 0.0, 0.25, 1.0).unwrap();
        let e = green(&q, 4.0f32);
        assert!((e.g - 4.0 * (-1.0f32).exp()).abs() < 1e-6);
    }
}
