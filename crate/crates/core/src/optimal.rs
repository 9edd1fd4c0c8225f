//! Matched-filter pulse, saturation bound, minimum charging time and power-optimal duration.
//!
//! For a pulse of duration 𝒯 ending at t = 0 the best reachable charge is
//! p(𝒯) = f²Γ∫₀^𝒯 G(u)² du, attained by ξ ∝ G(−τ). Everything here is a
//! statement about this one monotone function.

use crate::error::{Error, Result};
use crate::greens::{green_sq_integral, green_sq_integral_quadrature, infinite_cutoff, Kernel};
use crate::numerics::quadrature::integrate;
use crate::numerics::roots::{find_root, golden_section_max, RootResult};
use crate::params::{Regime, SystemParams};
use crate::pulse::{OptimalPulse, PulseSpec};
use crate::scalar::Real;

/// Root-finder diagnostics attached to solver outputs.
pub type SolverReport<T = f64> = RootResult<T>;

/// Relative accuracy (w.r.t. the bound) of the quadrature-based p(𝒯).
pub const P_QUAD_TOL: f64 = 1e-13;
/// Residual tolerance, relative to the bound, of the min-time and stationarity roots.
pub const ROOT_TOL: f64 = 1e-11;
/// Largest allowed |kernel_norm_sq − bound|.
pub const BOUND_TOL: f64 = 1e-6;

/// The matched-filter pulse on [−𝒯, 0], renormalized to unit norm.
pub fn optimal_pulse<T: Real>(params: &SystemParams<T>, truncation: T) -> Result<PulseSpec<T>> {
    Ok(PulseSpec::OptimalTruncated(OptimalPulse::new(
        *params, truncation,
    )?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargingBound<T = f64> {
    /// Γ/(Γ + Γ⊥).
    pub bound: T,
    /// f²Γ‖G‖² by quadrature.
    pub kernel_norm_sq: T,
}

/// Saturation value of the battery population, checked against the integrated kernel norm.
pub fn charging_bound<T: Real>(params: &SystemParams<T>) -> Result<ChargingBound<T>> {
    let bound = params.charging_bound();
    let norm = p_of_duration_quadrature(params, T::infinity())?;
    if (norm - bound).abs() > T::lit(BOUND_TOL) {
        return Err(Error::InvalidParameter {
            field: "coupling",
            reason: format!(
                "kernel norm {} disagrees with bound {}",
                norm.as_f64(),
                bound.as_f64()
            ),
        });
    }
    Ok(ChargingBound {
        bound,
        kernel_norm_sq: norm,
    })
}

fn prefactor<T: Real>(params: &SystemParams<T>) -> T {
    params.coupling() * params.coupling() * params.gamma_pulse()
}

/// p(𝒯): the closed form at the exceptional point, quadrature elsewhere.
pub fn p_of_duration<T: Real>(params: &SystemParams<T>, duration: T) -> Result<T> {
    check_duration(duration)?;
    Ok(prefactor(params) * green_sq_integral(params, duration)?)
}

/// p(𝒯) by adaptive quadrature in every regime.
pub fn p_of_duration_quadrature<T: Real>(params: &SystemParams<T>, duration: T) -> Result<T> {
    check_duration(duration)?;
    Ok(prefactor(params) * green_sq_integral_quadrature(params, duration, T::lit(P_QUAD_TOL))?)
}

/// p′(𝒯) = f²Γ G(𝒯)².
pub fn p_derivative<T: Real>(params: &SystemParams<T>, duration: T) -> T {
    let g = Kernel::new(params).g(duration);
    prefactor(params) * g * g
}

/// p(𝒯)/bound = 1 − e^{−x}(1 + x + x²/2) with x = γ𝒯, the exceptional-point form.
pub fn p_ratio_ep<T: Real>(x: T) -> T {
    if x < T::lit(0.1) {
        // x³/6 − x⁴/8 + … avoids cancelling against 1.
        let mut term = T::one();
        let mut sum = T::zero();
        for j in 0..25 {
            if j > 0 {
                term = term * (-x) / T::lit(j as f64);
            }
            sum = sum + term / T::lit(j as f64 + 3.0);
        }
        return x * x * x * sum * T::half();
    }
    T::one() - (-x).exp() * (T::one() + x + x * x * T::half())
}

fn check_duration<T: Real>(duration: T) -> Result<()> {
    if duration >= T::zero() && !duration.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "truncation",
            reason: format!("{} must be >= 0", duration.as_f64()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinTimeResult<T = f64> {
    pub t_min: T,
    pub p_threshold: T,
    pub solver: SolverReport<T>,
    /// (1/γ) ln(1/(1 − q)) with q = p_th/bound.
    pub asymptotic_estimate: T,
    /// Root of the exceptional-point transcendental equation, when applicable.
    pub closed_form_t_min: Option<T>,
}

/// Shortest pulse duration reaching charge `p_th`.
pub fn min_time<T: Real>(params: &SystemParams<T>, p_th: T) -> Result<MinTimeResult<T>> {
    let bound = params.charging_bound();
    if !(p_th > T::zero()) || !p_th.is_finite() {
        return Err(Error::InvalidParameter {
            field: "threshold",
            reason: format!("{} must be finite and > 0", p_th.as_f64()),
        });
    }
    if p_th >= bound {
        return Err(Error::ThresholdUnreachable {
            p_th: p_th.as_f64(),
            bound: bound.as_f64(),
        });
    }
    let gamma = params.gamma();
    let q = p_th / bound;
    let residual = |t: T| p_of_duration_quadrature(params, t).map(|p| p - p_th);

    // p is monotone, so doubling the upper end terminates.
    let mut hi = T::lit(10.0) / gamma;
    let limit = infinite_cutoff(params) * T::lit(4.0);
    while residual(hi)? <= T::zero() {
        hi = hi * T::two();
        if hi > limit {
            return Err(Error::ThresholdUnreachable {
                p_th: p_th.as_f64(),
                bound: bound.as_f64(),
            });
        }
    }
    let mut failure = None;
    let solver = find_root(
        |t| {
            residual(t).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                T::zero()
            })
        },
        T::zero(),
        hi,
        T::lit(ROOT_TOL) * bound,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let solver = solver?;

    let closed_form_t_min = if params.regime() == Regime::ExceptionalPoint {
        Some(min_time_ep_closed(q)? / gamma)
    } else {
        None
    };
    Ok(MinTimeResult {
        t_min: solver.root,
        p_threshold: p_th,
        solver,
        asymptotic_estimate: (T::one() / (T::one() - q)).ln() / gamma,
        closed_form_t_min,
    })
}

/// Root x of e^{−x}(1 + x + x²/2) = 1 − q.
pub fn min_time_ep_closed<T: Real>(q: T) -> Result<T> {
    let mut hi = T::lit(10.0);
    while p_ratio_ep(hi) <= q {
        hi = hi * T::two();
    }
    Ok(find_root(|x| p_ratio_ep(x) - q, T::zero(), hi, T::lit(1e-14))?.root)
}

/// One local maximum of P(T) = p(T)/T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCandidate<T = f64> {
    pub t: T,
    pub power: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult<T = f64> {
    pub t_star: T,
    pub p_at_star: T,
    /// P* = p(T*)/T*.
    pub power: T,
    /// γT*.
    pub x_star: T,
    /// p′(T*)T* − p(T*).
    pub stationarity_residual: T,
    /// Every interior local maximum found, in increasing T.
    pub candidates: Vec<PowerCandidate<T>>,
}

/// Duration T* maximizing the mean charging power p(T)/T.
///
/// Scans the stationarity function h(x) = p′(T)T − p(T), x = γT, for
/// downward sign changes and refines each one. Off the exceptional point
/// |G|² may oscillate, giving several local maxima; all are reported and the
/// largest power wins.
pub fn power_optimal<T: Real>(params: &SystemParams<T>) -> Result<PowerResult<T>> {
    let gamma = params.gamma();
    let kernel = Kernel::new(params);
    let bound = params.charging_bound();
    let c = prefactor(params);
    let p_at = |x: T| p_of_duration(params, x / gamma);
    let h_at = |x: T| -> Result<T> {
        let t = x / gamma;
        let g = kernel.g(t);
        Ok(c * g * g * t - p_at(x)?)
    };

    let x_max = gamma * infinite_cutoff(params);
    let mut step = x_max / T::lit(800.0);
    if let Regime::Underdamped = kernel.regime() {
        let (rp, _) = kernel.poles();
        // Eight samples per half period of G².
        step = step.min(gamma * T::PI() / (T::lit(8.0) * rp.im));
    }
    let n = (x_max / step)
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX)
        .min(2_000_000);

    // p accumulated panel by panel keeps the scan linear in the grid size.
    let mut brackets = Vec::new();
    let (mut x_prev, mut p_prev, mut h_prev) = (T::zero(), T::zero(), T::zero());
    for k in 1..=n {
        let x = step * T::lit(k as f64);
        let p = p_prev
            + c * integrate(
                |u| {
                    let g = kernel.g(u);
                    g * g
                },
                x_prev / gamma,
                x / gamma,
                T::lit(P_QUAD_TOL) / c,
            )?
            .value;
        let t = x / gamma;
        let g = kernel.g(t);
        let h = c * g * g * t - p;
        if h_prev > T::zero() && h <= T::zero() {
            brackets.push((x_prev, x));
        }
        x_prev = x;
        p_prev = p;
        h_prev = h;
    }
    if brackets.is_empty() {
        return Err(Error::NoInteriorMaximum(format!(
            "p′T − p never turns negative on γT ∈ (0, {}]",
            x_max.as_f64()
        )));
    }

    let tol = T::lit(ROOT_TOL) * bound;
    let mut candidates = Vec::with_capacity(brackets.len());
    for (lo, hi) in brackets {
        let mut failure = None;
        let root = find_root(
            |x| {
                h_at(x).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    T::zero()
                })
            },
            lo,
            hi,
            tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let x = match root {
            Ok(r) => r.root,
            // Noise-limited stationarity: maximize P directly on the bracket.
            Err(Error::RootToleranceUnreachable { .. }) => {
                golden_section_max(
                    |x| p_at(x).map(|p| p * gamma / x).unwrap_or(T::zero()),
                    lo,
                    hi,
                    T::lit(1e-10),
                )
                .0
            }
            Err(e) => return Err(e),
        };
        let t = x / gamma;
        candidates.push(PowerCandidate {
            t,
            power: p_at(x)? / t,
        });
    }
    let best =
        candidates
            .iter()
            .copied()
            .fold(candidates[0], |a, b| if b.power > a.power { b } else { a });
    let x_star = best.t * gamma;
    Ok(PowerResult {
        t_star: best.t,
        p_at_star: best.power * best.t,
        power: best.power,
        x_star,
        stationarity_residual: h_at(x_star)?,
        candidates,
    })
}

/// Root of e^x = 1 + x + x²/2 + x³/2, the exceptional-point stationarity condition.
pub fn power_optimal_ep_closed<T: Real>() -> Result<T> {
    // Written as 1 − e^{−x}(1 + x + x²/2 + x³/2) to stay bounded.
    let g =
        |x: T| T::one() - (-x).exp() * (T::one() + x + x * x * T::half() + x * x * x * T::half());
    Ok(find_root(g, T::one(), T::lit(6.0), T::lit(1e-15))?.root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{amplitude_closed_form, amplitude_ode_oracle};

    fn p(ge: f64, f: f64) -> SystemParams {
        SystemParams::<f64>::new(1.0, ge, f, 1.0).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(charging_bound(&p(0.0, 0.25)).unwrap().bound, 1.0);
        assert_eq!(charging_bound(&p(1.0, 0.5)).unwrap().bound, 0.5);
        for f in [0.1, 0.375, 2.0] {
            let b = charging_bound(&p(0.5, f)).unwrap();
            assert!((b.kernel_norm_sq - 2.0 / 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn p_at_zero_and_near_power_optimum() {
        let q = p(0.0, 0.25);
        assert_eq!(p_of_duration(&q, 0.0).unwrap(), 0.0);
        let v = p_of_duration(&q, 3.389 / 0.5).unwrap();
        assert!((v - 0.657).abs() < 2e-3);
        assert!(p_of_duration(&q, -1.0).is_err());
    }

    #[test]
    fn ep_ratio_series_branch_is_continuous() {
        let below: f64 = p_ratio_ep(0.1 - 1e-12);
        let above = p_ratio_ep(0.1 + 1e-12);
        assert!((below - above).abs() < 1e-14);
        let x = 1e-3f64;
        let taylor = x.powi(3) / 6.0 - x.powi(4) / 8.0 + x.powi(5) / 20.0 - x.powi(6) / 72.0;
        assert!((p_ratio_ep(x) - taylor).abs() < 1e-12 * taylor);
    }

    #[test]
    fn p_matches_ode_with_truncated_optimal_pulse() {
        for q in [p(0.0, 1.0), p(0.5, 0.2), p(1.0, 2.0)] {
            let dur = 3.0 / q.gamma();
            let spec = optimal_pulse(&q, dur).unwrap();
            let ode = amplitude_ode_oracle(&q, &spec, &[0.0]).unwrap();
            let want = p_of_duration(&q, dur).unwrap();
            assert!((ode.alpha1[0].norm_sqr() - want).abs() < 1e-5);
            let cf = amplitude_closed_form(&q, &spec, 0.0).unwrap();
            assert!((cf.norm_sqr() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn min_time_at_half() {
        let r = min_time(&p(0.0, 0.25), 0.5).unwrap();
        assert!((r.t_min * 0.5 - 2.674_060_313_723_56).abs() < 1e-9);
        assert!((r.closed_form_t_min.unwrap() - r.t_min).abs() < 1e-9);
        assert!(r.solver.residual.abs() <= 1e-10);
    }

    #[test]
    fn min_time_small_threshold_is_short() {
        let r = min_time(&p(0.0, 0.25), 1e-9).unwrap();
        assert!(r.t_min < 0.05);
    }

    #[test]
    fn min_time_asymptote() {
        let r = min_time(&p(0.0, 0.25), 0.99).unwrap();
        let ratio = r.asymptotic_estimate / r.t_min;
        assert!((0.5..=1.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn min_time_rejects_unreachable() {
        let q = p(1.0, 0.5);
        assert!(matches!(
            min_time(&q, 0.5),
            Err(Error::ThresholdUnreachable { .. })
        ));
        assert!(matches!(
            min_time(&q, 0.0),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn power_at_ep() {
        let r = power_optimal(&p(0.0, 0.25)).unwrap();
        let x = power_optimal_ep_closed::<f64>().unwrap();
        assert!((r.x_star - x).abs() < 1e-8, "{} vs {x}", r.x_star);
        assert!((r.x_star - 3.383_634_282_853_18).abs() < 1e-8);
        assert!((r.p_at_star - 0.657_092_569_586_513_7).abs() < 1e-8);
        assert!((r.power / 0.5 - 0.194_197_278_623_277_7).abs() < 1e-8);
        assert_eq!(r.candidates.len(), 1);
    }

    #[test]
    fn power_is_grid_maximum() {
        for q in [p(0.0, 0.25), p(1.0, 0.5), p(0.0, 2.0), p(0.5, 0.1)] {
            let r = power_optimal(&q).unwrap();
            let g = q.gamma();
            for k in 0..200 {
                let t = 0.01 / g * 10f64.powf(4.0 * k as f64 / 199.0);
                let pw = p_of_duration(&q, t).unwrap() / t;
                assert!(pw <= r.power * (1.0 + 1e-12), "{q:?} T={t}");
            }
        }
    }

    #[test]
    fn underdamped_power_reports_several_candidates() {
        let r = power_optimal(&p(0.0, 3.0)).unwrap();
        assert!(r.candidates.len() > 1);
        assert!(r.candidates.iter().all(|c| c.power <= r.power));
    }
}
