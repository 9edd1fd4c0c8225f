//! Physical rates of the charger–battery pair and the damping regime they imply.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative width of the band `|κ| ≤ EP_TOL·γ²` treated as the exceptional point.
pub const EP_TOL: f64 = 1e-8;

/// Rates of the two-level charger and harmonic-oscillator battery (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T = f64> {
    gamma_pulse: T,
    gamma_env: T,
    coupling: T,
    omega_b: T,
}

fn check<T: Real>(field: &'static str, value: T, ok: bool, what: &str) -> Option<Error> {
    if !value.is_finite() || !ok {
        Some(Error::InvalidParameter {
            field,
            reason: format!("{} must be finite and {what}", value.as_f64()),
        })
    } else {
        None
    }
}

impl<T: Real> SystemParams<T> {
    /// Builds a parameter set, rejecting the first violated invariant.
    ///
    /// `gamma_pulse` is the decay rate Γ into the pulse mode, `gamma_env` the
    /// rate Γ⊥ into the environment, `coupling` the exchange rate f between
    /// charger and battery and `omega_b` the battery frequency.
    pub fn new(gamma_pulse: T, gamma_env: T, coupling: T, omega_b: T) -> Result<Self> {
        let zero = T::zero();
        let errors = [
            check("gamma_pulse", gamma_pulse, gamma_pulse > zero, "> 0"),
            check("gamma_env", gamma_env, gamma_env >= zero, ">= 0"),
            check("coupling", coupling, coupling > zero, "> 0"),
            check("omega_b", omega_b, omega_b > zero, "> 0"),
        ];
        match errors.into_iter().flatten().next() {
            Some(e) => Err(e),
            None => Ok(Self {
                gamma_pulse,
                gamma_env,
                coupling,
                omega_b,
            }),
        }
    }

    /// Parameters in units of Γ: Γ = 1, Γ⊥ = `env_ratio`, f = `coupling_ratio`.
    pub fn in_units_of_gamma(env_ratio: T, coupling_ratio: T, omega_b: T) -> Result<Self> {
        Self::new(T::one(), env_ratio, coupling_ratio, omega_b)
    }

    pub fn gamma_pulse(&self) -> T {
        self.gamma_pulse
    }

    pub fn gamma_env(&self) -> T {
        self.gamma_env
    }

    pub fn coupling(&self) -> T {
        self.coupling
    }

    pub fn omega_b(&self) -> T {
        self.omega_b
    }

    /// Returns a copy with a different coupling.
    pub fn with_coupling(&self, coupling: T) -> Result<Self> {
        Self::new(self.gamma_pulse, self.gamma_env, coupling, self.omega_b)
    }

    /// γ = (Γ + Γ⊥)/2, the damping rate of the charger amplitude.
    pub fn gamma(&self) -> T {
        (self.gamma_pulse + self.gamma_env) * T::half()
    }

    /// κ = γ² − 4f².
    pub fn kappa(&self) -> T {
        let g = self.gamma();
        g * g - T::lit(4.0) * self.coupling * self.coupling
    }

    /// Coupling at the exceptional point, γ/2.
    pub fn f_ep(&self) -> T {
        self.gamma() * T::half()
    }

    /// Γ/(Γ + Γ⊥), the largest battery population any unit-norm pulse reaches.
    pub fn charging_bound(&self) -> T {
        self.gamma_pulse / (self.gamma_pulse + self.gamma_env)
    }

    pub fn regime(&self) -> Regime {
        classify_regime(self).regime
    }
}

/// Damping regime selected by the sign of κ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Underdamped,
    ExceptionalPoint,
    Overdamped,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Underdamped => "underdamped",
            Regime::ExceptionalPoint => "exceptional-point",
            Regime::Overdamped => "overdamped",
        }
    }
}

/// Quantities derived from [`SystemParams`] that fix the shape of the response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeData<T = f64> {
    pub gamma: T,
    pub kappa: T,
    pub regime: Regime,
    /// Ω = sqrt(f² − γ²/4), present only for κ < 0 outside the EP band.
    pub omega_rabi: Option<T>,
    /// Real roots r± = (−γ ± √κ)/2, present only for κ > 0 outside the EP band.
    pub roots: Option<(T, T)>,
    pub f_ep: T,
}

pub fn classify_regime<T: Real>(params: &SystemParams<T>) -> RegimeData<T> {
    let gamma = params.gamma();
    let kappa = params.kappa();
    let f_ep = params.f_ep();
    let band = T::lit(EP_TOL) * gamma * gamma;
    if kappa.abs() <= band {
        RegimeData {
            gamma,
            kappa,
            regime: Regime::ExceptionalPoint,
            omega_rabi: None,
            roots: None,
            f_ep,
        }
    } else if kappa < T::zero() {
        let f = params.coupling();
        // f² − γ²/4 = −κ/4; the product form keeps precision near the band.
        let omega = ((f - f_ep) * (f + f_ep)).sqrt();
        RegimeData {
            gamma,
            kappa,
            regime: Regime::Underdamped,
            omega_rabi: Some(omega),
            roots: None,
            f_ep,
        }
    } else {
        let s = kappa.sqrt();
        RegimeData {
            gamma,
            kappa,
            regime: Regime::Overdamped,
            omega_rabi: None,
            roots: Some(((-gamma + s) * T::half(), (-gamma - s) * T::half())),
            f_ep,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(g: f64, ge: f64, f: f64) -> SystemParams {
        SystemParams::new(g, ge, f, 1.0).unwrap()
    }

    #[test]
    fn ep_without_environment() {
        let r = classify_regime(&p(1.0, 0.0, 0.25));
        assert_eq!(r.gamma, 0.5);
        assert_eq!(r.kappa, 0.0);
        assert_eq!(r.regime, Regime::ExceptionalPoint);
        assert_eq!(r.f_ep, 0.25);
    }

    #[test]
    fn underdamped_rabi_frequency() {
        let r = classify_regime(&p(1.0, 0.0, 1.0));
        assert_eq!(r.kappa, -3.75);
        assert_eq!(r.regime, Regime::Underdamped);
        let omega = r.omega_rabi.unwrap();
        assert!((omega - (1.0f64 - 1.0 / 16.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ep_with_equal_environment() {
        let r = classify_regime(&p(1.0, 1.0, 0.5));
        assert_eq!(r.gamma, 1.0);
        assert_eq!(r.kappa, 0.0);
        assert_eq!(r.f_ep, 0.5);
        assert_eq!(r.regime, Regime::ExceptionalPoint);
    }

    #[test]
    fn overdamped_roots() {
        let r = classify_regime(&p(1.0, 0.0, 0.1));
        let (rp, rm) = r.roots.unwrap();
        assert_eq!(r.regime, Regime::Overdamped);
        // r± solve r² + γ r + f² = 0
        for root in [rp, rm] {
            assert!((root * root + 0.5 * root + 0.01).abs() < 1e-15);
        }
        assert!(rp > rm);
    }

    #[test]
    fn ep_band_is_continuous_in_coupling() {
        for &(ge, g) in &[(0.0, 1.0), (0.5, 1.0), (1.0, 1.0), (0.3, 7.0)] {
            let base = p(g, ge, 1.0);
            let f_ep = base.f_ep();
            let lo = classify_regime(&base.with_coupling(f_ep * (1.0 - 1e-9)).unwrap());
            let hi = classify_regime(&base.with_coupling(f_ep * (1.0 + 1e-9)).unwrap());
            assert!(lo.kappa > 0.0 && hi.kappa < 0.0);
            assert_eq!(lo.regime, Regime::ExceptionalPoint);
            assert_eq!(hi.regime, Regime::ExceptionalPoint);
        }
    }

    #[test]
    fn rejects_invalid_rates() {
        let e = SystemParams::new(1.0, 0.0, -1.0, 1.0).unwrap_err();
        assert!(matches!(
            e,
            Error::InvalidParameter {
                field: "coupling",
                ..
            }
        ));
        assert!(SystemParams::new(0.0, 0.0, 1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, -0.1, 1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 0.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn bound_and_f32() {
        let q = SystemParams::<f32>::new(1.0, 0.5, 0.5, 1.0).unwrap();
        assert!((q.charging_bound() - 2.0 / 3.0).abs() < 1e-7);
        assert_eq!(q.regime(), Regime::Underdamped);
    }
}
