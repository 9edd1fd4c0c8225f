use num_complex::Complex;

use crate::params::SystemParams;
use crate::pulse::PulseSpec;
use crate::scalar::{abs2, Real};

/// Number of points in the default time grid.
pub const DEFAULT_GRID_POINTS: usize = 400;

/// Engine that produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Convolution,
    OdeOracle,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Convolution => "convolution",
            Method::OdeOracle => "ode",
        }
    }
}

/// Charger (`alpha0`) and battery (`alpha1`) amplitudes on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace<T: Real = f64> {
    pub times: Vec<T>,
    pub alpha0: Vec<Complex<T>>,
    pub alpha1: Vec<Complex<T>>,
    pub energy: Vec<T>,
    pub ergotropy: Vec<T>,
    pub method: Method,
}

impl<T: Real> AmplitudeTrace<T> {
    /// Builds a trace with energy and ergotropy filled in.
    pub fn new(
        params: &SystemParams<T>,
        times: Vec<T>,
        alpha0: Vec<Complex<T>>,
        alpha1: Vec<Complex<T>>,
        method: Method,
    ) -> Self {
        let trace = Self {
            times,
            alpha0,
            alpha1,
            energy: Vec::new(),
            ergotropy: Vec::new(),
            method,
        };
        energy_and_ergotropy(trace, params)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// |α₁|² at each grid point.
    pub fn battery_population(&self) -> Vec<T> {
        self.alpha1.iter().map(|a| abs2(*a)).collect()
    }

    /// |α₀|² at each grid point.
    pub fn charger_population(&self) -> Vec<T> {
        self.alpha0.iter().map(|a| abs2(*a)).collect()
    }

    /// Grid point and value of the largest |α₁|².
    pub fn peak_battery(&self) -> Option<(T, T)> {
        self.times
            .iter()
            .zip(self.alpha1.iter())
            .map(|(t, a)| (*t, abs2(*a)))
            .fold(None, |best, cur| match best {
                Some((_, p)) if p >= cur.1 => best,
                _ => Some(cur),
            })
    }
}

/// Work extractable by unitaries from a battery with excited population `p1`.
pub fn ergotropy<T: Real>(p1: T, omega_b: T) -> T {
    if p1 <= T::half() {
        T::zero()
    } else {
        omega_b * (T::two() * p1 - T::one())
    }
}

/// Fills `energy = ω_b|α₁|²` and the ergotropy of every grid point.
pub fn energy_and_ergotropy<T: Real>(
    mut trace: AmplitudeTrace<T>,
    params: &SystemParams<T>,
) -> AmplitudeTrace<T> {
    let w = params.omega_b();
    let pops = trace.battery_population();
    trace.energy = pops.iter().map(|p| w * *p).collect();
    trace.ergotropy = pops.iter().map(|p| ergotropy(*p, w)).collect();
    trace
}

/// Uniform grid from one decay time before the pulse window to 30 decay times after it.
pub fn default_grid<T: Real>(
    params: &SystemParams<T>,
    spec: &PulseSpec<T>,
    points: usize,
) -> Vec<T> {
    let gamma = params.gamma();
    let (start, end) = spec.nominal_window();
    let lo = start - T::one() / gamma;
    let hi = end.max(start) + T::lit(30.0) / gamma;
    uniform_grid(lo, hi, points)
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn uniform_grid<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => {
            let step = (hi - lo) / T::lit((n - 1) as f64);
            (0..n)
                .map(|i| {
                    if i + 1 == n {
                        hi
                    } else {
                        lo + step * T::lit(i as f64)
                    }
                })
                .collect()
        }
    }
}
