//! Adaptive Dormand–Prince 5(4) integrator for small complex systems.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub type State<T, const N: usize> = [Complex<T>; N];

/// Step-size controller settings.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions<T = f64> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        Self {
            rtol: T::lit(1e-11),
            atol: T::lit(1e-13),
            max_steps: 2_000_000,
        }
    }
}

/// Integrator state carried across successive `advance` calls.
#[derive(Debug, Clone)]
pub struct DormandPrince<T: Real, const N: usize> {
    pub t: T,
    pub y: State<T, N>,
    h: T,
    opts: OdeOptions<T>,
    pub steps: usize,
}

fn axpy<T: Real, const N: usize>(
    y: &State<T, N>,
    terms: &[(f64, &State<T, N>)],
    h: T,
) -> State<T, N> {
    let mut out = *y;
    for (c, k) in terms {
        let ch = T::lit(*c) * h;
        for i in 0..N {
            out[i] = out[i] + k[i] * ch;
        }
    }
    out
}

impl<T: Real, const N: usize> DormandPrince<T, N> {
    pub fn new(t0: T, y0: State<T, N>, opts: OdeOptions<T>) -> Self {
        Self {
            t: t0,
            y: y0,
            h: T::zero(),
            opts,
            steps: 0,
        }
    }

    /// Integrates up to `t_end` exactly (the last step is clipped).
    pub fn advance<F>(&mut self, rhs: &mut F, t_end: T) -> Result<()>
    where
        F: FnMut(T, &State<T, N>) -> State<T, N>,
    {
        let span = t_end - self.t;
        if !(span > T::zero()) {
            return Ok(());
        }
        if self.h <= T::zero() {
            self.h = (span * T::lit(1e-3)).min(T::lit(1e-2) * T::one().max(span));
        }
        let safety = T::lit(0.9);
        let mut k1 = rhs(self.t, &self.y);
        while self.t < t_end {
            if self.steps >= self.opts.max_steps {
                return Err(Error::StepSizeUnderflow {
                    t: self.t.as_f64(),
                    h: self.h.as_f64(),
                });
            }
            let remaining = t_end - self.t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            let t = self.t;
            let y = &self.y;
            let k2 = rhs(t + T::lit(C2) * h, &axpy(y, &[(A21, &k1)], h));
            let k3 = rhs(t + T::lit(C3) * h, &axpy(y, &[(A31, &k1), (A32, &k2)], h));
            let k4 = rhs(
                t + T::lit(C4) * h,
                &axpy(y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h),
            );
            let k5 = rhs(
                t + T::lit(C5) * h,
                &axpy(y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
            );
            let k6 = rhs(
                t + h,
                &axpy(
                    y,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                    h,
                ),
            );
            let y_new = axpy(
                y,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
                h,
            );
            let k7 = rhs(t + h, &y_new);
            let err_vec = axpy(
                &[Complex::new(T::zero(), T::zero()); N],
                &[
                    (E1, &k1),
                    (E3, &k3),
                    (E4, &k4),
                    (E5, &k5),
                    (E6, &k6),
                    (E7, &k7),
                ],
                h,
            );
            let mut err = T::zero();
            for i in 0..N {
                let scale = self.opts.atol + self.opts.rtol * y[i].norm().max(y_new[i].norm());
                let r = err_vec[i].norm() / scale;
                err = err + r * r;
            }
            err = (err / T::lit(N as f64)).sqrt();
            self.steps += 1;
            if err <= T::one() {
                self.t = if last { t_end } else { t + h };
                self.y = y_new;
                k1 = k7;
                let factor = if err == T::zero() {
                    T::lit(5.0)
                } else {
                    (safety * err.powf(T::lit(-0.2))).min(T::lit(5.0))
                };
                if !last {
                    self.h = h * factor;
                }
            } else {
                let factor = (safety * err.powf(T::lit(-0.2))).max(T::lit(0.1));
                self.h = h * factor;
                let floor = T::lit(16.0) * T::epsilon() * T::one().max(t.abs());
                if self.h < floor {
                    return Err(Error::StepSizeUnderflow {
                        t: t.as_f64(),
                        h: self.h.as_f64(),
                    });
                }
            }
        }
        Ok(())
    }
}
