//! Bracketed root finding (Brent's inverse-quadratic / secant / bisection hybrid).

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITERATIONS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult<T = f64> {
    pub root: T,
    pub residual: T,
    pub bracket: (T, T),
    pub iterations: usize,
}

/// Finds a root of `g` inside `[lo, hi]`.
///
/// Requires `g(lo)` and `g(hi)` of opposite sign (or one of them zero). On
/// success `|g(root)| ≤ tol` and the final bracket is no wider than
/// `tol·max(1, |root|)`.
pub fn find_root<T: Real, F>(mut g: F, lo: T, hi: T, tol: T) -> Result<RootResult<T>>
where
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa == T::zero() {
        return Ok(RootResult {
            root: a,
            residual: fa,
            bracket: (a, a),
            iterations: 0,
        });
    }
    if fb == T::zero() {
        return Ok(RootResult {
            root: b,
            residual: fb,
            bracket: (b, b),
            iterations: 0,
        });
    }
    if !(fa.signum() * fb.signum() < T::zero()) {
        return Err(Error::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            g_lo: fa.as_f64(),
            g_hi: fb.as_f64(),
        });
    }

    let two = T::two();
    let eps = T::epsilon();
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=MAX_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let width = (c - b).abs();
        let bracket = if b < c { (b, c) } else { (c, b) };
        if fb.abs() <= tol && width <= tol * T::one().max(b.abs()) || fb == T::zero() {
            return Ok(RootResult {
                root: b,
                residual: fb,
                bracket,
                iterations: iter,
            });
        }
        // Step floor keeps progress once the bracket approaches machine resolution.
        let step_tol = two * eps * b.abs() + T::half() * tol * T::one().max(b.abs()) * T::lit(0.1);
        let m = T::half() * (c - b);
        if m.abs() <= two * eps * T::one().max(b.abs()) {
            // The bracket cannot shrink further; the residual target is unreachable.
            return Err(Error::RootToleranceUnreachable {
                root: b.as_f64(),
                residual: fb.as_f64(),
                tol: tol.as_f64(),
            });
        }
        if e.abs() >= step_tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (T::lit(3.0) * m * q - (step_tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        if d.abs() > step_tol {
            b = b + d;
        } else {
            b = b + step_tol.min(m.abs()) * m.signum();
        }
        fb = g(b);
    }
    Err(Error::RootToleranceUnreachable {
        root: b.as_f64(),
        residual: fb.as_f64(),
        tol: tol.as_f64(),
    })
}

/// Golden-section maximization of a unimodal `h` on `[lo, hi]`; returns `(x, h(x))`.
pub fn golden_section_max<T: Real, F>(mut h: F, lo: T, hi: T, xtol: T) -> (T, T)
where
    F: FnMut(T) -> T,
{
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut h1, mut h2) = (h(x1), h(x2));
    for _ in 0..200 {
        if (b - a).abs() <= xtol * T::one().max(x1.abs()) {
            break;
        }
        if h1 < h2 {
            a = x1;
            x1 = x2;
            h1 = h2;
            x2 = a + inv_phi * (b - a);
            h2 = h(x2);
        } else {
            b = x2;
            x2 = x1;
            h2 = h1;
            x1 = b - inv_phi * (b - a);
            h1 = h(x1);
        }
    }
    if h1 >= h2 {
        (x1, h1)
    } else {
        (x2, h2)
    }
}
