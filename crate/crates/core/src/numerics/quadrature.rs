//! Adaptive Gauss–Kronrod (7/15) quadrature for real and complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Upper limit on the number of panels held by one adaptive run.
pub const MAX_SUBDIVISIONS: usize = 4000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<V, T = f64> {
    pub value: V,
    pub abs_error_estimate: T,
    pub evaluations: usize,
}

struct Panel<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl<T: Real> Eq for Panel<T> {}

impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

/// One 15-point Kronrod panel; returns (value, error estimate, ∫|f|).
fn kronrod<T: Real, F>(f: &mut F, a: T, b: T) -> (Complex<T>, T, T)
where
    F: FnMut(T) -> Complex<T>,
{
    let center = (a + b) * T::half();
    let half = (b - a) * T::half();
    let fc = f(center);
    let mut res_k = fc * T::lit(WGK[7]);
    let mut res_g = fc * T::lit(WG[3]);
    let mut res_abs = fc.norm() * T::lit(WGK[7]);
    let mut fv1 = [Complex::new(T::zero(), T::zero()); 7];
    let mut fv2 = fv1;
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let w = T::lit(WGK[j]);
        res_k = res_k + (f1 + f2) * w;
        res_abs = res_abs + (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * T::lit(WG[j / 2]);
        }
        fv1[j] = f1;
        fv2[j] = f2;
    }
    let mean = res_k * T::half();
    let mut res_asc = (fc - mean).norm() * T::lit(WGK[7]);
    for j in 0..7 {
        res_asc = res_asc + ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * T::lit(WGK[j]);
    }
    let h = half.abs();
    let value = res_k * half;
    res_abs = res_abs * h;
    res_asc = res_asc * h;
    let mut err = ((res_k - res_g) * half).norm();
    if res_asc > T::zero() && err > T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * scale.min(T::one());
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    (value, err.max(floor), res_abs)
}

/// Adaptive integration of a complex-valued integrand over `[a, b]`.
///
/// The run stops once the summed error estimate is below
/// `max(tol, tol·|value|)`. Panels are never credited with less error than
/// their rounding floor, so requests below ~1e2·ε·∫|f| end in
/// [`Error::MaxSubdivisions`].
pub fn integrate_complex<T: Real, F>(
    mut f: F,
    a: T,
    b: T,
    tol: T,
) -> Result<QuadratureResult<Complex<T>, T>>
where
    F: FnMut(T) -> Complex<T>,
{
    integrate_complex_split(&mut f, &[a, b], tol)
}

/// As [`integrate_complex`], with the interval pre-split at `points`
/// (ascending, first and last are the limits).
pub fn integrate_complex_split<T: Real, F>(
    f: &mut F,
    points: &[T],
    tol: T,
) -> Result<QuadratureResult<Complex<T>, T>>
where
    F: FnMut(T) -> Complex<T>,
{
    let zero = Complex::new(T::zero(), T::zero());
    if points.len() < 2 {
        return Ok(QuadratureResult {
            value: zero,
            abs_error_estimate: T::zero(),
            evaluations: 1,
        });
    }
    let (lo, hi) = (points[0], points[points.len() - 1]);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut total = zero;
    let mut total_err = T::zero();
    for w in points.windows(2) {
        if !(w[1] > w[0]) {
            continue;
        }
        let (value, error, _) = kronrod(f, w[0], w[1]);
        evaluations += 15;
        total = total + value;
        total_err = total_err + error;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    if heap.is_empty() {
        return Ok(QuadratureResult {
            value: zero,
            abs_error_estimate: T::zero(),
            evaluations: evaluations.max(1),
        });
    }
    loop {
        let target = tol.max(tol * total.norm());
        if total_err <= target {
            break;
        }
        if heap.len() >= MAX_SUBDIVISIONS {
            return Err(Error::MaxSubdivisions {
                a: lo.as_f64(),
                b: hi.as_f64(),
                subdivisions: heap.len(),
                error_estimate: total_err.as_f64(),
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = (worst.a + worst.b) * T::half();
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::MaxSubdivisions {
                a: lo.as_f64(),
                b: hi.as_f64(),
                subdivisions: heap.len() + 1,
                error_estimate: total_err.as_f64(),
            });
        }
        let (v1, e1, _) = kronrod(f, worst.a, mid);
        let (v2, e2, _) = kronrod(f, mid, worst.b);
        evaluations += 30;
        total = total - worst.value + v1 + v2;
        total_err = total_err - worst.error + e1 + e2;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum to shed the drift accumulated by the running updates.
    let mut value = zero;
    let mut err = T::zero();
    for p in heap.iter() {
        value = value + p.value;
        err = err + p.error;
    }
    Ok(QuadratureResult {
        value,
        abs_error_estimate: err,
        evaluations,
    })
}

/// Adaptive integration of a real integrand over `[a, b]`.
pub fn integrate<T: Real, F>(mut f: F, a: T, b: T, tol: T) -> Result<QuadratureResult<T, T>>
where
    F: FnMut(T) -> T,
{
    integrate_split(&mut f, &[a, b], tol)
}

/// Real integrand with the interval pre-split at `points`.
pub fn integrate_split<T: Real, F>(
    f: &mut F,
    points: &[T],
    tol: T,
) -> Result<QuadratureResult<T, T>>
where
    F: FnMut(T) -> T,
{
    let mut g = |x: T| Complex::new(f(x), T::zero());
    let r = integrate_complex_split(&mut g, points, tol)?;
    Ok(QuadratureResult {
        value: r.value.re,
        abs_error_estimate: r.abs_error_estimate,
        evaluations: r.evaluations,
    })
}

/// Sorted, de-duplicated split points: `a`, the `breaks` strictly inside
/// `(a, b)`, and `b`.
pub fn split_points<T: Real>(a: T, b: T, breaks: &[T]) -> Vec<T> {
    let mut pts = vec![a];
    let mut inner: Vec<T> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    inner.dedup();
    pts.extend(inner);
    pts.push(b);
    pts
}
