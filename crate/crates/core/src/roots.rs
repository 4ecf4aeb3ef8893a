//! Scalar root finding: bracketed bisection and closed-form cubics.

use std::f64::consts::PI;

use crate::error::{ReflectorError, Result};

/// Absolute residual tolerance used by the planners.
pub const ROOT_TOL: f64 = 1e-10;
/// Bisection iteration cap; 200 halvings exhaust f64 resolution.
pub const MAX_BISECTIONS: usize = 200;

/// Bisection on `[lo, hi]`. Requires `f(lo)` and `f(hi)` to differ in sign
/// (a zero at either end is returned directly).
///
/// Stops once `|f(mid)| <= tol` or the bracket cannot be halved further.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(ReflectorError::NoSignChange { lo, hi });
    }

    let mut best = (f64::INFINITY, lo);
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid.abs() < best.0 {
            best = (fmid.abs(), mid);
        }
        if fmid.abs() <= tol || mid <= lo || mid >= hi {
            break;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(best.1)
}

/// Bisection for a function with a single sign change somewhere on the
/// real line. The bracket `[lo, hi]` is widened geometrically around its
/// midpoint until the end values differ in sign.
pub fn bisect_expanding<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mid = 0.5 * (lo + hi);
    let mut half = (0.5 * (hi - lo).abs()).max(1.0);
    for _ in 0..60 {
        let (a, b) = (mid - half, mid + half);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 || fb == 0.0 || (fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum()) {
            return bisect(f, a, b, tol, MAX_BISECTIONS);
        }
        half *= 2.0;
    }
    Err(ReflectorError::NoSignChange { lo: mid - half, hi: mid + half })
}

/// Real roots of `a x³ + b x² + c x + d = 0` (`a ≠ 0`), ascending, each
/// polished by two Newton steps.
pub fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    if a == 0.0 {
        return quadratic_real_roots(b, c, d);
    }
    // Depressed cubic t³ + p t + q with x = t − b/(3a).
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b.powi(3) / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);

    let mut roots = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else if disc > 0.0 {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt()]
    } else if p < 0.0 {
        // Three real roots: trigonometric form.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = ((3.0 * q) / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3).map(|k| m * (theta - 2.0 * PI * k as f64 / 3.0).cos()).collect()
    } else {
        vec![(-q).cbrt()]
    };

    for t in roots.iter_mut() {
        *t -= shift;
        for _ in 0..2 {
            let fx = ((*t + b) * *t + c) * *t + d;
            let dfx = (3.0 * *t + 2.0 * b) * *t + c;
            if dfx != 0.0 {
                let next = *t - fx / dfx;
                if next.is_finite() {
                    *t = next;
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn quadratic_real_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a == 0.0 {
        return if b == 0.0 { vec![] } else { vec![-c / b] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    let q = -0.5 * (b + b.signum() * s);
    let mut r = if q == 0.0 { vec![0.0] } else { vec![q / a, c / q] };
    r.sort_by(f64::total_cmp);
    r
}
