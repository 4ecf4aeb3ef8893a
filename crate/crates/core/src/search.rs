//! One-dimensional grid searches with an order-stable argmax.

use crate::error::{ReflectorError, Result};

/// Candidates `lo, lo + step, …` up to `hi`, with `hi` itself always included.
pub fn grid_points(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(ReflectorError::EmptySearchRegion { lo, hi });
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(ReflectorError::InvalidParameter {
            name: "search_step",
            reason: format!("must be positive, got {step}"),
        });
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut xs: Vec<f64> = (0..=n).map(|k| lo + k as f64 * step).collect();
    if hi - xs[n] > 1e-9 * step {
        xs.push(hi);
    }
    Ok(xs)
}

/// Candidates `anchor + k·step` with `|k·step| <= half_width`. Grids for
/// growing `half_width` are nested, so constrained optima are monotone.
pub fn centered_grid(anchor: f64, half_width: f64, step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(ReflectorError::InvalidParameter {
            name: "search_step",
            reason: format!("must be positive, got {step}"),
        });
    }
    if !(half_width.is_finite() && half_width >= 0.0) {
        return Err(ReflectorError::InvalidParameter {
            name: "region_size",
            reason: format!("must be non-negative, got {}", 2.0 * half_width),
        });
    }
    let k = (half_width / step + 1e-9).floor() as i64;
    Ok((-k..=k).map(|i| anchor + i as f64 * step).collect())
}

/// Evaluates `f` at every candidate and returns `(x, f(x))` of the largest
/// value; ties go to the earliest candidate and NaN never wins.
pub fn argmax<F>(xs: &[f64], f: F) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64 + Sync,
{
    let values = evaluate(xs, &f);
    let mut best: Option<(f64, f64)> = None;
    for (&x, v) in xs.iter().zip(values) {
        if v.is_nan() {
            continue;
        }
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((x, v));
        }
    }
    best
}

#[cfg(feature = "parallel")]
fn evaluate<F: Fn(f64) -> f64 + Sync>(xs: &[f64], f: &F) -> Vec<f64> {
    use rayon::prelude::*;
    xs.par_iter().map(|&x| f(x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate<F: Fn(f64) -> f64 + Sync>(xs: &[f64], f: &F) -> Vec<f64> {
    xs.iter().map(|&x| f(x)).collect()
}
