//! Placement of movable reflectors (no rotation, `ω = 0`).
//!
//! Covers the closed-form single-target placements, packing several plates
//! into one main lobe, the single-reflector area search and the sequential
//! area planner that chains main lobes from the upper-right corner of the
//! area towards the lower-left corner.

use crate::error::{ReflectorError, Result};
use crate::geometry::{PathGeometry, PlanarPoint, ReflectorDims, ReflectorPose, TargetArea, Vec2};
use crate::link_budget::{array_factor, reflection_gain};
use crate::roots::{bisect, bisect_expanding, cubic_real_roots, MAX_BISECTIONS, ROOT_TOL};
use crate::search::{argmax, grid_points};
use crate::PlannerOptions;

/// Reflector positions whose main-lobe edges point at the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainLobeInterval {
    /// Position where the receiver sits on the right lobe edge, `Δ = +1/(2L̄1)`.
    pub x_br: f64,
    /// Position where the receiver sits on the left lobe edge, `Δ = −1/(2L̄1)`.
    pub x_bl: f64,
}

/// Receiver locations on the left and right main-lobe edges of one reflector.
/// For single-target plans both are the target itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lobe {
    pub left: PlanarPoint,
    pub right: PlanarPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementSolution {
    pub poses: Vec<ReflectorPose>,
    /// Smallest reflection gain `Σ_m sinc²(π L̄1 Δ_m)` over the evaluated
    /// receiver locations (the target, or the area grid).
    pub worst_case_gain: f64,
    pub lobes: Vec<Lobe>,
}

/// `Δ` at rotation `omega`, NaN when the geometry is degenerate.
pub(crate) fn delta_or_nan(tx: PlanarPoint, x: f64, omega: f64, r: PlanarPoint) -> f64 {
    PathGeometry::new(tx, x, r).map_or(f64::NAN, |g| g.delta(omega))
}

/// Specular reflection point: the position where `sin θ_t = sin θ_r`.
pub fn specular_placement(tx: PlanarPoint, r: PlanarPoint) -> Result<f64> {
    let denom = tx.y + r.y;
    if denom == 0.0 || tx.y * r.y <= 0.0 {
        return Err(ReflectorError::DegenerateGeometry(format!(
            "transmitter y = {} and receiver y = {} must be on the same side of the axis",
            tx.y, r.y
        )));
    }
    Ok(tx.x + tx.y / denom * (r.x - tx.x))
}

/// Concatenated path-loss objective `d_t² d_r⁴` for electrically small plates.
pub fn small_reflector_objective(tx: PlanarPoint, r: PlanarPoint, x: f64) -> f64 {
    let dt2 = (x - tx.x).powi(2) + tx.y * tx.y;
    let dr2 = (r.x - x).powi(2) + r.y * r.y;
    dt2 * dr2 * dr2
}

/// Coefficients `[a, b, c, d]` of the stationarity cubic of `d_t² d_r⁴`.
pub fn small_reflector_cubic(tx: PlanarPoint, r: PlanarPoint) -> [f64; 4] {
    let (xt, yt, xr, yr) = (tx.x, tx.y, r.x, r.y);
    let rr = xr * xr + yr * yr;
    let tt = xt * xt + yt * yt;
    [3.0, -(5.0 * xt + 4.0 * xr), rr + 2.0 * tt + 6.0 * xr * xt, -(rr * xt + 2.0 * tt * xr)]
}

/// Placement for an electrically small plate: the real root of the
/// stationarity cubic with the smallest `d_t² d_r⁴` (ties to smaller x).
pub fn small_reflector_placement(tx: PlanarPoint, r: PlanarPoint) -> f64 {
    let [a, b, c, d] = small_reflector_cubic(tx, r);
    let roots = cubic_real_roots(a, b, c, d);
    let mut best = (f64::INFINITY, f64::NAN);
    for x in roots {
        let v = small_reflector_objective(tx, r, x);
        if v < best.0 {
            best = (v, x);
        }
    }
    best.1
}

/// Positions where the receiver lies on the main-lobe edges. `Δ(x)` is
/// strictly decreasing in `x`, so each edge has exactly one root.
pub fn main_lobe_interval(tx: PlanarPoint, r: PlanarPoint, dims: &ReflectorDims) -> Result<MainLobeInterval> {
    let h = dims.main_lobe_half_width();
    let (lo, hi) = (tx.x.min(r.x), tx.x.max(r.x));
    let x_br = bisect_expanding(|x| delta_or_nan(tx, x, 0.0, r) - h, lo, hi, ROOT_TOL)?;
    let x_bl = bisect_expanding(|x| delta_or_nan(tx, x, 0.0, r) + h, lo, hi, ROOT_TOL)?;
    Ok(MainLobeInterval { x_br, x_bl })
}

/// Several unrotated plates spaced by `L1` around the specular point, all
/// inside the main-lobe interval. At most `m_max` plates are kept, nearest
/// to the specular point first.
pub fn multi_mr_single_target(
    tx: PlanarPoint,
    r: PlanarPoint,
    dims: &ReflectorDims,
    m_max: usize,
) -> Result<PlacementSolution> {
    if m_max == 0 {
        return Err(ReflectorError::InvalidParameter { name: "max_reflectors", reason: "must be at least 1".into() });
    }
    let lobe = main_lobe_interval(tx, r, dims)?;
    let x_star = specular_placement(tx, r)?;
    let l1 = dims.l1;
    let n_left = ((x_star - lobe.x_br) / l1).floor().max(0.0) as i64;
    let n_right = ((lobe.x_bl - x_star) / l1).floor().max(0.0) as i64;

    let mut offsets: Vec<i64> = (-n_left..=n_right).collect();
    offsets.sort_by_key(|k| (k.abs(), *k));
    offsets.truncate(m_max);
    offsets.sort_unstable();

    let poses: Vec<ReflectorPose> = offsets.iter().map(|&k| ReflectorPose::unrotated(x_star + k as f64 * l1)).collect();
    let worst_case_gain = reflection_gain(tx, &poses, r, dims.l1_bar());
    let lobes = vec![Lobe { left: r, right: r }; poses.len()];
    Ok(PlacementSolution { poses, worst_case_gain, lobes })
}

/// Extremes of `Δ(x, ω; r)` over the sampled area and where they occur.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaExtrema {
    pub min: f64,
    pub max: f64,
    pub argmin: PlanarPoint,
    pub argmax: PlanarPoint,
}

/// Extremes of `Δ` over the area grid.
///
/// `Δ` depends on `r` only through the direction of `r` seen from the plate,
/// and every interior direction also reaches the boundary, so only boundary
/// samples (corners included) are visited.
pub fn delta_extrema_area(
    x: f64,
    omega: f64,
    tx: PlanarPoint,
    area: &TargetArea,
    grid_step: f64,
) -> Result<DeltaExtrema> {
    let (a_t, _) = crate::geometry::incident_vector(tx, x)?;
    let u = crate::geometry::rotation_basis(omega).0;
    let base = a_t.dot(u);
    let mut ext = DeltaExtrema { min: f64::INFINITY, max: f64::NEG_INFINITY, argmin: area.center, argmax: area.center };
    for r in area.grid(grid_step)?.boundary_points() {
        let (a_r, _) = crate::geometry::reflection_vector(x, r)?;
        let d = a_r.dot(u) - base;
        if d < ext.min {
            ext.min = d;
            ext.argmin = r;
        }
        if d > ext.max {
            ext.max = d;
            ext.argmax = r;
        }
    }
    Ok(ext)
}

/// Smallest `sinc²(π L̄1 Δ)` over `Δ ∈ [d_min, d_max]`: zero when a null
/// `±z/L̄1` (z ≥ 1) falls inside the range, otherwise attained at an end.
pub fn worst_case_array_factor_in_range(l1_bar: f64, d_min: f64, d_max: f64) -> f64 {
    let (lo, hi) = (d_min * l1_bar, d_max * l1_bar);
    // Positive nulls z in [lo, hi], negative nulls z in [-hi, -lo].
    let has_null = |a: f64, b: f64| b >= 1.0 && a.max(1.0).ceil() <= b;
    if has_null(lo, hi) || has_null(-hi, -lo) {
        return 0.0;
    }
    array_factor(l1_bar, d_min).min(array_factor(l1_bar, d_max))
}

/// Worst-case array factor over the area for an unrotated plate at `x`.
pub fn worst_case_array_factor(
    x: f64,
    tx: PlanarPoint,
    area: &TargetArea,
    dims: &ReflectorDims,
    grid_step: f64,
) -> Result<f64> {
    let ext = delta_extrema_area(x, 0.0, tx, area, grid_step)?;
    Ok(worst_case_array_factor_in_range(dims.l1_bar(), ext.min, ext.max))
}

/// Placement range whose specular directions sweep from the lower-left to
/// the upper-right corner of the area.
pub fn area_search_bounds(tx: PlanarPoint, area: &TargetArea) -> Result<(f64, f64)> {
    Ok((specular_placement(tx, area.lower_left())?, specular_placement(tx, area.upper_right())?))
}

/// Single unrotated plate maximizing the worst-case array factor over the
/// area, by grid search over [`area_search_bounds`].
pub fn single_mr_area_placement(
    tx: PlanarPoint,
    area: &TargetArea,
    dims: &ReflectorDims,
    opts: &PlannerOptions,
) -> Result<PlacementSolution> {
    let (lo, hi) = area_search_bounds(tx, area)?;
    if lo > hi {
        return Err(ReflectorError::EmptySearchRegion { lo, hi });
    }
    let xs = grid_points(lo, hi, opts.search_step)?;
    let (x, metric) = argmax(&xs, |x| worst_case_array_factor(x, tx, area, dims, opts.grid_step).unwrap_or(f64::NAN))
        .ok_or(ReflectorError::EmptySearchRegion { lo, hi })?;
    let ext = delta_extrema_area(x, 0.0, tx, area, opts.grid_step)?;
    Ok(PlacementSolution {
        poses: vec![ReflectorPose::unrotated(x)],
        worst_case_gain: metric,
        lobes: vec![Lobe { left: ext.argmin, right: ext.argmax }],
    })
}

/// Which area edge holds the left main-lobe endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeftEdge {
    /// The upper-left corner is outside the lobe: endpoint on the top edge.
    Top,
    /// The upper-left corner is inside the lobe: endpoint on the left edge.
    Left,
}

/// Location on the area boundary where `Δ(pose; r) = −1/(2L̄1)`.
pub fn left_lobe_endpoint(
    tx: PlanarPoint,
    pose: ReflectorPose,
    area: &TargetArea,
    half_width: f64,
) -> Result<(PlanarPoint, LeftEdge)> {
    let delta = |r: PlanarPoint| delta_or_nan(tx, pose.x, pose.omega, r);
    let unhandled = |what: &str| {
        ReflectorError::UnhandledGeometry(format!(
            "left lobe edge of the reflector at x = {:.4}, ω = {:.6}: {what}",
            pose.x, pose.omega
        ))
    };
    if delta(area.upper_left()) < -half_width {
        let y = area.y_max();
        let xr = bisect(|s| delta(Vec2::new(s, y)) + half_width, area.x_min(), area.x_max(), ROOT_TOL, MAX_BISECTIONS)
            .map_err(|_| unhandled("no crossing on the top edge"))?;
        Ok((Vec2::new(xr, y), LeftEdge::Top))
    } else if delta(area.lower_left()) < -half_width {
        let x = area.x_min();
        let yr = bisect(|s| delta(Vec2::new(x, s)) + half_width, area.y_min(), area.y_max(), ROOT_TOL, MAX_BISECTIONS)
            .map_err(|_| unhandled("no crossing on the left edge"))?;
        Ok((Vec2::new(x, yr), LeftEdge::Left))
    } else {
        Err(unhandled("lower-left corner is beyond the right lobe edge"))
    }
}

/// The lower-left corner is inside the reflector's main lobe.
pub(crate) fn covers_lower_left(tx: PlanarPoint, pose: ReflectorPose, area: &TargetArea, half_width: f64) -> bool {
    delta_or_nan(tx, pose.x, pose.omega, area.lower_left()).abs() <= half_width
}

pub(crate) fn validate_sequential_inputs(tx: PlanarPoint, area: &TargetArea) -> Result<()> {
    if !area.is_below_axis() {
        return Err(ReflectorError::InvalidParameter {
            name: "area",
            reason: "the area must lie strictly below the x-axis".into(),
        });
    }
    if !(tx.y < 0.0) {
        return Err(ReflectorError::InvalidParameter {
            name: "tx",
            reason: "the transmitter must lie strictly below the x-axis".into(),
        });
    }
    Ok(())
}

pub(crate) fn iteration_cap(area: &TargetArea, dims: &ReflectorDims) -> usize {
    10 * ((area.dx / dims.l1).ceil() as usize).max(1)
}

/// Minimum reflection gain over the area grid.
pub(crate) fn min_gain_over_area(
    tx: PlanarPoint,
    poses: &[ReflectorPose],
    area: &TargetArea,
    dims: &ReflectorDims,
    step: f64,
) -> Result<f64> {
    let l1_bar = dims.l1_bar();
    Ok(area.grid(step)?.points().map(|r| reflection_gain(tx, poses, r, l1_bar)).fold(f64::INFINITY, f64::min))
}

/// Sequential multi-plate area planner.
///
/// The first plate puts the upper-right corner on its right lobe edge; each
/// following plate puts the previous plate's left lobe edge on its own right
/// edge, until the lower-left corner falls inside a main lobe.
pub fn sequential_mr_area_placement(
    tx: PlanarPoint,
    area: &TargetArea,
    dims: &ReflectorDims,
    opts: &PlannerOptions,
) -> Result<PlacementSolution> {
    validate_sequential_inputs(tx, area)?;
    let h = dims.main_lobe_half_width();
    let cap = iteration_cap(area, dims);
    let (lo, hi) = area_search_bounds(tx, area)?;

    let mut poses: Vec<ReflectorPose> = Vec::new();
    let mut lobes = Vec::new();
    let mut right_anchor = area.upper_right();
    loop {
        if poses.len() >= cap {
            return Err(ReflectorError::NonConvergence { iterations: poses.len() });
        }
        let anchor = right_anchor;
        let x = bisect_expanding(|x| delta_or_nan(tx, x, 0.0, anchor) - h, lo, hi, ROOT_TOL)?;
        if let Some(prev) = poses.last() {
            let spacing = (x - prev.x).abs();
            if spacing < dims.l1 {
                return Err(ReflectorError::SpacingInfeasible {
                    index: poses.len() - 1,
                    next: poses.len(),
                    spacing,
                    required: dims.l1,
                });
            }
        }
        let pose = ReflectorPose::unrotated(x);
        poses.push(pose);
        if covers_lower_left(tx, pose, area, h) {
            lobes.push(Lobe { left: area.lower_left(), right: anchor });
            break;
        }
        let (left, _) = left_lobe_endpoint(tx, pose, area, h)?;
        lobes.push(Lobe { left, right: anchor });
        right_anchor = left;
    }
    let worst_case_gain = min_gain_over_area(tx, &poses, area, dims, opts.coverage_step)?;
    Ok(PlacementSolution { poses, worst_case_gain, lobes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TX: PlanarPoint = Vec2::new(0.0, -50.0);
    const RX: PlanarPoint = Vec2::new(100.0, -150.0);

    fn dims(l1_bar: f64) -> ReflectorDims {
        ReflectorDims::from_wavelengths(l1_bar, 5.0, 299_792_458.0 / 2.4e9).unwrap()
    }

    fn reference_area() -> TargetArea {
        TargetArea::new(Vec2::new(100.0, -150.0), 100.0, 50.0).unwrap()
    }

    #[test]
    fn specular_examples() {
        assert_abs_diff_eq!(specular_placement(TX, RX).unwrap(), 25.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            specular_placement(Vec2::new(0.0, -7.0), Vec2::new(40.0, -7.0)).unwrap(),
            20.0,
            epsilon = 1e-12
        );
        assert_eq!(specular_placement(Vec2::new(3.0, -1.0), Vec2::new(3.0, -9.0)).unwrap(), 3.0);
        assert!(specular_placement(Vec2::new(0.0, -1.0), Vec2::new(3.0, 1.0)).is_err());
    }

    #[test]
    fn cubic_root_residual() {
        let [a, b, c, d] = small_reflector_cubic(TX, RX);
        let x = small_reflector_placement(TX, RX);
        let scale = [a, b, c, d].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let p = ((a * x + b) * x + c) * x + d;
        assert!(p.abs() < 1e-6 * scale, "residual {p}");
    }

    #[test]
    fn main_lobe_brackets_specular_point() {
        let d = dims(10.0);
        let lobe = main_lobe_interval(TX, RX, &d).unwrap();
        let h = d.main_lobe_half_width();
        assert!(lobe.x_br < 25.0 && 25.0 < lobe.x_bl);
        assert_abs_diff_eq!(delta_or_nan(TX, lobe.x_br, 0.0, RX) - h, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(delta_or_nan(TX, lobe.x_bl, 0.0, RX) + h, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn multi_mr_spacing_and_cap() {
        let d = dims(10.0);
        let sol = multi_mr_single_target(TX, RX, &d, 100).unwrap();
        let lobe = main_lobe_interval(TX, RX, &d).unwrap();
        assert!(sol.poses.len() > 1);
        for w in sol.poses.windows(2) {
            assert_abs_diff_eq!(w[1].x - w[0].x, d.l1, epsilon = 1e-9);
        }
        assert!(sol.poses.iter().all(|p| p.x >= lobe.x_br && p.x <= lobe.x_bl));
        let one = multi_mr_single_target(TX, RX, &d, 1).unwrap();
        assert_eq!(one.poses, vec![ReflectorPose::unrotated(25.0)]);
        assert!(multi_mr_single_target(TX, RX, &d, 0).is_err());
    }

    #[test]
    fn worst_case_gain_cases() {
        // Range containing the first null.
        assert_eq!(worst_case_array_factor_in_range(10.0, 0.05, 0.12), 0.0);
        assert_eq!(worst_case_array_factor_in_range(10.0, -0.25, -0.15), 0.0);
        // Symmetric range.
        assert_abs_diff_eq!(
            worst_case_array_factor_in_range(10.0, -0.03, 0.03),
            array_factor(10.0, 0.03),
            epsilon = 1e-15
        );
        // Inside a side lobe.
        let v = worst_case_array_factor_in_range(10.0, 0.11, 0.19);
        assert_abs_diff_eq!(v, array_factor(10.0, 0.11).min(array_factor(10.0, 0.19)), epsilon = 1e-15);
    }

    #[test]
    fn extrema_of_point_area() {
        let area = TargetArea::point(RX);
        let ext = delta_extrema_area(10.0, 0.0, TX, &area, 1.0).unwrap();
        assert_eq!(ext.min, ext.max);
        assert_abs_diff_eq!(ext.min, delta_or_nan(TX, 10.0, 0.0, RX), epsilon = 1e-15);
    }

    #[test]
    fn area_search_bounds_for_reference_area() {
        let (lo, hi) = area_search_bounds(TX, &reference_area()).unwrap();
        assert_abs_diff_eq!(lo, 50.0 * 50.0 / 225.0, epsilon = 1e-9);
        assert_abs_diff_eq!(hi, 150.0 * 50.0 / 175.0, epsilon = 1e-9);
    }

    #[test]
    fn area_search_on_point_degenerates_to_specular() {
        let sol =
            single_mr_area_placement(TX, &TargetArea::point(RX), &dims(10.0), &PlannerOptions::default()).unwrap();
        assert!((sol.poses[0].x - 25.0).abs() <= 0.05);
    }

    #[test]
    fn tiny_area_needs_one_reflector() {
        let area = TargetArea::new(RX, 1.0, 1.0).unwrap();
        let sol = sequential_mr_area_placement(TX, &area, &dims(10.0), &PlannerOptions::default()).unwrap();
        assert_eq!(sol.poses.len(), 1);
        assert!(sol.worst_case_gain >= 0.40);
    }

    #[test]
    fn sequential_rejects_area_above_axis() {
        let area = TargetArea::new(Vec2::new(100.0, 10.0), 10.0, 10.0).unwrap();
        assert!(matches!(
            sequential_mr_area_placement(TX, &area, &dims(10.0), &PlannerOptions::default()),
            Err(ReflectorError::InvalidParameter { name: "area", .. })
        ));
    }

    #[test]
    fn sequential_reports_spacing_infeasibility() {
        // Electrically small plates have a lobe wider than the area but a
        // long edge: force a second plate by shrinking the lobe instead.
        let d = ReflectorDims::new(40.0, 1.0, 0.125).unwrap();
        let err = sequential_mr_area_placement(TX, &reference_area(), &d, &PlannerOptions::default()).unwrap_err();
        assert!(matches!(err, ReflectorError::SpacingInfeasible { .. }), "{err:?}");
    }
}
