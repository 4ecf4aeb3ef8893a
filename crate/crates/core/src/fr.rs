//! Placement and rotation of flexible (rotatable) reflectors.

use std::f64::consts::FRAC_PI_2;

use crate::error::{ReflectorError, Result};
use crate::geometry::{
    incident_vector, reflection_vector, PathGeometry, PlanarPoint, ReflectorDims, ReflectorPose, TargetArea, Vec2,
};
use crate::link_budget::reflection_gain;
use crate::mr::{
    area_search_bounds, covers_lower_left, delta_extrema_area, delta_or_nan, iteration_cap, left_lobe_endpoint,
    min_gain_over_area, validate_sequential_inputs, worst_case_array_factor_in_range, Lobe, PlacementSolution,
};
use crate::roots::{bisect, MAX_BISECTIONS, ROOT_TOL};
use crate::search::{argmax, grid_points};
use crate::PlannerOptions;

const GRAZING_TOL: f64 = 1e-9;

/// Rotation that sets `Δ = 0`: the plate normal bisects the incident and
/// reflected directions.
pub fn optimal_rotation(tx: PlanarPoint, x: f64, r: PlanarPoint) -> Result<f64> {
    let b = PathGeometry::new(tx, x, r)?.deflection();
    rotation_orthogonal_to(b)
}

/// `ω` with `u(ω) ⊥ v`, restricted to `(−π/2, π/2)`.
fn rotation_orthogonal_to(v: Vec2) -> Result<f64> {
    if v.y == 0.0 {
        return Err(ReflectorError::DegenerateGeometry(format!(
            "vector ({}, {}) has no admissible orthogonal rotation",
            v.x, v.y
        )));
    }
    Ok((-v.x / v.y).atan())
}

/// `‖a_r − a_t‖² / (4 d_t² d_r²)`: the path gain at the optimal rotation
/// divided by `σ_max`.
pub fn reduced_fr_objective(tx: PlanarPoint, x: f64, r: PlanarPoint) -> Result<f64> {
    let g = PathGeometry::new(tx, x, r)?;
    let b = g.deflection();
    Ok(b.dot(b) / (4.0 * (g.d_t * g.d_r).powi(2)))
}

/// Default single-target search interval, wide enough to include positions
/// beyond the transmitter.
pub fn default_search_interval(tx: PlanarPoint, r: PlanarPoint) -> (f64, f64) {
    let pad = 2.0 * tx.y.abs();
    (tx.x.min(r.x) - pad, tx.x.max(r.x) + pad)
}

/// Best single rotatable plate for one receiver: grid search of the reduced
/// objective over `interval`, then the optimal rotation at the winner.
pub fn fr_single_target(
    tx: PlanarPoint,
    r: PlanarPoint,
    interval: (f64, f64),
    search_step: f64,
) -> Result<ReflectorPose> {
    let (lo, hi) = interval;
    let xs = grid_points(lo, hi, search_step)?;
    let (x, _) = argmax(&xs, |x| reduced_fr_objective(tx, x, r).unwrap_or(f64::NAN))
        .ok_or(ReflectorError::EmptySearchRegion { lo, hi })?;
    Ok(ReflectorPose::new(x, optimal_rotation(tx, x, r)?))
}

/// Minimum center spacings that keep a neighbouring plate out of the
/// incident and the reflected beams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockageDistances {
    pub d_incident: f64,
    pub d_reflect: f64,
    pub d_min: f64,
}

pub fn blockage_min_distance(
    dims: &ReflectorDims,
    theta_t: f64,
    theta_r: f64,
    omega: f64,
) -> Result<BlockageDistances> {
    for (name, a) in [("theta_t", theta_t), ("theta_r", theta_r), ("omega", omega)] {
        if !(a.cos() > GRAZING_TOL) {
            return Err(ReflectorError::GrazingAngle(format!("{name} = {a}")));
        }
    }
    let half = 0.5 * dims.l1;
    let (s, c) = omega.sin_cos();
    let d_incident = half * (c - theta_t.tan() * s + 1.0 / theta_t.cos());
    let d_reflect = half * (c + theta_r.tan() * s + 1.0 / theta_r.cos());
    Ok(BlockageDistances { d_incident, d_reflect, d_min: d_incident.max(d_reflect) })
}

/// Blockage distances for `pose` serving the receiver at `r`.
pub fn blockage_distance_at(
    tx: PlanarPoint,
    pose: ReflectorPose,
    r: PlanarPoint,
    dims: &ReflectorDims,
) -> Result<BlockageDistances> {
    let g = PathGeometry::new(tx, pose.x, r)?;
    blockage_min_distance(dims, g.theta_t(), g.theta_r(), pose.omega)
}

/// Neighbour positions `x − d` and `x + d` tracked by the planners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideMarkers {
    pub minus: f64,
    pub plus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrPlan {
    pub poses: Vec<ReflectorPose>,
    pub side_markers: Vec<SideMarkers>,
    /// Receiver locations on each plate's left and right main-lobe edges.
    pub lobe_anchors: Vec<Lobe>,
    /// Smallest `Σ_m sinc²(π L̄1 Δ_m)` over the evaluated receivers.
    pub worst_case_gain: f64,
    /// Number of (plate, sampled receiver) pairs violating the same-side
    /// condition.
    pub same_side_violations: usize,
}

fn count_same_side_violations(tx: PlanarPoint, poses: &[ReflectorPose], points: &[PlanarPoint]) -> usize {
    poses.iter().map(|p| points.iter().filter(|&&r| !crate::geometry::same_side(tx, *p, r)).count()).sum()
}

/// Several rotatable plates serving one receiver.
///
/// Candidates are chained outward from the single-plate optimum on both
/// sides, each step at least the anti-blockage distance of the plate to the
/// left of the gap. The `m` candidates with the largest reduced objective
/// are returned in increasing `x`.
pub fn multi_fr_single_target(
    tx: PlanarPoint,
    r: PlanarPoint,
    dims: &ReflectorDims,
    m: usize,
    opts: &PlannerOptions,
) -> Result<FrPlan> {
    if m == 0 {
        return Err(ReflectorError::InvalidParameter { name: "max_reflectors", reason: "must be at least 1".into() });
    }
    let seed = fr_single_target(tx, r, default_search_interval(tx, r), opts.search_step)?;
    let d = |x: f64| -> Result<f64> {
        let pose = ReflectorPose::new(x, optimal_rotation(tx, x, r)?);
        Ok(blockage_distance_at(tx, pose, r, dims)?.d_min)
    };
    let per_side = (m + 2) / 2;

    let mut candidates = vec![seed.x];
    let mut x = seed.x;
    for _ in 1..per_side {
        x += d(x)?;
        candidates.push(x);
    }
    let mut x = seed.x;
    for _ in 1..per_side {
        x -= left_step(x, &d)?;
        candidates.push(x);
    }

    let mut scored = Vec::with_capacity(candidates.len());
    for &x in &candidates {
        scored.push((reduced_fr_objective(tx, x, r)?, x));
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
    scored.truncate(m);
    let mut xs: Vec<f64> = scored.into_iter().map(|(_, x)| x).collect();
    xs.sort_by(f64::total_cmp);

    let mut poses = Vec::with_capacity(xs.len());
    let mut side_markers = Vec::with_capacity(xs.len());
    for &x in &xs {
        let dx = d(x)?;
        poses.push(ReflectorPose::new(x, optimal_rotation(tx, x, r)?));
        side_markers.push(SideMarkers { minus: x - dx, plus: x + dx });
    }
    for (i, w) in xs.windows(2).enumerate() {
        let required = d(w[0])?;
        if w[1] - w[0] < required - 1e-9 {
            return Err(ReflectorError::SpacingInfeasible { index: i, next: i + 1, spacing: w[1] - w[0], required });
        }
    }
    Ok(FrPlan {
        worst_case_gain: reflection_gain(tx, &poses, r, dims.l1_bar()),
        same_side_violations: count_same_side_violations(tx, &poses, &[r]),
        lobe_anchors: vec![Lobe { left: r, right: r }; poses.len()],
        poses,
        side_markers,
    })
}

/// Step `s` from `x` to its left neighbour such that the neighbour's own
/// anti-blockage distance is respected: `s = max(d(x), d(x − s))`.
fn left_step(x: f64, d: &impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let base = d(x)?;
    let mut s = base;
    for _ in 0..100 {
        let next = base.max(d(x - s)?);
        if (next - s).abs() <= 1e-12 * next.max(1.0) {
            return Ok(next.max(s));
        }
        s = next;
    }
    // Not contracting: settle on a step that satisfies both constraints.
    let mut s = s.max(base);
    for _ in 0..100 {
        let need = d(x - s)?;
        if s >= need {
            return Ok(s);
        }
        s = need * (1.0 + 1e-9);
    }
    Err(ReflectorError::NonConvergence { iterations: 200 })
}

/// Rotation that gives equal-magnitude, opposite-sign `Δ` at the two
/// area points where `Δ(x, 0)` is extreme.
pub fn balanced_area_rotation(tx: PlanarPoint, x: f64, area: &TargetArea, grid_step: f64) -> Result<f64> {
    let ext = delta_extrema_area(x, 0.0, tx, area, grid_step)?;
    let (a_t, _) = incident_vector(tx, x)?;
    let (a_max, _) = reflection_vector(x, ext.argmax)?;
    let (a_min, _) = reflection_vector(x, ext.argmin)?;
    let v = a_max + a_min - a_t * 2.0;
    if v.x == 0.0 && v.y == 0.0 {
        return Err(ReflectorError::DegenerateGeometry("balancing vector vanishes".into()));
    }
    rotation_orthogonal_to(v)
}

/// Worst-case array factor over the area for a rotatable plate at `x`
/// using the balanced rotation. NaN when a corner violates the same-side
/// condition.
pub fn fr_area_metric(
    tx: PlanarPoint,
    x: f64,
    area: &TargetArea,
    dims: &ReflectorDims,
    grid_step: f64,
) -> Result<(f64, f64)> {
    let omega = balanced_area_rotation(tx, x, area, grid_step)?;
    let pose = ReflectorPose::new(x, omega);
    if !area.corners().iter().all(|&c| crate::geometry::same_side(tx, pose, c)) {
        return Ok((omega, f64::NAN));
    }
    let ext = delta_extrema_area(x, omega, tx, area, grid_step)?;
    Ok((omega, worst_case_array_factor_in_range(dims.l1_bar(), ext.min, ext.max)))
}

/// Single rotatable plate maximizing the worst-case array factor over the
/// area. `interval` defaults to the same range the unrotated search uses.
pub fn single_fr_area(
    tx: PlanarPoint,
    area: &TargetArea,
    dims: &ReflectorDims,
    interval: Option<(f64, f64)>,
    opts: &PlannerOptions,
) -> Result<PlacementSolution> {
    let (lo, hi) = match interval {
        Some(i) => i,
        None => area_search_bounds(tx, area)?,
    };
    let xs = grid_points(lo, hi, opts.search_step)?;
    let (x, metric) = argmax(&xs, |x| fr_area_metric(tx, x, area, dims, opts.grid_step).map_or(f64::NAN, |(_, v)| v))
        .ok_or(ReflectorError::EmptySearchRegion { lo, hi })?;
    let (omega, _) = fr_area_metric(tx, x, area, dims, opts.grid_step)?;
    let ext = delta_extrema_area(x, omega, tx, area, opts.grid_step)?;
    Ok(PlacementSolution {
        poses: vec![ReflectorPose::new(x, omega)],
        worst_case_gain: metric,
        lobes: vec![Lobe { left: ext.argmin, right: ext.argmax }],
    })
}

/// Rotation placing `r` on the right main-lobe edge, `Δ(x, ω; r) = 1/(2L̄1)`.
///
/// With `b = a_r − a_t`, `Δ(ω) = ‖b‖ sin(ω⋆ − ω)`, so the root is bracketed
/// by `[ω⋆ − π/2, ω⋆]` whenever `‖b‖ > 1/(2L̄1)`.
pub fn rotation_for_right_endpoint(tx: PlanarPoint, x: f64, r: PlanarPoint, half_width: f64) -> Result<f64> {
    let g = PathGeometry::new(tx, x, r)?;
    let b = g.deflection();
    let w_star = rotation_orthogonal_to(b)?;
    if b.norm() <= half_width {
        return Err(ReflectorError::DegenerateGeometry(format!(
            "receiver ({}, {}) cannot be placed on a lobe edge of the plate at x = {x}",
            r.x, r.y
        )));
    }
    let omega = bisect(|w| g.delta(w) - half_width, w_star - FRAC_PI_2, w_star, ROOT_TOL, MAX_BISECTIONS)?;
    if omega <= -FRAC_PI_2 {
        return Err(ReflectorError::DegenerateGeometry(format!(
            "lobe-edge rotation {omega} at x = {x} is outside (−π/2, π/2)"
        )));
    }
    Ok(omega)
}

/// Concatenated path loss `d_t² d_r²`.
pub fn concatenated_path_loss(tx: PlanarPoint, x: f64, r: PlanarPoint) -> f64 {
    ((x - tx.x).powi(2) + tx.y * tx.y) * ((r.x - x).powi(2) + r.y * r.y)
}

/// Position minimizing [`concatenated_path_loss`] to `r` on a grid.
pub fn min_path_loss_position(tx: PlanarPoint, r: PlanarPoint, search_step: f64) -> Result<f64> {
    let pad = 2.0 * tx.y.abs();
    let (lo, hi) = (tx.x.min(r.x) - pad, tx.x.max(r.x) + pad);
    let xs = grid_points(lo, hi, search_step)?;
    argmax(&xs, |x| -concatenated_path_loss(tx, x, r))
        .map(|(x, _)| x)
        .ok_or(ReflectorError::EmptySearchRegion { lo, hi })
}

/// Anti-blockage distance for a plate serving the lobe between `left` and
/// `right`: the larger of the two endpoint distances.
fn lobe_blockage(tx: PlanarPoint, pose: ReflectorPose, lobe: Lobe, dims: &ReflectorDims) -> Result<f64> {
    let a = blockage_distance_at(tx, pose, lobe.right, dims)?.d_min;
    let b = blockage_distance_at(tx, pose, lobe.left, dims)?.d_min;
    Ok(a.max(b))
}

/// Sequential planner for rotatable plates.
///
/// Each plate is rotated so the current right anchor sits on its right
/// lobe edge; the left lobe edge becomes the next right anchor. The next
/// plate goes to whichever open side (left or right of the plates placed so
/// far, one anti-blockage distance away) has the smaller concatenated path
/// loss to the new anchor; ties go left.
pub fn sequential_fr_area(
    tx: PlanarPoint,
    area: &TargetArea,
    dims: &ReflectorDims,
    opts: &PlannerOptions,
) -> Result<FrPlan> {
    validate_sequential_inputs(tx, area)?;
    let h = dims.main_lobe_half_width();
    let cap = iteration_cap(area, dims);

    let mut anchor = area.upper_right();
    let mut x = min_path_loss_position(tx, anchor, opts.search_step)?;
    let mut poses = Vec::new();
    let mut lobe_anchors = Vec::new();
    let mut side_markers: Vec<SideMarkers> = Vec::new();
    loop {
        if poses.len() >= cap {
            return Err(ReflectorError::NonConvergence { iterations: poses.len() });
        }
        let omega = rotation_for_right_endpoint(tx, x, anchor, h)?;
        let pose = ReflectorPose::new(x, omega);
        let done = covers_lower_left(tx, pose, area, h);
        let left = if done { area.lower_left() } else { left_lobe_endpoint(tx, pose, area, h)?.0 };
        let lobe = Lobe { left, right: anchor };
        let d = lobe_blockage(tx, pose, lobe, dims)?;

        let markers = match side_markers.last() {
            None => SideMarkers { minus: x - d, plus: x + d },
            Some(prev) if x == prev.minus => SideMarkers { minus: x - d, plus: prev.plus },
            Some(prev) => SideMarkers { minus: prev.minus, plus: x + d },
        };
        poses.push(pose);
        lobe_anchors.push(lobe);
        side_markers.push(markers);
        if done {
            break;
        }
        anchor = left;
        x = if concatenated_path_loss(tx, markers.minus, anchor) <= concatenated_path_loss(tx, markers.plus, anchor) {
            markers.minus
        } else {
            markers.plus
        };
    }

    let grid: Vec<PlanarPoint> = area.grid(opts.coverage_step)?.points().collect();
    Ok(FrPlan {
        worst_case_gain: min_gain_over_area(tx, &poses, area, dims, opts.coverage_step)?,
        same_side_violations: count_same_side_violations(tx, &poses, &grid),
        poses,
        side_markers,
        lobe_anchors,
    })
}

/// Rotations for plates at fixed positions, chained like the sequential
/// planner: plates are visited in decreasing `x`, each putting the current
/// anchor on its right lobe edge. Plates left over once the lower-left
/// corner is covered, or whose lobe edge cannot be resolved, stay at `ω = 0`.
pub fn chained_rotations(tx: PlanarPoint, xs: &[f64], area: &TargetArea, dims: &ReflectorDims) -> Vec<ReflectorPose> {
    let h = dims.main_lobe_half_width();
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[b].total_cmp(&xs[a]));
    let mut poses: Vec<ReflectorPose> = xs.iter().map(|&x| ReflectorPose::unrotated(x)).collect();
    let mut anchor = Some(area.upper_right());
    for i in order {
        let Some(r) = anchor else { break };
        let Ok(omega) = rotation_for_right_endpoint(tx, xs[i], r, h) else {
            anchor = None;
            continue;
        };
        let pose = ReflectorPose::new(xs[i], omega);
        poses[i] = pose;
        anchor = if covers_lower_left(tx, pose, area, h) {
            None
        } else {
            left_lobe_endpoint(tx, pose, area, h).ok().map(|(p, _)| p)
        };
    }
    poses
}

/// `Δ(x_m, ω_m; r)` residual helper used by chaining checks.
pub fn lobe_edge_residual(tx: PlanarPoint, pose: ReflectorPose, r: PlanarPoint, half_width: f64) -> f64 {
    delta_or_nan(tx, pose.x, pose.omega, r) - half_width
}
