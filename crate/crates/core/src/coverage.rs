//! Receive-power fields over an area, their statistics, and the benchmark
//! placements used for comparison.

use crate::error::{ReflectorError, Result};
use crate::fr::{
    balanced_area_rotation, chained_rotations, fr_area_metric, optimal_rotation, reduced_fr_objective, single_fr_area,
};
use crate::geometry::{PathGeometry, PlanarPoint, ReflectorDims, ReflectorPose, TargetArea};
use crate::link_budget::{array_factor, path_gain, receive_power, watts_to_dbm, LinkBudgetConfig, PowerSample};
use crate::mr::{
    delta_extrema_area, single_mr_area_placement, worst_case_array_factor, worst_case_array_factor_in_range,
};
use crate::search::{argmax, centered_grid};
use crate::PlannerOptions;

/// Lowest dBm value shown in reports; weaker (or zero) powers are clamped
/// to it for display only.
pub const DBM_FLOOR: f64 = -130.0;

/// Power samples on an area grid, row-major with x varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageField {
    pub area: TargetArea,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
    pub samples: Vec<PowerSample>,
}

impl CoverageField {
    pub fn powers(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.power).collect()
    }

    pub fn min_gain(&self) -> f64 {
        self.samples.iter().map(|s| s.reflection_gain).fold(f64::INFINITY, f64::min)
    }
}

pub fn evaluate_field(
    cfg: &LinkBudgetConfig,
    poses: &[ReflectorPose],
    area: &TargetArea,
    step: f64,
) -> Result<CoverageField> {
    let grid = area.grid(step)?;
    let sample = |i: usize| receive_power(cfg, poses, grid.point_at(i));
    #[cfg(feature = "parallel")]
    let samples = {
        use rayon::prelude::*;
        (0..grid.len()).into_par_iter().map(sample).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let samples = (0..grid.len()).map(sample).collect();
    Ok(CoverageField { area: *area, step, nx: grid.nx, ny: grid.ny, samples })
}

/// Weakest sample (the first one in grid order on ties).
pub fn min_power(field: &CoverageField) -> Result<PowerSample> {
    field
        .samples
        .iter()
        .copied()
        .reduce(|best, s| if s.power < best.power { s } else { best })
        .ok_or_else(|| ReflectorError::InvalidParameter { name: "field", reason: "no samples".into() })
}

/// Receive power in dBm clamped to [`DBM_FLOOR`].
pub fn display_dbm(p: f64) -> f64 {
    watts_to_dbm(p).map_or(DBM_FLOOR, |v| v.max(DBM_FLOOR))
}

/// Empirical CDF of a set of powers: `(dBm, i/N)` for the `i`-th smallest.
pub fn empirical_cdf_of(powers: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = powers.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted.into_iter().enumerate().map(|(i, p)| (display_dbm(p), (i + 1) as f64 / n)).collect()
}

pub fn empirical_cdf(field: &CoverageField) -> Vec<(f64, f64)> {
    empirical_cdf_of(&field.powers())
}

/// Median; the mean of the two middle values for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

/// `min_r max_m sinc²(π L̄1 Δ_m(r))` over the area grid: at least this
/// much array factor reaches every sample from its best plate.
pub fn lobe_coverage(
    tx: PlanarPoint,
    poses: &[ReflectorPose],
    area: &TargetArea,
    l1_bar: f64,
    step: f64,
) -> Result<f64> {
    let grid = area.grid(step)?;
    let mut worst = f64::INFINITY;
    for r in grid.points() {
        let mut best = 0.0f64;
        for p in poses {
            if let Ok(g) = PathGeometry::new(tx, p.x, r) {
                if g.same_side(p.omega) {
                    best = best.max(array_factor(l1_bar, g.delta(p.omega)));
                }
            }
        }
        worst = worst.min(best);
    }
    Ok(worst)
}

/// Smallest receive power over the area.
///
/// For a single plate the worst case is exactly zero whenever a sinc null
/// falls inside the plate's `Δ` range over the area, even if no grid
/// sample lands on it.
pub fn worst_case_power(cfg: &LinkBudgetConfig, poses: &[ReflectorPose], area: &TargetArea, step: f64) -> Result<f64> {
    if let [pose] = poses {
        let ext = delta_extrema_area(pose.x, pose.omega, cfg.tx, area, step)?;
        if worst_case_array_factor_in_range(cfg.dims.l1_bar(), ext.min, ext.max) == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(min_power(&evaluate_field(cfg, poses, area, step)?)?.power)
}

/// Receiver description for benchmark schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Point(PlanarPoint),
    Area(TargetArea),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BenchmarkScheme {
    /// Unrotated plate at a fixed position.
    Fpr { x: f64 },
    /// Rotatable plate at a fixed position.
    Fprr { x: f64 },
    /// `count` unrotated plates evenly spread from the transmitter to the
    /// far edge of the target.
    EqualSpacingMr { count: usize },
    /// Like [`BenchmarkScheme::EqualSpacingMr`] with chained lobe-edge rotations.
    EqualSpacingFr { count: usize },
    /// Best unrotated plate within `[anchor − size/2, anchor + size/2]`.
    MovableRegionMr { anchor: f64, size: f64 },
    /// Best rotatable plate within `[anchor − size/2, anchor + size/2]`.
    MovableRegionFr { anchor: f64, size: f64 },
}

impl BenchmarkScheme {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fpr { .. } => "fpr",
            Self::Fprr { .. } => "fprr",
            Self::EqualSpacingMr { .. } => "equal_spacing_mr",
            Self::EqualSpacingFr { .. } => "equal_spacing_fr",
            Self::MovableRegionMr { .. } => "movable_region_mr",
            Self::MovableRegionFr { .. } => "movable_region_fr",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(ReflectorError::InvalidParameter { name, reason });
        match *self {
            Self::Fpr { x } | Self::Fprr { x } if !x.is_finite() => bad("x", format!("must be finite, got {x}")),
            Self::EqualSpacingMr { count: 0 } | Self::EqualSpacingFr { count: 0 } => {
                bad("count", "must be at least 1".into())
            }
            Self::MovableRegionMr { anchor, size } | Self::MovableRegionFr { anchor, size }
                if !(anchor.is_finite() && size.is_finite() && size >= 0.0) =>
            {
                bad("region_size", format!("anchor {anchor} and size {size} must be finite, size non-negative"))
            }
            _ => Ok(()),
        }
    }
}

fn far_edge(target: &Target) -> f64 {
    match target {
        Target::Point(r) => r.x,
        Target::Area(a) => a.x_max(),
    }
}

fn even_positions(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

pub fn benchmark_poses(
    scheme: BenchmarkScheme,
    tx: PlanarPoint,
    target: &Target,
    dims: &ReflectorDims,
    opts: &PlannerOptions,
) -> Result<Vec<ReflectorPose>> {
    scheme.validate()?;
    let rotated = |x: f64| -> Result<ReflectorPose> {
        let omega = match target {
            Target::Point(r) => optimal_rotation(tx, x, *r)?,
            Target::Area(a) => balanced_area_rotation(tx, x, a, opts.grid_step)?,
        };
        Ok(ReflectorPose::new(x, omega))
    };
    match scheme {
        BenchmarkScheme::Fpr { x } => Ok(vec![ReflectorPose::unrotated(x)]),
        BenchmarkScheme::Fprr { x } => Ok(vec![rotated(x)?]),
        BenchmarkScheme::EqualSpacingMr { count } => {
            Ok(even_positions(tx.x, far_edge(target), count).into_iter().map(ReflectorPose::unrotated).collect())
        }
        BenchmarkScheme::EqualSpacingFr { count } => {
            let xs = even_positions(tx.x, far_edge(target), count);
            match target {
                Target::Point(_) => xs.into_iter().map(rotated).collect(),
                Target::Area(a) => Ok(chained_rotations(tx, &xs, a, dims)),
            }
        }
        BenchmarkScheme::MovableRegionMr { anchor, size } => {
            let xs = centered_grid(anchor, size / 2.0, opts.search_step)?;
            let metric = |x: f64| match target {
                Target::Point(r) => path_gain(tx, ReflectorPose::unrotated(x), *r, dims).map_or(f64::NAN, |g| g.value),
                Target::Area(a) => worst_case_array_factor(x, tx, a, dims, opts.grid_step).unwrap_or(f64::NAN),
            };
            let (x, _) = argmax(&xs, metric)
                .ok_or(ReflectorError::EmptySearchRegion { lo: anchor - size / 2.0, hi: anchor + size / 2.0 })?;
            Ok(vec![ReflectorPose::unrotated(x)])
        }
        BenchmarkScheme::MovableRegionFr { anchor, size } => {
            let xs = centered_grid(anchor, size / 2.0, opts.search_step)?;
            let metric = |x: f64| match target {
                Target::Point(r) => reduced_fr_objective(tx, x, *r).unwrap_or(f64::NAN),
                Target::Area(a) => fr_area_metric(tx, x, a, dims, opts.grid_step).map_or(f64::NAN, |(_, v)| v),
            };
            let (x, _) = argmax(&xs, metric)
                .ok_or(ReflectorError::EmptySearchRegion { lo: anchor - size / 2.0, hi: anchor + size / 2.0 })?;
            Ok(vec![rotated(x)?])
        }
    }
}

/// Single-receiver powers (W) of the four single-plate schemes for one
/// movable-region size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSweepRow {
    pub size: f64,
    pub fpr: f64,
    pub fprr: f64,
    pub mr: f64,
    pub fr: f64,
}

/// Receive power at `r` versus movable-region size, all regions centered
/// on `anchor`.
pub fn region_sweep(
    cfg: &LinkBudgetConfig,
    r: PlanarPoint,
    anchor: f64,
    sizes: &[f64],
    opts: &PlannerOptions,
) -> Result<Vec<RegionSweepRow>> {
    let target = Target::Point(r);
    let power = |scheme| -> Result<f64> {
        let poses = benchmark_poses(scheme, cfg.tx, &target, &cfg.dims, opts)?;
        Ok(receive_power(cfg, &poses, r).power)
    };
    let fpr = power(BenchmarkScheme::Fpr { x: anchor })?;
    let fprr = power(BenchmarkScheme::Fprr { x: anchor })?;
    sizes
        .iter()
        .map(|&size| {
            Ok(RegionSweepRow {
                size,
                fpr,
                fprr,
                mr: power(BenchmarkScheme::MovableRegionMr { anchor, size })?,
                fr: power(BenchmarkScheme::MovableRegionFr { anchor, size })?,
            })
        })
        .collect()
}

/// Worst-case area powers (W) of the four single-plate schemes for one
/// area length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaSweepRow {
    pub dx: f64,
    pub fpr: f64,
    pub fprr: f64,
    pub mr: f64,
    pub fr: f64,
}

/// Worst-case power versus area length `dx` for a fixed center and width.
/// The fixed schemes sit midway between the transmitter and the center.
pub fn area_length_sweep(
    cfg: &LinkBudgetConfig,
    center: PlanarPoint,
    dy: f64,
    lengths: &[f64],
    opts: &PlannerOptions,
) -> Result<Vec<AreaSweepRow>> {
    let mid = 0.5 * (cfg.tx.x + center.x);
    lengths
        .iter()
        .map(|&dx| {
            let area = TargetArea::new(center, dx, dy)?;
            let target = Target::Area(area);
            let wc = |poses: &[ReflectorPose]| worst_case_power(cfg, poses, &area, opts.coverage_step);
            let fpr = wc(&benchmark_poses(BenchmarkScheme::Fpr { x: mid }, cfg.tx, &target, &cfg.dims, opts)?)?;
            let fprr = wc(&benchmark_poses(BenchmarkScheme::Fprr { x: mid }, cfg.tx, &target, &cfg.dims, opts)?)?;
            let mr = wc(&single_mr_area_placement(cfg.tx, &area, &cfg.dims, opts)?.poses)?;
            let fr = wc(&single_fr_area(cfg.tx, &area, &cfg.dims, None, opts)?.poses)?;
            Ok(AreaSweepRow { dx, fpr, fprr, mr, fr })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use approx::assert_abs_diff_eq;

    const TX: PlanarPoint = Vec2::new(0.0, -50.0);

    fn cfg() -> LinkBudgetConfig {
        let dims = ReflectorDims::from_wavelengths(10.0, 5.0, 299_792_458.0 / 2.4e9).unwrap();
        LinkBudgetConfig::new(1.0, dims, TX).unwrap()
    }

    fn area() -> TargetArea {
        TargetArea::new(Vec2::new(100.0, -150.0), 100.0, 50.0).unwrap()
    }

    #[test]
    fn field_layout_and_empty_plan() {
        let f = evaluate_field(&cfg(), &[], &area(), 1.0).unwrap();
        assert_eq!((f.nx, f.ny), (101, 51));
        assert_eq!(f.samples.len(), 5151);
        assert!(f.samples.iter().all(|s| s.power == 0.0));
        assert_eq!(f.samples[0].location, area().lower_left());
        assert_eq!(f.samples[5150].location, area().upper_right());
    }

    #[test]
    fn specular_sample_has_unit_gain() {
        let a = TargetArea::new(Vec2::new(100.0, -150.0), 2.0, 2.0).unwrap();
        let f = evaluate_field(&cfg(), &[ReflectorPose::unrotated(25.0)], &a, 1.0).unwrap();
        assert_abs_diff_eq!(f.samples[4].reflection_gain, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cdf_properties() {
        let cdf = empirical_cdf_of(&[1e-3; 4]);
        assert!(cdf.iter().all(|&(d, _)| d == 0.0));
        assert_eq!(cdf.last().unwrap().1, 1.0);
        let cdf = empirical_cdf_of(&[3e-9, 0.0, 1e-12, 5e-10]);
        assert_eq!(cdf[0], (DBM_FLOOR, 0.25));
        assert!(cdf.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 < w[1].1));
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn min_power_picks_weakest() {
        let f = evaluate_field(&cfg(), &[ReflectorPose::unrotated(25.0)], &area(), 5.0).unwrap();
        let m = min_power(&f).unwrap();
        assert!(f.samples.iter().all(|s| s.power >= m.power));
    }

    #[test]
    fn benchmark_pose_shapes() {
        let c = cfg();
        let opts = PlannerOptions::default();
        let t = Target::Point(Vec2::new(100.0, -60.0));
        let tx = Vec2::new(0.0, -150.0);
        assert_eq!(
            benchmark_poses(BenchmarkScheme::Fpr { x: tx.x }, tx, &t, &c.dims, &opts).unwrap(),
            vec![ReflectorPose::unrotated(0.0)]
        );
        let eq =
            benchmark_poses(BenchmarkScheme::EqualSpacingMr { count: 7 }, TX, &Target::Area(area()), &c.dims, &opts)
                .unwrap();
        let xs: Vec<f64> = eq.iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![0.0, 25.0, 50.0, 75.0, 100.0, 125.0, 150.0]);
        assert!(BenchmarkScheme::EqualSpacingFr { count: 0 }.validate().is_err());
        assert!(BenchmarkScheme::MovableRegionMr { anchor: 0.0, size: -1.0 }.validate().is_err());
    }

    #[test]
    fn large_region_recovers_unconstrained_optimum() {
        let c = cfg();
        let opts = PlannerOptions::default();
        let r = Vec2::new(100.0, -150.0);
        let p = benchmark_poses(
            BenchmarkScheme::MovableRegionMr { anchor: 0.0, size: 400.0 },
            TX,
            &Target::Point(r),
            &c.dims,
            &opts,
        )
        .unwrap();
        assert!((p[0].x - 25.0).abs() <= opts.search_step);
    }

    #[test]
    fn fpr_worst_case_is_zero_on_long_area() {
        let c = cfg();
        let a = TargetArea::new(Vec2::new(100.0, -75.0), 40.0, 10.0).unwrap();
        assert_eq!(worst_case_power(&c, &[ReflectorPose::unrotated(50.0)], &a, 1.0).unwrap(), 0.0);
    }
}
