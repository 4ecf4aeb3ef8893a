//! Planar reflection geometry.
//!
//! Every point in the model (transmitter, receiver locations, reflector
//! centers) lies in the `z = 0` plane, so positions are stored as 2D vectors.
//! Reflector centers sit on the x-axis; the transmitter and the served area
//! are below it (`y < 0`).

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{ReflectorError, Result};

/// 2D vector, also used for points in the `z = 0` plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

/// A location in the `z = 0` plane, in meters.
pub type PlanarPoint = Vec2;

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Splits `self` into its unit direction and length.
    fn unit_and_length(self, what: &'static str) -> Result<(Vec2, f64)> {
        let len = self.norm();
        if len == 0.0 || !len.is_finite() {
            return Err(ReflectorError::CoincidentPoints(what));
        }
        Ok((self * (1.0 / len), len))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Center position on the x-axis and 1D rotation angle of one reflector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectorPose {
    /// Center x-coordinate in meters.
    pub x: f64,
    /// Rotation about the z-axis in radians; admissible range is `(-π/2, π/2)`.
    pub omega: f64,
}

impl ReflectorPose {
    pub const fn new(x: f64, omega: f64) -> Self {
        Self { x, omega }
    }

    /// A pose without rotation (movable reflector).
    pub const fn unrotated(x: f64) -> Self {
        Self { x, omega: 0.0 }
    }

    pub fn center(&self) -> PlanarPoint {
        Vec2::new(self.x, 0.0)
    }

    pub fn has_admissible_rotation(&self) -> bool {
        self.omega.abs() < std::f64::consts::FRAC_PI_2
    }
}

/// Plate size and carrier wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectorDims {
    /// Edge length in the rotation plane (m).
    pub l1: f64,
    /// Edge length along z (m).
    pub l2: f64,
    /// Carrier wavelength (m).
    pub wavelength: f64,
}

impl ReflectorDims {
    pub fn new(l1: f64, l2: f64, wavelength: f64) -> Result<Self> {
        for (name, v) in [("l1", l1), ("l2", l2), ("wavelength", wavelength)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ReflectorError::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        Ok(Self { l1, l2, wavelength })
    }

    /// Builds the dimensions from edge lengths expressed in wavelengths.
    pub fn from_wavelengths(l1_wavelengths: f64, l2_wavelengths: f64, wavelength: f64) -> Result<Self> {
        Self::new(l1_wavelengths * wavelength, l2_wavelengths * wavelength, wavelength)
    }

    /// Wavelength-normalized edge length `L1 / λ`.
    pub fn l1_bar(&self) -> f64 {
        self.l1 / self.wavelength
    }

    /// Peak radar cross section `4π L1² L2² / λ²` (m²).
    pub fn sigma_max(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.l1.powi(2) * self.l2.powi(2) / self.wavelength.powi(2)
    }

    /// Half-width of the main lobe in projection units, `1 / (2 L̄1)`.
    pub fn main_lobe_half_width(&self) -> f64 {
        0.5 / self.l1_bar()
    }
}

/// Rectangular coverage area on the x-y plane.
///
/// Zero extents are accepted and describe a degenerate (point or segment)
/// area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetArea {
    pub center: PlanarPoint,
    /// Length along x (m).
    pub dx: f64,
    /// Width along y (m).
    pub dy: f64,
}

impl TargetArea {
    pub fn new(center: PlanarPoint, dx: f64, dy: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(ReflectorError::InvalidParameter { name: "center", reason: "must be finite".into() });
        }
        for (name, v) in [("dx", dx), ("dy", dy)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ReflectorError::InvalidParameter {
                    name,
                    reason: format!("must be non-negative and finite, got {v}"),
                });
            }
        }
        Ok(Self { center, dx, dy })
    }

    pub fn point(p: PlanarPoint) -> Self {
        Self { center: p, dx: 0.0, dy: 0.0 }
    }

    pub fn x_min(&self) -> f64 {
        self.center.x - self.dx / 2.0
    }
    pub fn x_max(&self) -> f64 {
        self.center.x + self.dx / 2.0
    }
    pub fn y_min(&self) -> f64 {
        self.center.y - self.dy / 2.0
    }
    pub fn y_max(&self) -> f64 {
        self.center.y + self.dy / 2.0
    }

    pub fn upper_left(&self) -> PlanarPoint {
        Vec2::new(self.x_min(), self.y_max())
    }
    pub fn lower_left(&self) -> PlanarPoint {
        Vec2::new(self.x_min(), self.y_min())
    }
    pub fn upper_right(&self) -> PlanarPoint {
        Vec2::new(self.x_max(), self.y_max())
    }
    pub fn lower_right(&self) -> PlanarPoint {
        Vec2::new(self.x_max(), self.y_min())
    }

    /// Corners in the order upper-left, lower-left, upper-right, lower-right.
    pub fn corners(&self) -> [PlanarPoint; 4] {
        [self.upper_left(), self.lower_left(), self.upper_right(), self.lower_right()]
    }

    pub fn contains(&self, p: PlanarPoint) -> bool {
        p.x >= self.x_min() && p.x <= self.x_max() && p.y >= self.y_min() && p.y <= self.y_max()
    }

    /// Whole area strictly below the x-axis.
    pub fn is_below_axis(&self) -> bool {
        self.y_max() < 0.0
    }

    /// Regular sampling grid that always includes the four corners.
    pub fn grid(&self, step: f64) -> Result<AreaGrid> {
        if !(step.is_finite() && step > 0.0) {
            return Err(ReflectorError::InvalidParameter {
                name: "grid_step",
                reason: format!("must be positive, got {step}"),
            });
        }
        Ok(AreaGrid { area: *self, nx: samples_along(self.dx, step), ny: samples_along(self.dy, step) })
    }
}

fn samples_along(extent: f64, step: f64) -> usize {
    // Small slack so that e.g. 100 / 0.1 is not floored to 999.
    let n = (extent / step + 1e-9).floor() as usize + 1;
    if extent > 0.0 {
        n.max(2)
    } else {
        1
    }
}

/// Sample layout of a [`TargetArea`]: `nx · ny` points, row-major with x
/// varying fastest, starting at the lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaGrid {
    pub area: TargetArea,
    pub nx: usize,
    pub ny: usize,
}

impl AreaGrid {
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coord(lo: f64, extent: f64, n: usize, i: usize) -> f64 {
        if n <= 1 {
            lo + extent / 2.0
        } else if i + 1 == n {
            lo + extent
        } else {
            lo + extent * i as f64 / (n - 1) as f64
        }
    }

    pub fn point(&self, ix: usize, iy: usize) -> PlanarPoint {
        let a = &self.area;
        Vec2::new(Self::coord(a.x_min(), a.dx, self.nx, ix), Self::coord(a.y_min(), a.dy, self.ny, iy))
    }

    pub fn point_at(&self, index: usize) -> PlanarPoint {
        self.point(index % self.nx, index / self.nx)
    }

    pub fn points(&self) -> impl Iterator<Item = PlanarPoint> + '_ {
        (0..self.len()).map(move |i| self.point_at(i))
    }

    /// Samples on the rectangle's perimeter only (corners included once).
    pub fn boundary_points(&self) -> Vec<PlanarPoint> {
        let mut out = Vec::new();
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if iy == 0 || iy + 1 == self.ny || ix == 0 || ix + 1 == self.nx {
                    out.push(self.point(ix, iy));
                }
            }
        }
        out
    }
}

/// Edge direction `u(ω)` and normal `n(ω)` of a rotated reflector.
pub fn rotation_basis(omega: f64) -> (Vec2, Vec2) {
    let (s, c) = omega.sin_cos();
    (Vec2::new(c, s), Vec2::new(-s, c))
}

/// Unit vector from the transmitter to a reflector centered at `(x, 0)`,
/// together with the distance `d_t(x)`.
pub fn incident_vector(tx: PlanarPoint, x: f64) -> Result<(Vec2, f64)> {
    (Vec2::new(x, 0.0) - tx).unit_and_length("transmitter lies on the reflector center")
}

/// Unit vector from a reflector centered at `(x, 0)` to `r`, together with
/// the distance `d_r(x; r)`.
pub fn reflection_vector(x: f64, r: PlanarPoint) -> Result<(Vec2, f64)> {
    (r - Vec2::new(x, 0.0)).unit_and_length("receiver lies on the reflector center")
}

/// Incident and reflection directions for one transmitter, reflector
/// position and receiver location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathGeometry {
    pub a_t: Vec2,
    pub d_t: f64,
    pub a_r: Vec2,
    pub d_r: f64,
}

impl PathGeometry {
    pub fn new(tx: PlanarPoint, x: f64, r: PlanarPoint) -> Result<Self> {
        let (a_t, d_t) = incident_vector(tx, x)?;
        let (a_r, d_r) = reflection_vector(x, r)?;
        Ok(Self { a_t, d_t, a_r, d_r })
    }

    /// Deflection vector `a_r − a_t`.
    pub fn deflection(&self) -> Vec2 {
        self.a_r - self.a_t
    }

    /// Projection of the deflection vector onto the plate edge.
    pub fn delta(&self, omega: f64) -> f64 {
        self.deflection().dot(rotation_basis(omega).0)
    }

    /// Effective-aperture factor `(a_rᵀ n(ω))²`.
    pub fn eta(&self, omega: f64) -> f64 {
        self.a_r.dot(rotation_basis(omega).1).powi(2)
    }

    /// Transmitter and receiver on the same (front) side of the plate.
    pub fn same_side(&self, omega: f64) -> bool {
        let n = rotation_basis(omega).1;
        self.a_t.dot(n) * self.a_r.dot(n) < 0.0
    }

    /// Incidence angle θ_t with `sin θ_t = (x − x_t)/d_t`.
    pub fn theta_t(&self) -> f64 {
        self.a_t.x.atan2(self.a_t.y)
    }

    /// Reflection angle θ_r with `sin θ_r = (x_r − x)/d_r`.
    pub fn theta_r(&self) -> f64 {
        self.a_r.x.atan2(-self.a_r.y)
    }
}

/// `Δ = (a_r − a_t)ᵀ u(ω)`, bounded by `[-2, 2]`.
pub fn projection_delta(tx: PlanarPoint, pose: ReflectorPose, r: PlanarPoint) -> Result<f64> {
    Ok(PathGeometry::new(tx, pose.x, r)?.delta(pose.omega))
}

pub fn eta_factor(tx: PlanarPoint, pose: ReflectorPose, r: PlanarPoint) -> Result<f64> {
    Ok(PathGeometry::new(tx, pose.x, r)?.eta(pose.omega))
}

/// Same-side test; coincident points count as infeasible.
pub fn same_side(tx: PlanarPoint, pose: ReflectorPose, r: PlanarPoint) -> bool {
    PathGeometry::new(tx, pose.x, r).is_ok_and(|g| g.same_side(pose.omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    const TX: PlanarPoint = Vec2::new(0.0, -50.0);
    const RX: PlanarPoint = Vec2::new(100.0, -150.0);

    #[test]
    fn basis_identity_and_quarter_turn() {
        let (u, n) = rotation_basis(0.0);
        assert_eq!((u, n), (Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)));
        let (u, n) = rotation_basis(FRAC_PI_2);
        assert_abs_diff_eq!(u.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(u.y, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.x, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.y, 0.0, epsilon = 1e-15);
        let (u, n) = rotation_basis(0.3);
        assert_abs_diff_eq!(u.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u.dot(n), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn incident_vectors() {
        let (a, d) = incident_vector(TX, 0.0).unwrap();
        assert_eq!(a, Vec2::new(0.0, 1.0));
        assert_eq!(d, 50.0);
        let (a, _) = incident_vector(TX, 50.0).unwrap();
        assert_abs_diff_eq!(a.x, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(a.y, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        let (a, _) = incident_vector(TX, 25.0).unwrap();
        assert_abs_diff_eq!(a.x, 0.4472, epsilon = 1e-4);
        assert_abs_diff_eq!(a.y, 0.8944, epsilon = 1e-4);
        assert!(matches!(incident_vector(Vec2::new(3.0, 0.0), 3.0), Err(ReflectorError::CoincidentPoints(_))));
    }

    #[test]
    fn reflection_vectors() {
        let (a, d) = reflection_vector(100.0, RX).unwrap();
        assert_eq!(a, Vec2::new(0.0, -1.0));
        assert_eq!(d, 150.0);
        let (a, _) = reflection_vector(25.0, RX).unwrap();
        let n = 75f64.hypot(150.0);
        assert_abs_diff_eq!(a.x, 75.0 / n, epsilon = 1e-15);
        assert_abs_diff_eq!(a.y, -150.0 / n, epsilon = 1e-15);
        for a_len in [0.5, 7.0, 300.0] {
            let (a, _) = reflection_vector(12.0, Vec2::new(12.0 + a_len, -a_len)).unwrap();
            assert_abs_diff_eq!(a.x, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
            assert_abs_diff_eq!(a.y, -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        }
        assert!(reflection_vector(1.0, Vec2::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn delta_examples() {
        let d = projection_delta(TX, ReflectorPose::unrotated(25.0), RX).unwrap();
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-9);
        let d = projection_delta(TX, ReflectorPose::unrotated(0.0), RX).unwrap();
        assert_abs_diff_eq!(d, 100.0 / 100f64.hypot(150.0), epsilon = 1e-12);
        assert_abs_diff_eq!(d, 0.5547, epsilon = 1e-4);
        // u(ω) orthogonal to the deflection vector.
        let g = PathGeometry::new(TX, 60.0, RX).unwrap();
        let b = g.deflection();
        let omega = (-b.x / b.y).atan();
        assert_abs_diff_eq!(g.delta(omega), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn eta_examples() {
        for h in [1.0, 20.0, 500.0] {
            let e = eta_factor(TX, ReflectorPose::unrotated(7.0), Vec2::new(7.0, -h)).unwrap();
            assert_abs_diff_eq!(e, 1.0, epsilon = 1e-15);
        }
        let e = eta_factor(TX, ReflectorPose::unrotated(25.0), RX).unwrap();
        assert_abs_diff_eq!(e, 0.8, epsilon = 1e-9);
        // a_r parallel to u(ω): grazing.
        let g = PathGeometry::new(TX, 25.0, RX).unwrap();
        let omega = g.a_r.y.atan2(g.a_r.x);
        assert_abs_diff_eq!(g.eta(omega), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn same_side_examples() {
        assert!(same_side(TX, ReflectorPose::unrotated(25.0), RX));
        assert!(!same_side(TX, ReflectorPose::unrotated(50.0), Vec2::new(100.0, 150.0)));
        // n ⟂ a_r: the product is exactly zero and the strict test fails.
        assert!(!same_side(TX, ReflectorPose::unrotated(0.0), Vec2::new(10.0, 0.0)));
        let on_axis = PathGeometry::new(Vec2::new(-5.0, -5.0), 0.0, Vec2::new(5.0, -5.0)).unwrap();
        assert!(!on_axis.same_side(FRAC_PI_2));
    }

    #[test]
    fn angle_conventions() {
        let g = PathGeometry::new(TX, 25.0, RX).unwrap();
        assert_abs_diff_eq!(g.theta_t().sin(), 25.0 / g.d_t, epsilon = 1e-15);
        assert_abs_diff_eq!(g.theta_r().sin(), 75.0 / g.d_r, epsilon = 1e-15);
        assert_abs_diff_eq!(g.theta_t(), g.theta_r(), epsilon = 1e-12);
    }

    #[test]
    fn area_corners_and_grid() {
        let area = TargetArea::new(Vec2::new(100.0, -150.0), 100.0, 50.0).unwrap();
        assert_eq!(area.upper_left(), Vec2::new(50.0, -125.0));
        assert_eq!(area.lower_left(), Vec2::new(50.0, -175.0));
        assert_eq!(area.upper_right(), Vec2::new(150.0, -125.0));
        assert_eq!(area.lower_right(), Vec2::new(150.0, -175.0));
        let g = area.grid(1.0).unwrap();
        assert_eq!(g.len(), 101 * 51);
        assert_eq!(g.point_at(0), area.lower_left());
        assert_eq!(g.point_at(1), Vec2::new(51.0, -175.0));
        assert_eq!(g.point_at(g.len() - 1), area.upper_right());
        let g = area.grid(0.3).unwrap();
        assert_eq!(g.len(), (333 + 1) * (166 + 1));
        for c in area.corners() {
            assert!(g.points().any(|p| p == c));
            assert!(g.boundary_points().contains(&c));
        }
        assert_eq!(TargetArea::point(RX).grid(1.0).unwrap().len(), 1);
        assert!(area.grid(0.0).is_err());
        assert!(TargetArea::new(RX, -1.0, 2.0).is_err());
    }

    #[test]
    fn dims_validation() {
        let d = ReflectorDims::from_wavelengths(10.0, 5.0, 0.125).unwrap();
        assert_abs_diff_eq!(d.l1, 1.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.l1_bar(), 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.main_lobe_half_width(), 0.05, epsilon = 1e-15);
        assert!(ReflectorDims::new(0.0, 1.0, 1.0).is_err());
        assert!(ReflectorDims::new(1.0, 1.0, f64::NAN).is_err());
    }
}
