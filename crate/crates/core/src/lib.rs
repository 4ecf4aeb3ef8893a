//! Placement and rotation planning for passive flat metal reflectors.
//!
//! A transmitter and a set of receivers sit below a straight wall (the
//! x-axis). Reflectors are thin plates mounted on the wall, each described by
//! its position `x` and, for rotatable plates, a tilt `ω`. The crate
//! computes plate radar cross sections and receive power, chooses plate
//! positions and tilts for a single receiver or a rectangular area, and
//! evaluates coverage against benchmark placements.
//!
//! ```
//! use reflector_core::{mr, ReflectorDims, Vec2};
//!
//! let tx = Vec2::new(0.0, -50.0);
//! let rx = Vec2::new(100.0, -150.0);
//! assert_eq!(mr::specular_placement(tx, rx).unwrap(), 25.0);
//! let dims = ReflectorDims::from_wavelengths(10.0, 5.0, 0.125).unwrap();
//! assert!(dims.main_lobe_half_width() > 0.0);
//! ```

// `!(v > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coverage;
pub mod error;
pub mod fr;
pub mod geometry;
pub mod link_budget;
pub mod mr;
pub mod roots;
pub mod search;

pub use error::{ReflectorError, Result};
pub use geometry::{AreaGrid, PathGeometry, PlanarPoint, ReflectorDims, ReflectorPose, TargetArea, Vec2};
pub use link_budget::{receive_power, LinkBudgetConfig, PowerSample};

/// Numerical resolution of the planners, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannerOptions {
    /// Spacing of candidate plate positions in grid searches.
    pub search_step: f64,
    /// Receiver grid spacing used inside the optimizers.
    pub grid_step: f64,
    /// Receiver grid spacing used when reporting coverage.
    pub coverage_step: f64,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        Self { search_step: 0.05, grid_step: 0.5, coverage_step: 1.0 }
    }
}

impl PlannerOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in
            [("search_step", self.search_step), ("grid_step", self.grid_step), ("coverage_step", self.coverage_step)]
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(ReflectorError::InvalidParameter { name, reason: format!("must be positive, got {v}") });
            }
        }
        Ok(())
    }
}
