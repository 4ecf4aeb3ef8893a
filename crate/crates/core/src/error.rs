use thiserror::Error;

/// Errors raised by the geometry primitives and the planners.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReflectorError {
    #[error("coincident points: {0}")]
    CoincidentPoints(&'static str),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("empty search region [{lo}, {hi}]")]
    EmptySearchRegion { lo: f64, hi: f64 },

    #[error("grazing angle: {0}")]
    GrazingAngle(String),

    #[error("non-positive power {0} W")]
    NonPositivePower(f64),

    #[error("reflectors {index} and {next} are {spacing:.4} m apart, at least {required:.4} m required")]
    SpacingInfeasible { index: usize, next: usize, spacing: f64, required: f64 },

    #[error("sequential planner did not converge after {iterations} placements")]
    NonConvergence { iterations: usize },

    #[error("unhandled lobe geometry: {0}")]
    UnhandledGeometry(String),
}

impl ReflectorError {
    /// Stable machine-readable code, used by the CLI when reporting failures.
    pub fn code(&self) -> &'static str {
        match self {
            Self::CoincidentPoints(_) => "coincident-points",
            Self::DegenerateGeometry(_) => "degenerate-geometry",
            Self::InvalidParameter { .. } => "invalid-parameter",
            Self::NoSignChange { .. } => "no-solution",
            Self::EmptySearchRegion { .. } => "empty-search-region",
            Self::GrazingAngle(_) => "grazing-angle",
            Self::NonPositivePower(_) => "non-positive-power",
            Self::SpacingInfeasible { .. } => "spacing-infeasible",
            Self::NonConvergence { .. } => "non-convergence",
            Self::UnhandledGeometry(_) => "unhandled-geometry",
        }
    }
}

pub type Result<T> = std::result::Result<T, ReflectorError>;
