use serde::Serialize;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// One target occurrence that could not be matched to a realized angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnmatchedTarget {
    pub occurrence: usize,
    pub radians: f64,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("angle {0} is not strictly between 0 and pi")]
    InvalidAngle(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("degenerate ray at point {apex} towards point {towards}")]
    DegenerateRay { apex: usize, towards: usize },
    #[error("{} target occurrence(s) unmatched", unmatched.len())]
    UnmatchedTargets { unmatched: Vec<UnmatchedTarget> },
    #[error("angles {0} and {1} are not distinct")]
    NotDistinct(f64, f64),
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
    #[error("new ray angle {requested} is not below the maximum angle {max}")]
    MaxAngleViolated { requested: f64, max: f64 },
    #[error("root bracketing failed: {0}")]
    BracketingFailed(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("convex position check failed after construction")]
    ConvexityFailed,
    #[error("arc clusters overlap: spacing {spacing} with t = {t}")]
    ArcOverlap { spacing: f64, t: usize },
    #[error("no hull edge of a usable for gluing without shared rays")]
    SharedRayCollision,
    #[error("angles are not strictly decreasing")]
    NotSorted,
    #[error("newton iteration diverged (residual {residual:e} after {iterations} iterations)")]
    NewtonDiverged { residual: f64, iterations: usize },
    #[error("cover construction failed: radius underflow near {center}")]
    CoverFailed { center: f64 },
    #[error("dimension {0} unsupported; only planar configurations render (try --project-first-two)")]
    DimensionUnsupported(usize),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidAngle(_) => "InvalidAngle",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Schema(_) => "Schema",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::DegenerateRay { .. } => "DegenerateRay",
            Error::UnmatchedTargets { .. } => "UnmatchedTargets",
            Error::NotDistinct(..) => "NotDistinct",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::MaxAngleViolated { .. } => "MaxAngleViolated",
            Error::BracketingFailed(_) => "BracketingFailed",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::ConvexityFailed => "ConvexityFailed",
            Error::ArcOverlap { .. } => "ArcOverlap",
            Error::SharedRayCollision => "SharedRayCollision",
            Error::NotSorted => "NotSorted",
            Error::NewtonDiverged { .. } => "NewtonDiverged",
            Error::CoverFailed { .. } => "CoverFailed",
            Error::DimensionUnsupported(_) => "DimensionUnsupported",
        }
    }
}
