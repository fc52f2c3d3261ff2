use thiserror::Error;

use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QhError {
    #[error("curve passes within boundary cutoff at ({}, {})", .0.x, .0.y)]
    CurveTouchesBoundary(Point),

    #[error("integrand is not finite at ({}, {})", .0.x, .0.y)]
    NonFiniteIntegrand(Point),

    #[error("arclength {t} outside [0, {length}]")]
    OutOfRange { t: f64, length: f64 },

    #[error("point ({}, {}) coincides with a puncture", .0.x, .0.y)]
    AtPuncture(Point),

    #[error("point ({}, {}) is not on the perpendicular bisector (offset {offset:e})", .point.x, .point.y)]
    NotOnBisector { point: Point, offset: f64 },

    #[error("point ({}, {}) is outside the domain", .0.x, .0.y)]
    OutsideDomain(Point),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("depth {depth} exceeds the limit of {max}")]
    DepthTooLarge { depth: usize, max: usize },

    #[error("tolerance {tol:e} needs more than {max_depth} construction generations")]
    TolUnreachable { tol: f64, max_depth: usize },

    #[error("root is not bracketed on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("curve pieces are not continuous at piece {index} (gap {gap:e})")]
    Discontinuous { index: usize, gap: f64 },

    #[error("no path between the query points in the metric graph")]
    Disconnected,
}

pub type Result<T> = std::result::Result<T, QhError>;
