//! Exact quasihyperbolic quantities in once- and twice-punctured planes.
//!
//! These serve as reference values for the numeric machinery in
//! [`crate::quadrature`] and [`crate::qh_metric`].

use crate::domain::DomainOracle;
use crate::error::{QhError, Result};
use crate::geometry::Point;

const DEFAULT_EXTENT: f64 = 20.0;

/// Allowed offset `| |x-a| - |x-b| |` for a point on the perpendicular bisector.
pub const BISECTOR_TOL: f64 = 1e-12;

/// The plane with one point removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PuncturedPlane {
    pub puncture: Point,
    /// Search radius reported to graph-based solvers.
    pub extent: f64,
}

impl PuncturedPlane {
    pub fn new(puncture: Point) -> Self {
        PuncturedPlane {
            puncture,
            extent: DEFAULT_EXTENT,
        }
    }

    pub fn with_extent(mut self, extent: f64) -> Self {
        self.extent = extent;
        self
    }

    /// Exact distance `sqrt(θ² + log²(|x-p| / |y-p|))`, θ the angle at the puncture.
    pub fn qh_distance(&self, x: Point, y: Point) -> Result<f64> {
        let u = x - self.puncture;
        let v = y - self.puncture;
        let (ru, rv) = (u.norm(), v.norm());
        if ru == 0.0 {
            return Err(QhError::AtPuncture(x));
        }
        if rv == 0.0 {
            return Err(QhError::AtPuncture(y));
        }
        let (nu, nv) = (u * (1.0 / ru), v * (1.0 / rv));
        let theta = nu.cross(nv).abs().atan2(nu.dot(nv)).clamp(0.0, std::f64::consts::PI);
        let log_ratio = (ru / rv).ln();
        Ok(theta.hypot(log_ratio))
    }
}

impl DomainOracle for PuncturedPlane {
    fn dist_to_boundary(&self, p: Point) -> f64 {
        p.dist(self.puncture)
    }
    fn contains(&self, p: Point) -> bool {
        p != self.puncture
    }
    fn bounding_radius(&self) -> f64 {
        self.extent
    }
    fn bounding_center(&self) -> Point {
        self.puncture
    }
}

/// Free-function form of [`PuncturedPlane::qh_distance`].
pub fn qh_distance_punctured(g: &PuncturedPlane, x: Point, y: Point) -> Result<f64> {
    g.qh_distance(x, y)
}

/// The plane with two distinct points removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwicePuncturedPlane {
    a: Point,
    b: Point,
    pub extent: f64,
}

impl TwicePuncturedPlane {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(QhError::InvalidParam("punctures must be distinct".into()));
        }
        Ok(TwicePuncturedPlane {
            a,
            b,
            extent: DEFAULT_EXTENT.max(4.0 * a.dist(b)),
        })
    }

    pub fn a(&self) -> Point {
        self.a
    }

    pub fn b(&self) -> Point {
        self.b
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }

    /// Quasihyperbolic length of the segment from `x` to the midpoint of the
    /// punctures, for `x` on their perpendicular bisector:
    /// `log(2(|x-c| + sqrt(|a-b|²/4 + |x-c|²))) - log|a-b|`.
    pub fn segment_length_to_midpoint(&self, x: Point) -> Result<f64> {
        let offset = (x.dist(self.a) - x.dist(self.b)).abs();
        if offset > BISECTOR_TOL {
            return Err(QhError::NotOnBisector { point: x, offset });
        }
        let sep = self.a.dist(self.b);
        let h = x.dist(self.midpoint());
        Ok((2.0 * (h + (0.25 * sep * sep + h * h).sqrt())).ln() - sep.ln())
    }
}

impl DomainOracle for TwicePuncturedPlane {
    fn dist_to_boundary(&self, p: Point) -> f64 {
        p.dist(self.a).min(p.dist(self.b))
    }
    fn contains(&self, p: Point) -> bool {
        p != self.a && p != self.b
    }
    fn bounding_radius(&self) -> f64 {
        self.extent
    }
    fn bounding_center(&self) -> Point {
        self.midpoint()
    }
}

/// Free-function form of [`TwicePuncturedPlane::segment_length_to_midpoint`].
pub fn segment_twice_punctured(g: &TwicePuncturedPlane, x: Point) -> Result<f64> {
    g.segment_length_to_midpoint(x)
}
