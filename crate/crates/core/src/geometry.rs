//! Planar points and piecewise curves made of segments and circular arcs.
//!
//! Curves are always parametrized by arclength: `point_at(t)` moves at unit
//! speed along the pieces in order.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{QhError, Result};

/// Maximum gap tolerated between consecutive pieces of a [`Curve`].
pub const CONTINUITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        Point::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    pub fn midpoint(self, other: Point) -> Point {
        self.lerp(other, 0.5)
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn dist_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    Segment {
        from: Point,
        to: Point,
    },
    /// Circular arc; `angle_end < angle_start` runs clockwise.
    Arc {
        center: Point,
        radius: f64,
        angle_start: f64,
        angle_end: f64,
    },
}

impl Piece {
    pub fn length(&self) -> f64 {
        match *self {
            Piece::Segment { from, to } => from.dist(to),
            Piece::Arc {
                radius,
                angle_start,
                angle_end,
                ..
            } => radius * (angle_end - angle_start).abs(),
        }
    }

    pub fn start(&self) -> Point {
        match *self {
            Piece::Segment { from, .. } => from,
            Piece::Arc {
                center,
                radius,
                angle_start,
                ..
            } => center + Point::from_polar(radius, angle_start),
        }
    }

    pub fn end(&self) -> Point {
        match *self {
            Piece::Segment { to, .. } => to,
            Piece::Arc {
                center,
                radius,
                angle_end,
                ..
            } => center + Point::from_polar(radius, angle_end),
        }
    }

    /// Point at arclength `s` from the start of this piece; `s` is clamped to the piece.
    pub fn point_at(&self, s: f64) -> Point {
        let len = self.length();
        if len == 0.0 {
            return self.start();
        }
        let frac = (s / len).clamp(0.0, 1.0);
        match *self {
            Piece::Segment { from, to } => from.lerp(to, frac),
            Piece::Arc {
                center,
                radius,
                angle_start,
                angle_end,
            } => {
                let angle = angle_start + frac * (angle_end - angle_start);
                center + Point::from_polar(radius, angle)
            }
        }
    }

    pub fn reversed(&self) -> Piece {
        match *self {
            Piece::Segment { from, to } => Piece::Segment { from: to, to: from },
            Piece::Arc {
                center,
                radius,
                angle_start,
                angle_end,
            } => Piece::Arc {
                center,
                radius,
                angle_start: angle_end,
                angle_end: angle_start,
            },
        }
    }
}

/// A continuous chain of pieces with a fixed start point.
///
/// A curve with no pieces is the constant curve at `start`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    start: Point,
    pieces: Vec<Piece>,
}

impl Curve {
    /// Zero-length curve sitting at `p`.
    pub fn point(p: Point) -> Self {
        Curve {
            start: p,
            pieces: Vec::new(),
        }
    }

    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(QhError::InvalidParam(
                "a curve needs at least one piece; use Curve::point for a constant curve".into(),
            ));
        };
        for (i, pair) in pieces.windows(2).enumerate() {
            let gap = pair[0].end().dist(pair[1].start());
            if gap > CONTINUITY_TOL {
                return Err(QhError::Discontinuous { index: i + 1, gap });
            }
        }
        Ok(Curve {
            start: first.start(),
            pieces,
        })
    }

    /// Straight segments through `points` in order.
    pub fn polyline(points: &[Point]) -> Result<Self> {
        match points {
            [] => Err(QhError::InvalidParam("empty polyline".into())),
            [p] => Ok(Curve::point(*p)),
            _ => Curve::new(
                points
                    .windows(2)
                    .map(|w| Piece::Segment {
                        from: w[0],
                        to: w[1],
                    })
                    .collect(),
            ),
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn start(&self) -> Point {
        self.start
    }

    pub fn end(&self) -> Point {
        self.pieces.last().map_or(self.start, Piece::end)
    }

    pub fn total_length(&self) -> f64 {
        self.pieces.iter().map(Piece::length).sum()
    }

    /// Arclength positions of the piece boundaries, including 0 and the total length.
    pub fn junctions(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        let mut acc = 0.0;
        out.push(acc);
        for piece in &self.pieces {
            acc += piece.length();
            out.push(acc);
        }
        out
    }

    pub fn point_at(&self, t: f64) -> Result<Point> {
        let length = self.total_length();
        let slack = 1e-12 * length.max(1.0);
        if !(t >= -slack && t <= length + slack) {
            return Err(QhError::OutOfRange { t, length });
        }
        let mut remaining = t.max(0.0);
        for piece in &self.pieces {
            let len = piece.length();
            if remaining <= len {
                return Ok(piece.point_at(remaining));
            }
            remaining -= len;
        }
        Ok(self.end())
    }

    pub fn reversed(&self) -> Curve {
        Curve {
            start: self.end(),
            pieces: self.pieces.iter().rev().map(Piece::reversed).collect(),
        }
    }

    pub fn concat(&self, other: &Curve) -> Result<Curve> {
        let gap = self.end().dist(other.start());
        if gap > CONTINUITY_TOL {
            return Err(QhError::Discontinuous {
                index: self.pieces.len(),
                gap,
            });
        }
        let mut pieces = self.pieces.clone();
        pieces.extend_from_slice(&other.pieces);
        Ok(Curve {
            start: self.start,
            pieces,
        })
    }
}

/// Incremental construction of a [`Curve`] from its current end point.
#[derive(Debug, Clone)]
pub struct CurveBuilder {
    start: Point,
    cursor: Point,
    pieces: Vec<Piece>,
}

impl CurveBuilder {
    pub fn new(start: Point) -> Self {
        CurveBuilder {
            start,
            cursor: start,
            pieces: Vec::new(),
        }
    }

    pub fn cursor(&self) -> Point {
        self.cursor
    }

    /// Appends a segment to `p`; zero-length moves are skipped.
    pub fn line_to(mut self, p: Point) -> Self {
        if p != self.cursor {
            self.pieces.push(Piece::Segment {
                from: self.cursor,
                to: p,
            });
            self.cursor = p;
        }
        self
    }

    /// Appends an arc around `center` sweeping `sweep` radians (positive is counterclockwise).
    pub fn arc_around(mut self, center: Point, sweep: f64) -> Self {
        let offset = self.cursor - center;
        let radius = offset.norm();
        if radius == 0.0 || sweep == 0.0 {
            return self;
        }
        let angle_start = offset.angle();
        let angle_end = angle_start + sweep;
        let piece = Piece::Arc {
            center,
            radius,
            angle_start,
            angle_end,
        };
        self.cursor = piece.end();
        self.pieces.push(piece);
        self
    }

    /// Arc around `center` that ends on the ray towards `target`, taking the shorter way round.
    pub fn arc_towards(self, center: Point, target: Point) -> Self {
        let from = (self.cursor - center).angle();
        let to = (target - center).angle();
        let mut sweep = to - from;
        while sweep > PI {
            sweep -= 2.0 * PI;
        }
        while sweep < -PI {
            sweep += 2.0 * PI;
        }
        self.arc_around(center, sweep)
    }

    pub fn push(mut self, piece: Piece) -> Self {
        self.cursor = piece.end();
        self.pieces.push(piece);
        self
    }

    pub fn build(self) -> Curve {
        Curve {
            start: self.start,
            pieces: self.pieces,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_at_endpoints_and_linear() {
        let c = Curve::polyline(&[Point::new(0.0, 0.0), Point::new(2.0, 0.0)]).unwrap();
        assert_eq!(c.point_at(0.0).unwrap(), Point::new(0.0, 0.0));
        assert_eq!(c.point_at(2.0).unwrap(), Point::new(2.0, 0.0));
        assert_eq!(c.point_at(0.5).unwrap(), Point::new(0.5, 0.0));
    }

    #[test]
    fn point_at_out_of_range() {
        let c = Curve::polyline(&[Point::new(0.0, 0.0), Point::new(1.0, 1.0)]).unwrap();
        assert!(matches!(c.point_at(-0.1), Err(QhError::OutOfRange { .. })));
        assert!(matches!(c.point_at(1.5), Err(QhError::OutOfRange { .. })));
    }

    #[test]
    fn arc_length_and_unit_speed() {
        let c = CurveBuilder::new(Point::new(1.0, 0.0))
            .arc_around(Point::ORIGIN, PI / 2.0)
            .line_to(Point::new(-2.0, 1.0))
            .build();
        assert!((c.total_length() - (PI / 2.0 + 2.0)).abs() < 1e-15);
        let n = 1000;
        let h = c.total_length() / n as f64;
        for i in 0..n {
            let p = c.point_at(i as f64 * h).unwrap();
            let q = c.point_at((i + 1) as f64 * h).unwrap();
            // chord never exceeds arclength and is close to it for small steps
            let chord = p.dist(q);
            assert!(chord <= h + 1e-12 && chord > h * (1.0 - 1e-5));
        }
        assert!(c.end().dist(Point::new(-2.0, 1.0)) < 1e-15);
    }

    #[test]
    fn discontinuous_pieces_rejected() {
        let pieces = vec![
            Piece::Segment {
                from: Point::new(0.0, 0.0),
                to: Point::new(1.0, 0.0),
            },
            Piece::Segment {
                from: Point::new(1.0, 0.1),
                to: Point::new(2.0, 0.0),
            },
        ];
        assert!(matches!(
            Curve::new(pieces),
            Err(QhError::Discontinuous { index: 1, .. })
        ));
    }

    #[test]
    fn reversal_swaps_endpoints() {
        let c = CurveBuilder::new(Point::new(2.0, 0.0))
            .arc_towards(Point::ORIGIN, Point::new(0.0, 1.0))
            .line_to(Point::new(0.0, 0.5))
            .build();
        let r = c.reversed();
        assert_eq!(r.start(), c.end());
        assert!(r.end().dist(c.start()) < 1e-15);
        assert!((r.total_length() - c.total_length()).abs() < 1e-15);
        let t = 0.3 * c.total_length();
        let p = c.point_at(t).unwrap();
        let q = r.point_at(c.total_length() - t).unwrap();
        assert!(p.dist(q) < 1e-12);
    }

    #[test]
    fn constant_curve() {
        let c = Curve::point(Point::new(0.3, 0.4));
        assert_eq!(c.total_length(), 0.0);
        assert_eq!(c.point_at(0.0).unwrap(), Point::new(0.3, 0.4));
        assert_eq!(c.end(), c.start());
    }

    #[test]
    fn segment_distance() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        assert_eq!(dist_to_segment(Point::new(0.5, 2.0), a, b), 2.0);
        assert_eq!(dist_to_segment(Point::new(-3.0, 4.0), a, b), 5.0);
    }
}
