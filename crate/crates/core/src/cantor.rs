//! The Cantor-dust complement `Ω_α = B(0, 2) \ C_α`.
//!
//! `C_α = K_α × K_α`, where `K_α` is the middle-α Cantor set on `[-1/2, 1/2]`.
//! Squares of generation `n` have side `((1-α)/2)^n`; the upper-right chain of
//! squares has centers `x_n = ((1 - s_n)/2, (1 - s_n)/2)` with `s_n` that side.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::domain::DomainOracle;
use crate::error::{QhError, Result};
use crate::geometry::{Curve, CurveBuilder, Piece, Point};

/// Radius of the ball the dust is removed from.
pub const BALL_RADIUS: f64 = 2.0;

const MAX_ADDRESS_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorDomain {
    alpha: f64,
}

impl CantorDomain {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(QhError::InvalidParam(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(CantorDomain { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Side ratio between consecutive generations, `(1-α)/2`.
    pub fn ratio(&self) -> f64 {
        0.5 * (1.0 - self.alpha)
    }

    /// Side length of a generation-`n` square.
    pub fn side(&self, n: usize) -> f64 {
        self.ratio().powi(n as i32)
    }

    fn dust_distance(&self, p: Point) -> f64 {
        dist_cantor_1d(self.alpha, p.x).hypot(dist_cantor_1d(self.alpha, p.y))
    }

    fn raw_distance(&self, p: Point) -> f64 {
        self.dust_distance(p).min((BALL_RADIUS - p.norm()).abs())
    }

    /// Distance from `p` to `∂Ω_α = C_α ∪ {|z| = 2}`.
    pub fn dist_to_boundary(&self, p: Point) -> Result<f64> {
        if !self.contains(p) {
            return Err(QhError::OutsideDomain(p));
        }
        Ok(self.raw_distance(p))
    }

    /// Center of the generation-`n` square in the upper-right chain.
    pub fn center_point(&self, n: usize) -> Point {
        let c = 0.5 * (1.0 - self.side(n));
        Point::new(c, c)
    }

    /// `log((2 + sqrt(4 + (1-α)²)) / (1-α))`: the cost of crossing into the next generation.
    pub fn crossing_term(&self) -> f64 {
        cantor_crossing_term(self.alpha)
    }

    /// The explicit path from `x_0` to `x_n` with its pieces labelled.
    ///
    /// Inside each intermediate square it runs up the gap midline (`R`), turns
    /// a quarter circle around the nearest dust corner (`Q`), runs along the
    /// horizontal midline (`S`) and climbs into the next square (`P`).
    pub fn qhbc_upper_path_parts(&self, n: usize) -> Result<Vec<(PathPart, Piece)>> {
        if n == 0 {
            return Err(QhError::InvalidParam("path generation needs n >= 1".into()));
        }
        let alpha = self.alpha;
        let mut parts = Vec::new();
        let mut cursor = Point::ORIGIN;
        let seg = |parts: &mut Vec<(PathPart, Piece)>, cursor: &mut Point, kind, to: Point| {
            parts.push((kind, Piece::Segment { from: *cursor, to }));
            *cursor = to;
        };

        let x1 = self.center_point(1);
        seg(&mut parts, &mut cursor, PathPart::Start, Point::new(x1.x, 0.0));
        seg(&mut parts, &mut cursor, PathPart::Climb(0), Point::new(x1.x, 0.5 * alpha));

        for l in 1..n {
            let c = self.center_point(l);
            let s = self.side(l);
            let half_gap = 0.5 * alpha * s;
            let next = self.center_point(l + 1);

            seg(&mut parts, &mut cursor, PathPart::Rise(l), Point::new(c.x, c.y - half_gap));
            let corner = Point::new(c.x + half_gap, c.y - half_gap);
            let arc = Piece::Arc {
                center: corner,
                radius: half_gap,
                angle_start: PI,
                angle_end: FRAC_PI_2,
            };
            parts.push((PathPart::Turn(l), arc));
            cursor = arc.end();
            seg(&mut parts, &mut cursor, PathPart::Shift(l), Point::new(next.x, c.y));
            seg(&mut parts, &mut cursor, PathPart::Climb(l), Point::new(next.x, c.y + half_gap));
        }
        seg(&mut parts, &mut cursor, PathPart::Finish, self.center_point(n));
        Ok(parts)
    }

    pub fn qhbc_upper_path(&self, n: usize) -> Result<Curve> {
        let parts = self.qhbc_upper_path_parts(n)?;
        Curve::new(parts.into_iter().map(|(_, piece)| piece).collect())
    }

    /// Deepest square containing `x ∈ Q_0`, or `None` if `x` lies outside `Q_0`.
    pub fn locate(&self, x: Point) -> Result<Option<SquareAddress>> {
        if x.x.abs() > 0.5 || x.y.abs() > 0.5 {
            return Ok(None);
        }
        let mut address = SquareAddress::root();
        let mut center = Point::ORIGIN;
        let mut side = 1.0;
        loop {
            let half_gap = 0.5 * self.alpha * side;
            let off = x - center;
            if off.x.abs() < half_gap || off.y.abs() < half_gap {
                return Ok(Some(address));
            }
            if address.depth() >= MAX_ADDRESS_DEPTH {
                return Err(QhError::OutsideDomain(x));
            }
            let sx = if off.x < 0.0 { -1 } else { 1 };
            let sy = if off.y < 0.0 { -1 } else { 1 };
            let step = 0.25 * side * (1.0 + self.alpha);
            center = center + Point::new(sx as f64 * step, sy as f64 * step);
            side *= self.ratio();
            address.corner_signs.push((sx, sy));
        }
    }

    /// Curve from `x` to the John center used in the John-constant analysis.
    ///
    /// Inside `Q_0` it is the segment to the center of the deepest square
    /// containing `x` followed by the axis-parallel staircase through the
    /// chain of centers down to the origin. For the center `5i/4` the
    /// staircase stops at the smallest enclosing square that touches the top
    /// of `Q_0` and leaves upwards through its vertical gap; passing through
    /// the central top gap instead would only certify `sqrt(9 + α²)/α`.
    /// Outside `Q_0` and for the center
    /// `0`, it reaches the top gap of `Q_0` around the dust corner `(α/2, 1/2)`
    /// (up to a symmetry of the square); for the center `5i/4` it goes radially
    /// to `|z| = 5/4` and follows that circle.
    pub fn john_curve(&self, x: Point, center: JohnCenter) -> Result<Curve> {
        if !self.contains(x) {
            return Err(QhError::OutsideDomain(x));
        }
        let target = center.point();
        match self.locate(x)? {
            Some(address) => {
                let centers: Vec<Point> = (0..=address.depth())
                    .map(|k| address.prefix(k).center(self.alpha))
                    .collect();
                // squares whose top edge lies on the top of Q_0
                let exit_level = match center {
                    JohnCenter::Origin => 0,
                    JohnCenter::Shifted => address.corner_signs.iter().take_while(|s| s.1 > 0).count(),
                };
                let mut b = CurveBuilder::new(x).line_to(centers[address.depth()]);
                for k in (exit_level + 1..centers.len()).rev() {
                    b = b
                        .line_to(Point::new(centers[k - 1].x, centers[k].y))
                        .line_to(centers[k - 1]);
                }
                if exit_level > 0 {
                    b = b.line_to(Point::new(centers[exit_level].x, target.y));
                }
                Ok(b.line_to(target).build())
            }
            None => match center {
                JohnCenter::Shifted => {
                    let radius = target.norm();
                    let on_circle = x * (radius / x.norm());
                    Ok(CurveBuilder::new(x)
                        .line_to(on_circle)
                        .arc_towards(Point::ORIGIN, target)
                        .build())
                }
                JohnCenter::Origin => {
                    let sym = SquareSymmetry::canonicalizing(x);
                    let xc = sym.inverse(x);
                    let corner = Point::new(0.5 * self.alpha, 0.5);
                    let entry = Point::new(0.5 * self.alpha, 0.5 * (1.0 + self.alpha));
                    let canonical = CurveBuilder::new(xc)
                        .line_to(entry)
                        .arc_around(corner, FRAC_PI_2)
                        .line_to(Point::ORIGIN)
                        .build();
                    Ok(sym.apply_curve(&canonical))
                }
            },
        }
    }

    /// The point `(0, 2 - 1/n)` and the straight segment from it to the origin.
    pub fn john_negative_witness(&self, n: usize) -> Result<(Point, Curve)> {
        if n == 0 {
            return Err(QhError::InvalidParam("witness index must be >= 1".into()));
        }
        let x = Point::new(0.0, 2.0 - 1.0 / n as f64);
        Ok((x, Curve::polyline(&[x, Point::ORIGIN])?))
    }

    /// Points and John curves used to check the John constant: chain centers
    /// `x_1..x_max_n`, plus points approaching the outer circle along the
    /// diagonal and the vertical axis.
    pub fn john_family(&self, center: JohnCenter, max_n: usize) -> Result<Vec<(Point, Curve)>> {
        let mut points: Vec<Point> = (1..=max_n).map(|n| self.center_point(n)).collect();
        for m in 1..=max_n {
            let r = BALL_RADIUS - 1.0 / (m as f64 + 1.0);
            points.push(Point::new(r / 2f64.sqrt(), r / 2f64.sqrt()));
            points.push(Point::new(0.0, r));
        }
        points
            .into_iter()
            .map(|p| Ok((p, self.john_curve(p, center)?)))
            .collect()
    }
}

impl DomainOracle for CantorDomain {
    fn dist_to_boundary(&self, p: Point) -> f64 {
        self.raw_distance(p)
    }

    fn contains(&self, p: Point) -> bool {
        p.norm() < BALL_RADIUS && self.dust_distance(p) > 0.0
    }

    fn bounding_radius(&self) -> f64 {
        BALL_RADIUS
    }
}

/// Distance from `x` to the middle-α Cantor set on `[-1/2, 1/2]`.
pub fn dist_cantor_1d(alpha: f64, x: f64) -> f64 {
    let ratio = 0.5 * (1.0 - alpha);
    let floor = 1e-17 * x.abs().max(1.0);
    let mut center = 0.0;
    let mut len = 1.0;
    loop {
        let off = x - center;
        let half = 0.5 * len;
        if off.abs() >= half {
            return off.abs() - half;
        }
        let half_gap = 0.5 * alpha * len;
        if off.abs() < half_gap {
            return half_gap - off.abs();
        }
        if len < floor {
            return 0.0;
        }
        let sub = len * ratio;
        center += off.signum() * (half_gap + 0.5 * sub);
        len = sub;
    }
}

/// Which of the two John centers of the analysis is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JohnCenter {
    /// `x_0 = 0`.
    Origin,
    /// `x_0 = 5i/4`, used for small α.
    Shifted,
}

impl JohnCenter {
    pub fn point(self) -> Point {
        match self {
            JohnCenter::Origin => Point::ORIGIN,
            JohnCenter::Shifted => Point::new(0.0, 1.25),
        }
    }
}

/// Labels for the pieces of the explicit upper-bound path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathPart {
    /// From `x_0` along the horizontal midline of `Q_0`.
    Start,
    /// Perpendicular approach from a gap midline into the next square.
    Climb(usize),
    /// Quarter circle of constant boundary distance around a dust corner.
    Turn(usize),
    /// Up the vertical gap midline of the current square.
    Rise(usize),
    /// Along the horizontal gap midline of the current square.
    Shift(usize),
    /// Into the center `x_n` of the last square.
    Finish,
}

/// A square of the construction, addressed by the quadrant chosen at each generation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SquareAddress {
    pub corner_signs: Vec<(i8, i8)>,
}

impl SquareAddress {
    pub fn root() -> Self {
        SquareAddress::default()
    }

    /// The upper-right chain down to generation `n`.
    pub fn upper_right(n: usize) -> Self {
        SquareAddress {
            corner_signs: vec![(1, 1); n],
        }
    }

    pub fn depth(&self) -> usize {
        self.corner_signs.len()
    }

    pub fn prefix(&self, depth: usize) -> SquareAddress {
        SquareAddress {
            corner_signs: self.corner_signs[..depth].to_vec(),
        }
    }

    pub fn side(&self, alpha: f64) -> f64 {
        (0.5 * (1.0 - alpha)).powi(self.depth() as i32)
    }

    pub fn center(&self, alpha: f64) -> Point {
        let ratio = 0.5 * (1.0 - alpha);
        let mut side = 1.0;
        let mut c = Point::ORIGIN;
        for &(sx, sy) in &self.corner_signs {
            let step = 0.25 * side * (1.0 + alpha);
            c = c + Point::new(sx as f64 * step, sy as f64 * step);
            side *= ratio;
        }
        c
    }
}

/// Element of the symmetry group of the square, as `p ↦ diag(sx, sy) · swap?(p)`.
#[derive(Debug, Clone, Copy)]
struct SquareSymmetry {
    swap: bool,
    sx: f64,
    sy: f64,
}

impl SquareSymmetry {
    /// The symmetry whose inverse maps `x` into the sector `0 ≤ x ≤ y`.
    fn canonicalizing(x: Point) -> Self {
        let sx = if x.x < 0.0 { -1.0 } else { 1.0 };
        let sy = if x.y < 0.0 { -1.0 } else { 1.0 };
        SquareSymmetry {
            swap: x.x.abs() > x.y.abs(),
            sx,
            sy,
        }
    }

    fn apply(&self, p: Point) -> Point {
        let q = if self.swap { Point::new(p.y, p.x) } else { p };
        Point::new(self.sx * q.x, self.sy * q.y)
    }

    fn inverse(&self, p: Point) -> Point {
        let q = Point::new(self.sx * p.x, self.sy * p.y);
        if self.swap {
            Point::new(q.y, q.x)
        } else {
            q
        }
    }

    fn apply_angle(&self, angle: f64) -> f64 {
        let mut a = if self.swap { FRAC_PI_2 - angle } else { angle };
        if self.sx < 0.0 {
            a = PI - a;
        }
        if self.sy < 0.0 {
            a = -a;
        }
        a
    }

    fn apply_curve(&self, curve: &Curve) -> Curve {
        let pieces: Vec<Piece> = curve
            .pieces()
            .iter()
            .map(|piece| match *piece {
                Piece::Segment { from, to } => Piece::Segment {
                    from: self.apply(from),
                    to: self.apply(to),
                },
                Piece::Arc {
                    center,
                    radius,
                    angle_start,
                    angle_end,
                } => Piece::Arc {
                    center: self.apply(center),
                    radius,
                    angle_start: self.apply_angle(angle_start),
                    angle_end: self.apply_angle(angle_end),
                },
            })
            .collect();
        let mut b = CurveBuilder::new(self.apply(curve.start()));
        for piece in pieces {
            b = b.push(piece);
        }
        b.build()
    }
}

pub(crate) fn cantor_crossing_term(alpha: f64) -> f64 {
    let q = 1.0 - alpha;
    ((2.0 + (4.0 + q * q).sqrt()) / q).ln()
}

/// Per-generation slope of the upper path estimate.
pub fn cantor_upper_slope(alpha: f64) -> f64 {
    cantor_crossing_term(alpha) + 1.5 / alpha + FRAC_PI_2 - 1.5
}

/// Per-generation slope of the lower distance estimate.
pub fn cantor_lower_slope(alpha: f64) -> f64 {
    cantor_crossing_term(alpha) + (1.0 - alpha) / alpha + FRAC_PI_2
}

/// Upper estimate `2 - π/2 + n·A₁` for `k(x_0, x_n)`.
pub fn cantor_path_upper_bound(alpha: f64, n: usize) -> f64 {
    2.0 - FRAC_PI_2 + n as f64 * cantor_upper_slope(alpha)
}

/// Lower estimate `-π/2 + n·A₂` for `k(x_0, x_n)`.
pub fn cantor_path_lower_bound(alpha: f64, n: usize) -> f64 {
    -FRAC_PI_2 + n as f64 * cantor_lower_slope(alpha)
}

/// Exponent up to which the quasihyperbolic boundary condition holds.
pub fn beta1_cantor(alpha: f64) -> f64 {
    (2.0 / (1.0 - alpha)).ln() / cantor_upper_slope(alpha)
}

/// Exponent from which the quasihyperbolic boundary condition fails.
pub fn beta2_cantor(alpha: f64) -> f64 {
    (2.0 / (1.0 - alpha)).ln() / cantor_lower_slope(alpha)
}

/// Hausdorff (= Minkowski) dimension `log 4 / log(2/(1-α))` of the dust.
pub fn dimension_cantor(alpha: f64) -> f64 {
    4f64.ln() / (2.0 / (1.0 - alpha)).ln()
}

/// Dimension of `∂Ω_α`: the circle contributes dimension 1.
pub fn boundary_dimension_cantor(alpha: f64) -> f64 {
    dimension_cantor(alpha).max(1.0)
}
