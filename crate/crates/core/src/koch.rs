//! The generalized Koch snowflake `S_a`, `0 < a <= 1/2`.
//!
//! Each boundary segment `[u, v]` is replaced by four: the middle part of
//! relative length `a` is pushed outwards into an equilateral bump. The
//! starting triangle `T_0` has side 1, centroid at the origin, and is
//! positively oriented with its top edge horizontal.
//!
//! Boundary distances are computed lazily: every subdivision vertex stays on
//! the limit curve, and the limit arc over a segment `[u, v]` stays inside the
//! rectangle on the outward side of the segment with height
//! [`KochDomain::height_ratio`]` · |v - u|` (the four sub-pieces map this
//! rectangle into itself). A best-first search over segments therefore
//! brackets the true distance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use crate::domain::DomainOracle;
use crate::error::{QhError, Result};
use crate::geometry::{Curve, CurveBuilder, Point};

/// Deepest explicit boundary polyline that will be materialized.
pub const MAX_POLYLINE_DEPTH: u32 = 12;

/// Default absolute accuracy of the boundary-distance search.
pub const DEFAULT_ORACLE_TOL: f64 = 1e-13;

const MAX_SEARCH_DEPTH: u32 = 64;
const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KochDomain {
    a: f64,
    oracle_tol: f64,
    bounding_radius: f64,
}

/// One triangle of the construction, vertices `p1, p2, p3` counterclockwise.
///
/// The side `p3 -> p1` is the base resting on the parent curve, and the next
/// triangle of the central chain sits on the side `p2 -> p3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub p1: Point,
    pub p2: Point,
    pub p3: Point,
}

impl Triangle {
    pub fn centroid(&self) -> Point {
        (self.p1 + self.p2 + self.p3) * (1.0 / 3.0)
    }

    pub fn base_midpoint(&self) -> Point {
        self.p3.midpoint(self.p1)
    }

    pub fn side(&self) -> f64 {
        self.p1.dist(self.p2)
    }

    /// Closed containment with a tiny tolerance on the edge tests.
    pub fn contains(&self, x: Point) -> bool {
        let eps = 1e-14 * self.side().max(1e-300);
        let e1 = (self.p2 - self.p1).cross(x - self.p1);
        let e2 = (self.p3 - self.p2).cross(x - self.p2);
        let e3 = (self.p1 - self.p3).cross(x - self.p3);
        let scale = self.side();
        e1 >= -eps * scale && e2 >= -eps * scale && e3 >= -eps * scale
    }
}

/// The chain points attached to generation `n` of the central chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainPoints {
    /// Centroid of `T_n`.
    pub x: Point,
    /// Midpoint of the base of `T_n`.
    pub y: Point,
    /// Base endpoint of `T_{n+1}` on the far side of `T_n`.
    pub z: Point,
}

/// Explicit boundary approximation at a fixed depth.
#[derive(Debug, Clone, PartialEq)]
pub struct KochBoundary {
    pub depth: u32,
    /// Closed polyline; the last vertex connects back to the first.
    pub vertices: Vec<Point>,
    /// Hausdorff distance bound to the limit curve.
    pub hausdorff_error: f64,
}

impl KochDomain {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 0.5) {
            return Err(QhError::InvalidParam(format!(
                "a must lie in (0, 1/2], got {a}"
            )));
        }
        let mut d = KochDomain {
            a,
            oracle_tol: DEFAULT_ORACLE_TOL,
            bounding_radius: 0.0,
        };
        let coarse = d.boundary_polyline(5)?;
        let far = coarse.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        d.bounding_radius = far + coarse.hausdorff_error;
        Ok(d)
    }

    pub fn with_oracle_tol(mut self, tol: f64) -> Self {
        self.oracle_tol = tol;
        self
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Largest length ratio between a segment and its children.
    pub fn contraction(&self) -> f64 {
        self.a.max(0.5 * (1.0 - self.a))
    }

    /// How far the limit arc over a segment of length `len` can stray from it.
    pub fn hull_radius(&self, len: f64) -> f64 {
        0.5 * SQRT3 * self.a * len / (1.0 - self.contraction())
    }

    /// Height of the outward rectangle holding the limit arc, relative to the segment length.
    pub fn height_ratio(&self) -> f64 {
        0.5 * SQRT3 * self.a / (1.0 - 0.5 * self.a)
    }

    /// Distance from `p` to the rectangle holding the limit arc over `[u, v]`.
    fn region_distance(&self, p: Point, u: Point, v: Point) -> f64 {
        let len = u.dist(v);
        let dir = (v - u) * (1.0 / len);
        let normal = Point::new(dir.y, -dir.x);
        let rel = p - u;
        let (s, h) = (rel.dot(dir), rel.dot(normal));
        let ds = (-s).max(s - len).max(0.0);
        let dh = (-h).max(h - self.height_ratio() * len).max(0.0);
        ds.hypot(dh)
    }

    pub fn hausdorff_error(&self, depth: u32) -> f64 {
        self.hull_radius(self.contraction().powi(depth as i32))
    }

    /// The starting triangle with vertices bottom, right, left.
    pub fn base_triangle(&self) -> Triangle {
        Triangle {
            p1: Point::new(0.0, -1.0 / SQRT3),
            p2: Point::new(0.5, 0.5 / SQRT3),
            p3: Point::new(-0.5, 0.5 / SQRT3),
        }
    }

    fn base_edges(&self) -> [(Point, Point); 3] {
        let t = self.base_triangle();
        [(t.p1, t.p2), (t.p2, t.p3), (t.p3, t.p1)]
    }

    /// The bump triangle erected on `[u, v]`.
    pub fn bump(&self, u: Point, v: Point) -> Triangle {
        let d = v - u;
        let p1 = u + d * (0.5 * (1.0 - self.a));
        let p3 = u + d * (0.5 * (1.0 + self.a));
        let outward = Point::new(d.y, -d.x);
        let p2 = p1.midpoint(p3) + outward * (0.5 * SQRT3 * self.a);
        Triangle { p1, p2, p3 }
    }

    fn subdivide(&self, u: Point, v: Point) -> [Point; 5] {
        let t = self.bump(u, v);
        [u, t.p1, t.p2, t.p3, v]
    }

    /// Boundary polygon after `depth` subdivisions, `3·4^depth` vertices.
    pub fn boundary_polyline(&self, depth: u32) -> Result<KochBoundary> {
        if depth > MAX_POLYLINE_DEPTH {
            return Err(QhError::DepthTooLarge {
                depth: depth as usize,
                max: MAX_POLYLINE_DEPTH as usize,
            });
        }
        let t = self.base_triangle();
        let mut vertices = vec![t.p1, t.p2, t.p3];
        for _ in 0..depth {
            let n = vertices.len();
            let mut next = Vec::with_capacity(4 * n);
            for i in 0..n {
                let s = self.subdivide(vertices[i], vertices[(i + 1) % n]);
                next.extend_from_slice(&s[..4]);
            }
            vertices = next;
        }
        Ok(KochBoundary {
            depth,
            vertices,
            hausdorff_error: self.hausdorff_error(depth),
        })
    }

    /// Distance from `p` to the limit boundary, accurate to `tol` from above.
    ///
    /// Works for any point of the plane; see [`KochDomain::dist_to_boundary`]
    /// for the checked version.
    pub fn boundary_distance(&self, p: Point, tol: f64) -> Result<f64> {
        let (best, converged) = self.search_distance(p, tol);
        if converged {
            Ok(best)
        } else {
            Err(QhError::TolUnreachable {
                tol,
                max_depth: MAX_SEARCH_DEPTH as usize,
            })
        }
    }

    /// Distance from an interior point `p` to `∂S_a`.
    pub fn dist_to_boundary(&self, p: Point, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(QhError::InvalidParam(format!("tol must be positive, got {tol}")));
        }
        if !self.contains(p) {
            return Err(QhError::OutsideDomain(p));
        }
        self.boundary_distance(p, tol)
    }

    fn search_distance(&self, p: Point, tol: f64) -> (f64, bool) {
        let mut best = f64::INFINITY;
        let mut heap = BinaryHeap::new();
        for (u, v) in self.base_edges() {
            best = best.min(p.dist(u));
            heap.push(Candidate {
                lower: self.region_distance(p, u, v),
                u,
                v,
                depth: 0,
            });
        }
        while let Some(c) = heap.pop() {
            if c.lower >= best - tol {
                break;
            }
            if c.depth >= MAX_SEARCH_DEPTH {
                return (best, false);
            }
            let s = self.subdivide(c.u, c.v);
            for q in &s[1..4] {
                best = best.min(p.dist(*q));
            }
            for w in s.windows(2) {
                let lower = self.region_distance(p, w[0], w[1]);
                if lower < best - tol {
                    heap.push(Candidate {
                        lower,
                        u: w[0],
                        v: w[1],
                        depth: c.depth + 1,
                    });
                }
            }
        }
        (best, true)
    }

    /// Winding number of the limit curve around `p`, or `None` if `p` is
    /// too close to the curve to decide.
    pub fn winding_number(&self, p: Point) -> Option<i32> {
        let mut total = 0.0;
        let mut stack: Vec<(Point, Point, u32)> =
            self.base_edges().iter().map(|&(u, v)| (u, v, 0)).collect();
        while let Some((u, v, depth)) = stack.pop() {
            if self.region_distance(p, u, v) > 0.0 {
                let (a, b) = (u - p, v - p);
                total += a.cross(b).atan2(a.dot(b));
            } else if depth >= MAX_SEARCH_DEPTH {
                return None;
            } else {
                let s = self.subdivide(u, v);
                for w in s.windows(2) {
                    stack.push((w[0], w[1], depth + 1));
                }
            }
        }
        Some((total / TAU).round() as i32)
    }

    /// The chain of triangles `T_0, ..., T_n` towards the top.
    pub fn chain_triangles(&self, n: usize) -> Vec<Triangle> {
        let mut out = vec![self.base_triangle()];
        for _ in 0..n {
            let last = *out.last().unwrap();
            out.push(self.bump(last.p2, last.p3));
        }
        out
    }

    pub fn chain_points(&self, n: usize) -> ChainPoints {
        let chain = self.chain_triangles(n);
        let t = chain[n];
        ChainPoints {
            x: t.centroid(),
            y: t.base_midpoint(),
            z: t.p2 + (t.p3 - t.p2) * (0.5 * (1.0 + self.a)),
        }
    }

    /// Polyline through the centroids `x_0, ..., x_n` of the central chain.
    pub fn qhbc_upper_path(&self, n: usize) -> Result<Curve> {
        if n == 0 {
            return Err(QhError::InvalidParam("path generation needs n >= 1".into()));
        }
        let pts: Vec<Point> = self.chain_triangles(n).iter().map(Triangle::centroid).collect();
        Curve::polyline(&pts)
    }

    /// Triangles from `T_0` down to the smallest construction triangle containing `x`.
    pub fn locate(&self, x: Point) -> Result<Vec<Triangle>> {
        if !self.contains(x) {
            return Err(QhError::OutsideDomain(x));
        }
        let root = vec![self.base_triangle()];
        if root[0].contains(x) {
            return Ok(root);
        }
        for (u, v) in self.base_edges() {
            if let Some(chain) = self.locate_on(x, u, v, &root, 0) {
                return Ok(chain);
            }
        }
        Err(QhError::OutsideDomain(x))
    }

    fn locate_on(&self, x: Point, u: Point, v: Point, chain: &[Triangle], depth: u32) -> Option<Vec<Triangle>> {
        if depth >= MAX_SEARCH_DEPTH || self.region_distance(x, u, v) > 0.0 {
            return None;
        }
        let t = self.bump(u, v);
        let mut extended = chain.to_vec();
        extended.push(t);
        for (a, b) in [(t.p1, t.p2), (t.p2, t.p3)] {
            if let Some(found) = self.locate_on(x, a, b, &extended, depth + 1) {
                return Some(found);
            }
        }
        if t.contains(x) {
            return Some(extended);
        }
        for (a, b) in [(u, t.p1), (t.p3, v)] {
            if let Some(found) = self.locate_on(x, a, b, chain, depth + 1) {
                return Some(found);
            }
        }
        None
    }

    /// John curve from `x` to the centroid of `T_0`: straight to the base
    /// midpoint of the smallest triangle holding `x`, then alternately through
    /// parent centroids and base midpoints back down the chain.
    pub fn john_curve(&self, x: Point) -> Result<Curve> {
        let chain = self.locate(x)?;
        let mut b = CurveBuilder::new(x);
        for (i, t) in chain[1..].iter().rev().enumerate() {
            if i > 0 {
                b = b.line_to(t.centroid());
            }
            b = b.line_to(t.base_midpoint());
        }
        Ok(b.line_to(chain[0].centroid()).build())
    }

    /// A point on the segment from the centroid towards the bottom corner,
    /// at `fraction` of the way, and that segment.
    pub fn corner_witness(&self, fraction: f64) -> Result<(Point, Curve)> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(QhError::InvalidParam(format!(
                "fraction must lie in (0, 1), got {fraction}"
            )));
        }
        let corner = self.base_triangle().p1;
        let z = corner * fraction;
        Ok((z, Curve::polyline(&[z, Point::ORIGIN])?))
    }

    /// Points and John curves for the central-chain centroids `x_1..x_max_n`
    /// together with base midpoints and points near the bottom corner.
    pub fn john_family(&self, max_n: usize) -> Result<Vec<(Point, Curve)>> {
        let chain = self.chain_triangles(max_n);
        let mut points = Vec::new();
        for t in &chain[1..] {
            points.push(t.centroid());
            points.push(t.base_midpoint());
        }
        for k in 1..=max_n {
            points.push(self.base_triangle().p1 * (1.0 - 0.5f64.powi(k as i32)));
        }
        points
            .into_iter()
            .map(|p| Ok((p, self.john_curve(p)?)))
            .collect()
    }
}

impl DomainOracle for KochDomain {
    fn dist_to_boundary(&self, p: Point) -> f64 {
        self.search_distance(p, self.oracle_tol).0
    }

    fn contains(&self, p: Point) -> bool {
        if p.norm() >= self.bounding_radius {
            return false;
        }
        self.search_distance(p, self.oracle_tol).0 > 0.0 && self.winding_number(p) == Some(1)
    }

    fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    lower: f64,
    u: Point,
    v: Point,
    depth: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.lower.total_cmp(&other.lower) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed so the max-heap pops the smallest lower bound first
    fn cmp(&self, other: &Self) -> Ordering {
        other.lower.total_cmp(&self.lower)
    }
}

fn leg_lengths(a: f64) -> (f64, f64) {
    let upper = (3.0 + 2.0 * SQRT3).ln() + ((1.0 + (3.0 * a * a + 1.0).sqrt()) / (SQRT3 * a)).ln();
    let spread = (1.0 + a) * (3.0 + 2.0 * a);
    let angle = (SQRT3 / (2.0 * spread).sqrt()).asin();
    let radial = (spread.sqrt() / (a * 2f64.sqrt())).ln();
    (upper, angle.hypot(radial))
}

/// Per-generation cost of the centroid path.
pub fn koch_upper_slope(a: f64) -> f64 {
    leg_lengths(a).0
}

/// Per-generation lower estimate of the distance between consecutive centroids.
pub fn koch_lower_slope(a: f64) -> f64 {
    leg_lengths(a).1
}

/// Upper estimate for the centroid path to `x_n`: the measured first leg plus
/// `n - 1` copies of the per-generation cost.
pub fn koch_path_upper_bound(a: f64, first_leg: f64, n: usize) -> f64 {
    first_leg + (n as f64 - 1.0) * koch_upper_slope(a)
}

/// Lower estimate `(n - 1) · B` for `k(x_0, x_n)`.
pub fn koch_path_lower_bound(a: f64, n: usize) -> f64 {
    (n as f64 - 1.0) * koch_lower_slope(a)
}

pub fn beta1_koch(a: f64) -> f64 {
    (1.0 / a).ln() / koch_upper_slope(a)
}

pub fn beta2_koch(a: f64) -> f64 {
    (1.0 / a).ln() / koch_lower_slope(a)
}

/// The Koch similarity equation `2a^s + 2((1-a)/2)^s = 1`.
pub fn koch_dimension_residual(a: f64, s: f64) -> f64 {
    2.0 * a.powf(s) + 2.0 * (0.5 * (1.0 - a)).powf(s) - 1.0
}

/// Dimension of `∂S_a`, found by bisection on `[1, 2]` until the residual
/// is at most `tol`.
pub fn dimension_koch(a: f64, tol: f64) -> Result<f64> {
    if !(a > 0.0 && a < 0.5) {
        return Err(QhError::InvalidParam(format!("a must lie in (0, 1/2), got {a}")));
    }
    if !(tol > 0.0) {
        return Err(QhError::InvalidParam(format!("tol must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    let (flo, fhi) = (koch_dimension_residual(a, lo), koch_dimension_residual(a, hi));
    if !(flo > 0.0 && fhi < 0.0) {
        return Err(QhError::NoBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = koch_dimension_residual(a, mid);
        if f.abs() <= tol || hi - lo <= f64::EPSILON * mid {
            return Ok(mid);
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// John constant `max{2, 4/(3(1-a))}` of the snowflake with center at the centroid.
pub fn john_constant_koch(a: f64) -> f64 {
    (4.0 / (3.0 * (1.0 - a))).max(2.0)
}
