//! Domains described by a distance-to-boundary oracle.

use crate::geometry::{dist_to_segment, Point};

/// A planar domain known through its boundary distance.
///
/// `dist_to_boundary` must be 1-Lipschitz and vanish exactly on the boundary.
/// Metric quantities are only meaningful at points where `contains` is true.
pub trait DomainOracle: Sync {
    fn dist_to_boundary(&self, p: Point) -> f64;

    fn contains(&self, p: Point) -> bool;

    /// Radius of a disc around [`DomainOracle::bounding_center`] that holds
    /// every point a search over the domain should consider.
    fn bounding_radius(&self) -> f64;

    fn bounding_center(&self) -> Point {
        Point::ORIGIN
    }
}

impl<T: DomainOracle + ?Sized> DomainOracle for &T {
    fn dist_to_boundary(&self, p: Point) -> f64 {
        (**self).dist_to_boundary(p)
    }
    fn contains(&self, p: Point) -> bool {
        (**self).contains(p)
    }
    fn bounding_radius(&self) -> f64 {
        (**self).bounding_radius()
    }
    fn bounding_center(&self) -> Point {
        (**self).bounding_center()
    }
}

/// Interior of a simple closed polygon.
#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<Point>,
    center: Point,
    radius: f64,
}

impl Polygon {
    /// Vertices in order; the closing edge is implied.
    pub fn new(vertices: Vec<Point>) -> Self {
        let n = vertices.len() as f64;
        let center = vertices.iter().fold(Point::ORIGIN, |acc, &v| acc + v) * (1.0 / n);
        let radius = vertices
            .iter()
            .map(|v| v.dist(center))
            .fold(0.0, f64::max);
        Polygon {
            vertices,
            center,
            radius,
        }
    }

    /// Side-1 equilateral triangle, positively oriented, centroid at the origin,
    /// one edge horizontal on top.
    pub fn unit_equilateral() -> Self {
        let h = 3f64.sqrt() / 2.0;
        Polygon::new(vec![
            Point::new(0.0, -2.0 * h / 3.0),
            Point::new(0.5, h / 3.0),
            Point::new(-0.5, h / 3.0),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Winding number of the boundary around `p` (undefined on the boundary).
    pub fn winding_number(&self, p: Point) -> i32 {
        let total: f64 = self
            .edges()
            .map(|(a, b)| (a - p).cross(b - p).atan2((a - p).dot(b - p)))
            .sum();
        (total / std::f64::consts::TAU).round() as i32
    }
}

impl DomainOracle for Polygon {
    fn dist_to_boundary(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| dist_to_segment(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    fn contains(&self, p: Point) -> bool {
        self.dist_to_boundary(p) > 0.0 && self.winding_number(p) != 0
    }

    fn bounding_radius(&self) -> f64 {
        self.radius
    }

    fn bounding_center(&self) -> Point {
        self.center
    }
}
