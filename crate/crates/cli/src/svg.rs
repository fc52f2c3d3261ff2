//! Deterministic SVG drawings of the domains and proof paths.
//!
//! Coordinates are written with `y` negated so the picture has the usual
//! mathematical orientation.

use std::f64::consts::PI;
use std::fmt::Write as _;

use qhmetric::cantor::{CantorDomain, BALL_RADIUS};
use qhmetric::koch::KochDomain;
use qhmetric::{Curve, Piece, Point, Result};

use crate::format::coord;

const BOUNDARY_STYLE: &str =
    r#"fill="none" stroke="black" stroke-width="0.5" vector-effect="non-scaling-stroke""#;
const PATH_STYLE: &str =
    r#"fill="none" stroke="red" stroke-width="1" vector-effect="non-scaling-stroke""#;

fn xy(p: Point) -> String {
    format!("{},{}", coord(p.x), coord(-p.y))
}

fn header(view_box: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{view_box}\">\n"
    )
}

/// SVG path data for a curve; arcs become elliptical-arc commands.
fn path_data(curve: &Curve) -> String {
    let mut d = format!("M {}", xy(curve.start()));
    for piece in curve.pieces() {
        match *piece {
            Piece::Segment { to, .. } => {
                let _ = write!(d, " L {}", xy(to));
            }
            Piece::Arc {
                radius,
                angle_start,
                angle_end,
                ..
            } => {
                let sweep = angle_end - angle_start;
                let large = u8::from(sweep.abs() > PI);
                // the y flip turns counterclockwise into the negative-angle direction
                let flag = u8::from(sweep < 0.0);
                let r = coord(radius);
                let _ = write!(d, " A {r} {r} 0 {large} {flag} {}", xy(piece.end()));
            }
        }
    }
    d
}

fn push_path(svg: &mut String, path: Option<&Curve>) {
    if let Some(curve) = path {
        let _ = writeln!(svg, "<path d=\"{}\" {PATH_STYLE}/>", path_data(curve));
    }
}

/// Outer circle and the generation-`depth` squares of the dust.
pub fn render_cantor(domain: &CantorDomain, depth: u32, path: Option<&Curve>) -> String {
    let mut svg = header("-2.2 -2.2 4.4 4.4");
    let _ = writeln!(
        svg,
        "<circle cx=\"0.000000000\" cy=\"0.000000000\" r=\"{}\" {BOUNDARY_STYLE}/>",
        coord(BALL_RADIUS)
    );
    let alpha = domain.alpha();
    let mut squares = vec![(Point::ORIGIN, 1.0f64)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(4 * squares.len());
        for &(c, side) in &squares {
            let step = 0.25 * side * (1.0 + alpha);
            for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                next.push((c + Point::new(sx * step, sy * step), side * domain.ratio()));
            }
        }
        squares = next;
    }
    for (c, side) in squares {
        let corner = c + Point::new(-0.5 * side, 0.5 * side);
        let _ = writeln!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" {BOUNDARY_STYLE}/>",
            coord(corner.x),
            coord(-corner.y),
            coord(side),
            coord(side)
        );
    }
    push_path(&mut svg, path);
    svg.push_str("</svg>\n");
    svg
}

/// Depth-`depth` boundary polygon of the snowflake.
pub fn render_koch(domain: &KochDomain, depth: u32, path: Option<&Curve>) -> Result<String> {
    let boundary = domain.boundary_polyline(depth)?;
    let mut svg = header("-0.8 -0.9 1.6 1.6");
    let points: Vec<String> = boundary.vertices.iter().map(|&p| xy(p)).collect();
    let _ = writeln!(svg, "<polygon points=\"{}\" {BOUNDARY_STYLE}/>", points.join(" "));
    push_path(&mut svg, path);
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qhmetric::CurveBuilder;

    #[test]
    fn arc_flags() {
        let up = CurveBuilder::new(Point::new(1.0, 0.0))
            .arc_around(Point::ORIGIN, PI / 2.0)
            .build();
        assert!(path_data(&up).ends_with("A 1.000000000 1.000000000 0 0 0 0.000000000,-1.000000000"));
        let down = up.reversed();
        assert!(path_data(&down).contains(" 0 0 1 "));
    }

    #[test]
    fn koch_segment_count() {
        let d = KochDomain::new(0.25).unwrap();
        let svg = render_koch(&d, 4, None).unwrap();
        let points = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert_eq!(points.split(' ').count(), 3 * 4usize.pow(4));
    }
}
