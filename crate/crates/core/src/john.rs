//! The John condition `dist(γ(t), ∂D) ≥ t / c` along explicit curves.

use rayon::prelude::*;

use crate::domain::DomainOracle;
use crate::error::{QhError, Result};
use crate::geometry::{Curve, Point};
use crate::quadrature::BOUNDARY_CUTOFF;

/// Relative slack allowed on a claimed constant.
pub const CLAIM_SLACK: f64 = 1e-3;

/// The best John constant a single curve certifies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JohnReport {
    /// `sup t / dist(γ(t), ∂D)` over the samples, `t` the arclength from the start.
    pub curve_constant: f64,
    pub argsup_t: f64,
    pub samples: usize,
}

/// Largest sample spacing as a multiple of `step · dist(γ(t), ∂D)`.
///
/// Since `dist` is 1-Lipschitz, the ratio between neighbouring samples can
/// grow by at most a factor `(1 + 10·step·(1 + 1/ratio)) / (1 - 10·step)`.
pub const LOCAL_SPACING: f64 = 10.0;

/// Samples `t` every `step · ℓ(γ)`, at every piece junction, and more densely
/// where the curve runs close to the boundary, and returns the largest ratio
/// `t / dist(γ(t), ∂D)`.
pub fn curve_john_constant<D: DomainOracle + ?Sized>(domain: &D, curve: &Curve, step: f64) -> Result<JohnReport> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(QhError::InvalidParam(format!("step must lie in (0, 1], got {step}")));
    }
    let total = curve.total_length();
    if total == 0.0 {
        return Ok(JohnReport {
            curve_constant: 0.0,
            argsup_t: 0.0,
            samples: 0,
        });
    }
    let count = (1.0 / step).ceil() as usize;
    let mut grid: Vec<f64> = (1..=count).map(|k| (k as f64 * step * total).min(total)).collect();
    grid.extend(curve.junctions().into_iter().skip(1));
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut report = JohnReport {
        curve_constant: 0.0,
        argsup_t: 0.0,
        samples: 0,
    };
    // keeps the local refinement from stalling in front of a boundary contact
    let min_spacing = 1e-9 * total;
    let mut t = 0.0;
    let mut d = domain.dist_to_boundary(curve.start());
    for &target in &grid {
        while t < target {
            t = (t + (LOCAL_SPACING * step * d).max(min_spacing)).min(target);
            let p = curve.point_at(t)?;
            d = domain.dist_to_boundary(p);
            if !(d > BOUNDARY_CUTOFF) {
                return Err(QhError::CurveTouchesBoundary(p));
            }
            report.samples += 1;
            let ratio = t / d;
            if ratio > report.curve_constant {
                report.curve_constant = ratio;
                report.argsup_t = t;
            }
        }
    }
    Ok(report)
}

/// Reports for every curve of a family, computed in parallel.
pub fn john_family_reports<D: DomainOracle + ?Sized>(
    domain: &D,
    family: &[(Point, Curve)],
    step: f64,
) -> Result<Vec<JohnReport>> {
    family
        .par_iter()
        .map(|(_, curve)| curve_john_constant(domain, curve, step))
        .collect()
}

/// True iff every curve certifies a constant within `claimed_c · (1 + 1e-3)`.
pub fn verify_john_family<D: DomainOracle + ?Sized>(
    domain: &D,
    family: &[(Point, Curve)],
    claimed_c: f64,
    step: f64,
) -> Result<bool> {
    let reports = john_family_reports(domain, family, step)?;
    Ok(reports
        .iter()
        .all(|r| r.curve_constant <= claimed_c * (1.0 + CLAIM_SLACK)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Polygon;

    #[test]
    fn constant_curve_gives_zero() {
        let t = Polygon::unit_equilateral();
        let r = curve_john_constant(&t, &Curve::point(Point::ORIGIN), 1e-3).unwrap();
        assert_eq!(r.curve_constant, 0.0);
    }

    #[test]
    fn triangle_is_two_john_along_segments() {
        let t = Polygon::unit_equilateral();
        let corner = t.vertices()[0];
        for &f in &[0.5, 0.9, 0.999] {
            let x = corner * f;
            let c = Curve::polyline(&[x, Point::ORIGIN]).unwrap();
            let r = curve_john_constant(&t, &c, 1e-3).unwrap();
            assert!(r.curve_constant <= 2.0 + 1e-3);
            assert!((r.curve_constant - 2.0 * f).abs() < 1e-9);
        }
    }

    #[test]
    fn endpoint_bound() {
        let t = Polygon::unit_equilateral();
        let x = Point::new(0.1, 0.05);
        let c = Curve::polyline(&[x, Point::ORIGIN]).unwrap();
        let r = curve_john_constant(&t, &c, 1e-2).unwrap();
        assert!(r.curve_constant >= c.total_length() / t.dist_to_boundary(Point::ORIGIN) - 1e-15);
    }

    #[test]
    fn touching_curve_fails() {
        let t = Polygon::unit_equilateral();
        let on_edge = Point::new(0.0, 0.5 / 3f64.sqrt());
        let c = Curve::polyline(&[Point::new(0.1, 0.0), on_edge, Point::ORIGIN]).unwrap();
        assert!(matches!(
            curve_john_constant(&t, &c, 1e-2),
            Err(QhError::CurveTouchesBoundary(_))
        ));
    }
}
