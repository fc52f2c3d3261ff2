//! Adaptive quadrature of `1 / dist(z, ∂D)` along curves.

use crate::domain::DomainOracle;
use crate::error::{QhError, Result};
use crate::geometry::{Curve, Piece, Point};

/// Boundary distances at or below this are treated as lying on the boundary.
pub const BOUNDARY_CUTOFF: f64 = 1e-14;

/// Panels shorter than this are accepted without further refinement.
pub const MIN_PANEL: f64 = 1e-9;

const INITIAL_PANELS: usize = 8;
const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson rule on `[a, b]` with the classical `15 * tol` acceptance test.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if b <= a {
        return Ok(0.0);
    }
    let panel = (b - a) / INITIAL_PANELS as f64;
    let panel_tol = tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut fa = f(a)?;
    for i in 0..INITIAL_PANELS {
        let lo = a + i as f64 * panel;
        let hi = if i + 1 == INITIAL_PANELS {
            b
        } else {
            a + (i + 1) as f64 * panel
        };
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        let fb = f(hi)?;
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson_step(f, lo, hi, fa, fm, fb, whole, panel_tol, MAX_DEPTH)?;
        fa = fb;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || b - a <= MIN_PANEL || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

pub(crate) fn inverse_distance<D: DomainOracle + ?Sized>(domain: &D, p: Point) -> Result<f64> {
    let d = domain.dist_to_boundary(p);
    if d.is_nan() || !p.is_finite() {
        return Err(QhError::NonFiniteIntegrand(p));
    }
    if d <= BOUNDARY_CUTOFF {
        return Err(QhError::CurveTouchesBoundary(p));
    }
    Ok(1.0 / d)
}

/// Quasihyperbolic length of a single piece.
pub fn qh_length_piece<D: DomainOracle + ?Sized>(piece: &Piece, domain: &D, tol: f64) -> Result<f64> {
    let len = piece.length();
    if len == 0.0 {
        inverse_distance(domain, piece.start())?;
        return Ok(0.0);
    }
    let integrand = |s: f64| inverse_distance(domain, piece.point_at(s));
    adaptive_simpson(&integrand, 0.0, len, tol)
}

/// Quasihyperbolic length `∫ |dz| / dist(z, ∂D)` of `curve`, with the absolute
/// error budget `tol` split across pieces in proportion to their lengths.
pub fn qh_length<D: DomainOracle + ?Sized>(curve: &Curve, domain: &D, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(QhError::InvalidParam(format!("tol must be positive, got {tol}")));
    }
    let total = curve.total_length();
    if total == 0.0 {
        inverse_distance(domain, curve.start())?;
        return Ok(0.0);
    }
    curve
        .pieces()
        .iter()
        .map(|piece| qh_length_piece(piece, domain, tol * piece.length() / total))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{PuncturedPlane, TwicePuncturedPlane};
    use crate::geometry::CurveBuilder;
    use std::f64::consts::{E, PI};

    #[test]
    fn radial_segment_in_punctured_plane() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let c = Curve::polyline(&[Point::new(1.0, 0.0), Point::new(E, 0.0)]).unwrap();
        let v = qh_length(&c, &g, 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unit_arc_in_punctured_plane() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let c = CurveBuilder::new(Point::new(1.0, 0.0))
            .arc_around(Point::ORIGIN, PI / 2.0)
            .build();
        let v = qh_length(&c, &g, 1e-10).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn bisector_segment_matches_closed_form() {
        let g = TwicePuncturedPlane::new(Point::ORIGIN, Point::new(2.0, 0.0)).unwrap();
        let c = Curve::polyline(&[Point::new(1.0, 0.0), Point::new(1.0, 1.5)]).unwrap();
        let v = qh_length(&c, &g, 1e-9).unwrap();
        assert!((v - 1.194_763_217_287_109).abs() < 1e-5);
    }

    // brute-force midpoint Riemann sum with 10^7 steps, independent of the adaptive rule
    #[test]
    fn bisector_segment_riemann_cross_check() {
        let a = Point::ORIGIN;
        let b = Point::new(2.0, 0.0);
        let steps = 10_000_000u32;
        let h = 1.5 / steps as f64;
        let sum: f64 = (0..steps)
            .map(|i| {
                let p = Point::new(1.0, (i as f64 + 0.5) * h);
                1.0 / p.dist(a).min(p.dist(b))
            })
            .sum::<f64>()
            * h;
        assert!((sum - 1.194_763_217_287_109).abs() < 1e-5);
    }

    #[test]
    fn touching_the_boundary_is_an_error() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let c = Curve::polyline(&[Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]).unwrap();
        assert!(matches!(
            qh_length(&c, &g, 1e-8),
            Err(QhError::CurveTouchesBoundary(_))
        ));
    }

    #[test]
    fn nan_integrand_is_reported() {
        struct Broken;
        impl DomainOracle for Broken {
            fn dist_to_boundary(&self, _: Point) -> f64 {
                f64::NAN
            }
            fn contains(&self, _: Point) -> bool {
                true
            }
            fn bounding_radius(&self) -> f64 {
                1.0
            }
        }
        let c = Curve::polyline(&[Point::ORIGIN, Point::new(1.0, 0.0)]).unwrap();
        assert!(matches!(
            qh_length(&c, &Broken, 1e-8),
            Err(QhError::NonFiniteIntegrand(_))
        ));
    }

    #[test]
    fn simpson_integrates_polynomials() {
        let f = |x: f64| Ok(x * x * x - 2.0 * x);
        let v = adaptive_simpson(&f, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 0.0).abs() < 1e-12);
    }
}
