use std::f64::consts::PI;

use proptest::prelude::*;
use qhmetric::cantor::{dimension_cantor, dist_cantor_1d, beta1_cantor, beta2_cantor, JohnCenter};
use qhmetric::geometry::dist_to_segment;
use qhmetric::koch::{beta1_koch, beta2_koch};
use qhmetric::qh_metric::qh_distance_upper;
use qhmetric::{
    curve_john_constant, qh_length, CantorDomain, Curve, DomainOracle, KochDomain, Point,
    PuncturedPlane, QhGraph,
};

fn point_in_disk(radius: f64) -> impl Strategy<Value = Point> {
    (0.0..radius, 0.0..2.0 * PI).prop_map(|(r, t)| Point::from_polar(r, t))
}

fn koch_param() -> impl Strategy<Value = f64> {
    prop_oneof![0.05..0.5, Just(0.5), Just(1.0 / 3.0)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cantor_distance_is_lipschitz(alpha in 0.05..0.95, p in point_in_disk(1.99), q in point_in_disk(1.99)) {
        let d = CantorDomain::new(alpha).unwrap();
        let (dp, dq) = (DomainOracle::dist_to_boundary(&d, p), DomainOracle::dist_to_boundary(&d, q));
        prop_assert!((dp - dq).abs() <= p.dist(q) + 1e-12);
    }

    #[test]
    fn cantor_distance_has_square_symmetry(alpha in 0.05..0.95, p in point_in_disk(1.99)) {
        let d = CantorDomain::new(alpha).unwrap();
        let v = DomainOracle::dist_to_boundary(&d, p);
        for image in [
            Point::new(-p.x, p.y),
            Point::new(p.x, -p.y),
            Point::new(p.y, p.x),
            Point::new(-p.y, -p.x),
        ] {
            prop_assert!((DomainOracle::dist_to_boundary(&d, image) - v).abs() <= 1e-14);
        }
    }

    #[test]
    fn cantor_1d_distance_is_lipschitz_and_symmetric(alpha in 0.05..0.95, x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let (dx, dy) = (dist_cantor_1d(alpha, x), dist_cantor_1d(alpha, y));
        prop_assert!((dx - dy).abs() <= (x - y).abs() + 1e-15);
        prop_assert!((dist_cantor_1d(alpha, -x) - dx).abs() <= 1e-15);
    }

    #[test]
    fn cantor_gap_endpoints_are_in_the_set(alpha in 0.05..0.95f64, level in 0u32..12) {
        // push the central gap endpoint into the right-hand copy `level` times
        let ratio = 0.5 * (1.0 - alpha);
        // gaps narrower than this are below double resolution near 1/2
        prop_assume!(ratio.powi(level as i32) > 1e-9);
        let mut x: f64 = 0.5 * alpha;
        for _ in 0..level {
            x = 0.25 * (1.0 + alpha) + ratio * x;
        }
        prop_assert!(dist_cantor_1d(alpha, x) <= 1e-15);
        prop_assert!(dist_cantor_1d(alpha, x - 1e-3 * ratio.powi(level as i32)) > 0.0);
    }

    #[test]
    fn koch_distance_is_lipschitz(a in koch_param(), p in point_in_disk(0.8), q in point_in_disk(0.8)) {
        let d = KochDomain::new(a).unwrap();
        let dp = d.boundary_distance(p, 1e-12).unwrap();
        let dq = d.boundary_distance(q, 1e-12).unwrap();
        prop_assert!((dp - dq).abs() <= p.dist(q) + 2e-12);
    }

    #[test]
    fn koch_oracle_respects_prefractal_error(a in koch_param(), p in point_in_disk(0.8), depth in 2u32..6) {
        let d = KochDomain::new(a).unwrap();
        let boundary = d.boundary_polyline(depth).unwrap();
        let v = &boundary.vertices;
        let coarse = (0..v.len())
            .map(|i| dist_to_segment(p, v[i], v[(i + 1) % v.len()]))
            .fold(f64::INFINITY, f64::min);
        let exact = d.boundary_distance(p, 1e-12).unwrap();
        prop_assert!((coarse - exact).abs() <= boundary.hausdorff_error + 1e-12);
    }

    #[test]
    fn koch_prefractals_nest(a in koch_param(), depth in 0u32..6) {
        let d = KochDomain::new(a).unwrap();
        let coarse = d.boundary_polyline(depth).unwrap().vertices;
        let fine = d.boundary_polyline(depth + 1).unwrap().vertices;
        prop_assert_eq!(fine.len(), 4 * coarse.len());
        for (i, &p) in coarse.iter().enumerate() {
            prop_assert_eq!(fine[4 * i], p);
        }
        let perimeter: f64 = (0..fine.len()).map(|i| fine[i].dist(fine[(i + 1) % fine.len()])).sum();
        let expected = 3.0 * (1.0 + a).powi(depth as i32 + 1);
        prop_assert!((perimeter - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn exponent_bounds_are_ordered(alpha in 0.001..0.999, a in 0.001..0.5) {
        prop_assert!(0.0 < beta1_cantor(alpha) && beta1_cantor(alpha) < beta2_cantor(alpha));
        prop_assert!(beta2_cantor(alpha) <= 1.0);
        prop_assert!(0.0 < beta1_koch(a) && beta1_koch(a) < beta2_koch(a));
        prop_assert!(dimension_cantor(alpha) > 0.0);
    }
}

fn off_origin() -> impl Strategy<Value = Point> {
    (0.2..5.0, 0.0..2.0 * PI).prop_map(|(r, t)| Point::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn punctured_closed_form_is_a_metric(x in off_origin(), y in off_origin(), z in off_origin()) {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let k = |p, q| g.qh_distance(p, q).unwrap();
        prop_assert!((k(x, y) - k(y, x)).abs() <= 1e-14);
        prop_assert!(k(x, z) <= k(x, y) + k(y, z) + 1e-12);
        prop_assert!(k(x, y) + 1e-14 >= (x.norm() / y.norm()).ln().abs());
    }

    #[test]
    fn segments_are_no_shorter_than_the_closed_form(x in off_origin(), y in off_origin()) {
        prop_assume!(dist_to_segment(Point::ORIGIN, x, y) > 0.05);
        let g = PuncturedPlane::new(Point::ORIGIN);
        let along = qh_length(&Curve::polyline(&[x, y]).unwrap(), &g, 1e-10).unwrap();
        prop_assert!(along >= g.qh_distance(x, y).unwrap() - 1e-9);
    }

    #[test]
    fn quadrature_is_additive_and_reversible(x in off_origin(), m in off_origin(), y in off_origin()) {
        prop_assume!(dist_to_segment(Point::ORIGIN, x, m) > 0.05);
        prop_assume!(dist_to_segment(Point::ORIGIN, m, y) > 0.05);
        let g = PuncturedPlane::new(Point::ORIGIN);
        let first = Curve::polyline(&[x, m]).unwrap();
        let second = Curve::polyline(&[m, y]).unwrap();
        let whole = first.concat(&second).unwrap();
        let sum = qh_length(&first, &g, 1e-11).unwrap() + qh_length(&second, &g, 1e-11).unwrap();
        let joined = qh_length(&whole, &g, 1e-11).unwrap();
        let back = qh_length(&whole.reversed(), &g, 1e-11).unwrap();
        prop_assert!((joined - sum).abs() <= 1e-9 * (1.0 + sum));
        prop_assert!((joined - back).abs() <= 1e-9 * (1.0 + sum));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn graph_distances_obey_triangle_inequality(x in off_origin(), y in off_origin(), z in off_origin()) {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let graph = QhGraph::build(&g, 0.5, &[x, y, z]).unwrap();
        let s = graph.seed_indices();
        let k = |i: usize, j: usize| graph.distance(s[i], s[j]).unwrap();
        prop_assert!(k(0, 2) <= k(0, 1) + k(1, 2) + 1e-9);
        prop_assert!((k(0, 1) - k(1, 0)).abs() <= 1e-9);
    }

    #[test]
    fn refinement_never_worsens_the_bound(x in off_origin(), y in off_origin()) {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let est = qh_distance_upper(&g, x, y, 0.5, 1e-2).unwrap();
        for w in est.refinement_history.windows(2) {
            prop_assert!(w[1].1 <= w[0].1);
            prop_assert!(w[1].0 < w[0].0);
        }
        prop_assert_eq!(est.value, est.refinement_history.last().unwrap().1);
        prop_assert!(est.value >= g.qh_distance(x, y).unwrap() - 1e-6);
    }
}

/// Doubling the sample density moves no certified constant by more than 1%.
#[test]
fn john_sampling_is_stable() {
    let mut families = Vec::new();
    for &a in &[0.1, 1.0 / 3.0, 0.5] {
        let d = KochDomain::new(a).unwrap();
        for (_, c) in d.john_family(6).unwrap() {
            families.push((Box::new(d) as Box<dyn DomainOracle>, c));
        }
    }
    for (alpha, center) in [(0.2, JohnCenter::Shifted), (0.5, JohnCenter::Origin)] {
        let d = CantorDomain::new(alpha).unwrap();
        for (_, c) in d.john_family(center, 6).unwrap() {
            families.push((Box::new(d) as Box<dyn DomainOracle>, c));
        }
    }
    for (domain, curve) in &families {
        let coarse = curve_john_constant(domain.as_ref(), curve, 1e-3).unwrap().curve_constant;
        let fine = curve_john_constant(domain.as_ref(), curve, 5e-4).unwrap().curve_constant;
        assert!((fine - coarse).abs() <= 0.01 * fine, "{coarse} vs {fine}");
    }
}
