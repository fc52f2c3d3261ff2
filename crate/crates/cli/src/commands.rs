use std::fmt::Write as _;

use qhmetric::cantor::{
    beta1_cantor, beta2_cantor, cantor_path_lower_bound, cantor_path_upper_bound, dimension_cantor,
    CantorDomain, JohnCenter,
};
use qhmetric::john::{curve_john_constant, john_family_reports, CLAIM_SLACK};
use qhmetric::koch::{
    beta1_koch, beta2_koch, dimension_koch, john_constant_koch, koch_path_lower_bound,
    koch_path_upper_bound, KochDomain,
};
use qhmetric::qh_metric::qh_distance_upper;
use qhmetric::{qh_length, Curve, DomainOracle, Point, PuncturedPlane};

use crate::format::{csv, emit, round12, sig12};
use crate::svg::{render_cantor, render_koch};
use crate::{
    BoundsArgs, DistKind, Failure, JohnArgs, Kind, ParamArgs, PathCheckArgs, QhDistArgs, RenderArgs,
};

/// Slack allowed on both sides of a closed-form bracket.
const BRACKET_SLACK: f64 = 1e-4;

const MAX_PATH_N: i64 = 5;
const MAX_RENDER_DEPTH: u32 = 8;

/// Cantor grids stop short of 1, Koch grids include 1/2.
fn check_param(kind: Kind, v: f64) -> Result<(), Failure> {
    let ok = match kind {
        Kind::Cantor => v > 0.0 && v < 1.0,
        Kind::Koch => v > 0.0 && v <= 0.5,
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::Usage(format!("parameter {v} outside the legal range for {kind:?}")))
    }
}

/// `start:stop:step` with `stop` included; `start > stop` gives an empty grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Failure::Usage(format!("grid must be start:stop:step, got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if start > stop {
        return Ok(Vec::new());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| round12(start + i as f64 * step)).collect())
}

pub fn bounds(kind: Kind, args: &BoundsArgs) -> Result<(), Failure> {
    let default = match kind {
        Kind::Cantor => "0.01:0.99:0.01",
        Kind::Koch => "0.01:0.5:0.01",
    };
    let grid = parse_grid(args.grid.as_deref().unwrap_or(default))?;
    for &v in &grid {
        check_param(kind, v)?;
    }
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .map(|&p| {
            let (b1, b2) = match kind {
                Kind::Cantor => (beta1_cantor(p), beta2_cantor(p)),
                Kind::Koch => (beta1_koch(p), beta2_koch(p)),
            };
            vec![p, b1, b2, b2 - b1]
        })
        .collect();
    emit(&csv("param,beta1,beta2,gap", &rows), args.out.as_deref())?;
    Ok(())
}

pub fn dimension(args: &ParamArgs) -> Result<(), Failure> {
    let value = match args.kind {
        Kind::Cantor => {
            check_param(Kind::Cantor, args.alpha)?;
            dimension_cantor(args.alpha)
        }
        Kind::Koch => dimension_koch(args.alpha, args.tol)?,
    };
    println!("{}", sig12(value));
    Ok(())
}

fn parse_point(s: &str) -> Result<Point, Failure> {
    let bad = || Failure::Usage(format!("point must be x,y, got {s:?}"));
    let (x, y) = s.split_once(',').ok_or_else(bad)?;
    let x: f64 = x.trim().parse().map_err(|_| bad())?;
    let y: f64 = y.trim().parse().map_err(|_| bad())?;
    Ok(Point::new(x, y))
}

pub fn qh_dist(args: &QhDistArgs) -> Result<(), Failure> {
    let x = parse_point(&args.from)?;
    let y = parse_point(&args.to)?;
    let domain: Box<dyn DomainOracle> = match args.kind {
        DistKind::Cantor => Box::new(CantorDomain::new(args.alpha)?),
        DistKind::Koch => Box::new(KochDomain::new(args.alpha)?),
        DistKind::Punctured => Box::new(PuncturedPlane::new(Point::ORIGIN)),
    };
    for p in [x, y] {
        if !domain.contains(p) {
            return Err(Failure::Usage(format!("point ({}, {}) is not in the domain", p.x, p.y)));
        }
    }
    let est = qh_distance_upper(domain.as_ref(), x, y, args.h, args.refine)?;
    let mut report = String::new();
    for (h, v) in &est.refinement_history {
        let _ = writeln!(report, "h_factor {} value {}", sig12(*h), sig12(*v));
    }
    let _ = writeln!(report, "upper_bound {}", sig12(est.value));
    if args.kind == DistKind::Punctured {
        let exact = PuncturedPlane::new(Point::ORIGIN).qh_distance(x, y)?;
        let _ = writeln!(report, "exact {}", sig12(exact));
    }
    print!("{report}");
    Ok(())
}

fn check_path_n(n: i64) -> Result<usize, Failure> {
    if (1..=MAX_PATH_N).contains(&n) {
        Ok(n as usize)
    } else {
        Err(Failure::Usage(format!("n must lie in 1..={MAX_PATH_N}, got {n}")))
    }
}

pub fn path_check(args: &PathCheckArgs) -> Result<(), Failure> {
    check_param(args.kind, args.alpha)?;
    let n = check_path_n(args.n)?;
    let (numeric, lower, upper) = match args.kind {
        Kind::Cantor => {
            let d = CantorDomain::new(args.alpha)?;
            let numeric = qh_length(&d.qhbc_upper_path(n)?, &d, args.tol)?;
            (
                numeric,
                cantor_path_lower_bound(args.alpha, n),
                cantor_path_upper_bound(args.alpha, n),
            )
        }
        Kind::Koch => {
            let d = KochDomain::new(args.alpha)?;
            let numeric = qh_length(&d.qhbc_upper_path(n)?, &d, args.tol)?;
            let first = Curve::polyline(&[d.chain_points(0).x, d.chain_points(1).x])?;
            let first_leg = qh_length(&first, &d, args.tol)?;
            (
                numeric,
                koch_path_lower_bound(args.alpha, n),
                koch_path_upper_bound(args.alpha, first_leg, n),
            )
        }
    };
    println!("numeric {}", sig12(numeric));
    println!("lower {}", sig12(lower));
    println!("upper {}", sig12(upper));
    if lower - BRACKET_SLACK <= numeric && numeric <= upper + BRACKET_SLACK {
        println!("pass");
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "path length {numeric} outside [{lower}, {upper}]"
        )))
    }
}

fn report_family<D: DomainOracle + ?Sized>(
    domain: &D,
    family: &[(Point, Curve)],
    step: f64,
    out: &mut String,
) -> Result<f64, Failure> {
    let reports = john_family_reports(domain, family, step)?;
    let mut worst: f64 = 0.0;
    for ((p, _), r) in family.iter().zip(&reports) {
        let _ = writeln!(
            out,
            "point {},{} constant {}",
            sig12(p.x),
            sig12(p.y),
            sig12(r.curve_constant)
        );
        worst = worst.max(r.curve_constant);
    }
    Ok(worst)
}

pub fn john_check(args: &JohnArgs) -> Result<(), Failure> {
    check_param(args.kind, args.alpha)?;
    if args.n < 1 {
        return Err(Failure::Usage(format!("n must be at least 1, got {}", args.n)));
    }
    let n = args.n as usize;
    let mut out = String::new();
    let (worst, claimed) = match args.kind {
        Kind::Cantor => {
            let d = CantorDomain::new(args.alpha)?;
            let (center, claimed) = if args.alpha < 1.0 / 3.0 {
                (JohnCenter::Shifted, 3.0 / args.alpha)
            } else {
                (JohnCenter::Origin, 4.37 / args.alpha)
            };
            let family = d.john_family(center, n)?;
            (report_family(&d, &family, args.step, &mut out)?, claimed)
        }
        Kind::Koch => {
            let d = KochDomain::new(args.alpha)?;
            let family = d.john_family(n)?;
            let worst = report_family(&d, &family, args.step, &mut out)?;
            let mut corner_worst: f64 = 0.0;
            for f in [0.9, 0.99, 0.999] {
                let (_, curve) = d.corner_witness(f)?;
                let r = curve_john_constant(&d, &curve, args.step)?;
                let _ = writeln!(out, "corner {} constant {}", sig12(f), sig12(r.curve_constant));
                corner_worst = corner_worst.max(r.curve_constant);
            }
            (worst.max(corner_worst), john_constant_koch(args.alpha))
        }
    };
    let _ = writeln!(out, "claimed {} worst {}", sig12(claimed), sig12(worst));
    print!("{out}");
    if worst <= claimed * (1.0 + CLAIM_SLACK) {
        println!("pass");
        Ok(())
    } else {
        Err(Failure::Check(format!("constant {worst} exceeds {claimed}")))
    }
}

pub fn render(args: &RenderArgs) -> Result<(), Failure> {
    check_param(args.kind, args.alpha)?;
    if args.depth > MAX_RENDER_DEPTH {
        return Err(Failure::Usage(format!(
            "depth must be at most {MAX_RENDER_DEPTH}, got {}",
            args.depth
        )));
    }
    let n = match args.n {
        0 => None,
        n => Some(check_path_n(n)?),
    };
    let svg = match args.kind {
        Kind::Cantor => {
            let d = CantorDomain::new(args.alpha)?;
            let path = n.map(|n| d.qhbc_upper_path(n)).transpose()?;
            render_cantor(&d, args.depth, path.as_ref())
        }
        Kind::Koch => {
            let d = KochDomain::new(args.alpha)?;
            let path = n.map(|n| d.qhbc_upper_path(n)).transpose()?;
            render_koch(&d, args.depth, path.as_ref())?
        }
    };
    emit(&svg, args.out.as_deref())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("0.01:0.99:0.01").unwrap();
        assert_eq!(g.len(), 99);
        assert_eq!(g[6], 0.07);
        assert_eq!(*g.last().unwrap(), 0.99);
        assert_eq!(parse_grid("0.5:0.5:0.1").unwrap(), vec![0.5]);
        assert!(parse_grid("0.6:0.5:0.1").unwrap().is_empty());
        assert!(parse_grid("0.1:0.5").is_err());
        assert!(parse_grid("0.1:0.5:0").is_err());
    }
}
