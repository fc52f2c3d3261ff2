//! Upper bounds on quasihyperbolic distance from a Whitney-type metric graph.
//!
//! Nodes are centers of quadtree cells whose diameter is at most
//! `h_factor · dist(center, ∂D)`. Two nodes are joined when they are close
//! relative to their cell sizes and the straight segment between them is
//! covered by their two boundary-free discs. The shortest graph path is then
//! improved by moving its interior vertices, and its length is re-evaluated
//! with adaptive quadrature, so every reported value is the quasihyperbolic
//! length of an actual polyline in the domain.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rayon::prelude::*;

use crate::domain::DomainOracle;
use crate::error::{QhError, Result};
use crate::geometry::{Curve, Point};
use crate::quadrature::qh_length;

/// Upper limit on graph size during refinement.
pub const NODE_BUDGET: usize = 1_000_000;

/// Nodes closer than this multiple of the larger cell side are candidate neighbours.
const NEIGHBOUR_REACH: f64 = 3.0;

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Quasihyperbolic length of `[p, q]` by 5-point Gauss–Legendre on `panels` equal panels.
fn segment_weight<D: DomainOracle + ?Sized>(domain: &D, p: Point, q: Point, panels: usize) -> f64 {
    let len = p.dist(q);
    let h = 1.0 / panels as f64;
    let mut sum = 0.0;
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let z = p.lerp(q, mid + 0.5 * h * x);
            sum += w * 0.5 * h / domain.dist_to_boundary(z);
        }
    }
    sum * len
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    center: Point,
    side: f64,
    level: u32,
}

enum CellFate {
    Keep,
    Split,
    Drop,
}

/// Weighted graph over Whitney-type samples of a domain.
#[derive(Debug, Clone)]
pub struct QhGraph {
    nodes: Vec<Point>,
    dists: Vec<f64>,
    sides: Vec<f64>,
    adjacency: Vec<Vec<(usize, f64)>>,
    h_factor: f64,
    seeds: Vec<usize>,
}

impl QhGraph {
    /// Samples `domain` with cells of diameter at most `h_factor` times the
    /// boundary distance and adds `seeds` as extra nodes (their indices are
    /// returned by [`QhGraph::seed_indices`]).
    pub fn build<D: DomainOracle + ?Sized>(domain: &D, h_factor: f64, seeds: &[Point]) -> Result<QhGraph> {
        if !(h_factor > 0.0 && h_factor < 1.0) {
            return Err(QhError::InvalidParam(format!(
                "h_factor must lie in (0, 1), got {h_factor}"
            )));
        }
        let mut seed_dist = f64::INFINITY;
        for &s in seeds {
            if !domain.contains(s) {
                return Err(QhError::OutsideDomain(s));
            }
            seed_dist = seed_dist.min(domain.dist_to_boundary(s));
        }
        let radius = domain.bounding_radius();
        let min_side = if seed_dist.is_finite() {
            0.25 * h_factor * seed_dist
        } else {
            radius * 1e-3
        };

        let mut frontier = vec![Cell {
            center: domain.bounding_center(),
            side: 2.0 * radius,
            level: 0,
        }];
        let mut cells: Vec<(Cell, f64)> = Vec::new();
        while !frontier.is_empty() {
            let judged: Vec<(Cell, f64, CellFate)> = frontier
                .par_iter()
                .map(|&c| {
                    let (d, fate) = judge(domain, c, h_factor, min_side);
                    (c, d, fate)
                })
                .collect();
            let mut next = Vec::new();
            for (c, d, fate) in judged {
                match fate {
                    CellFate::Keep => cells.push((c, d)),
                    CellFate::Drop => {}
                    CellFate::Split => {
                        let q = 0.25 * c.side;
                        for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                            next.push(Cell {
                                center: c.center + Point::new(sx * q, sy * q),
                                side: 0.5 * c.side,
                                level: c.level + 1,
                            });
                        }
                    }
                }
            }
            if cells.len() + next.len() > NODE_BUDGET {
                return Err(QhError::InvalidParam(format!(
                    "graph for h_factor {h_factor} exceeds {NODE_BUDGET} nodes"
                )));
            }
            frontier = next;
        }

        let mut nodes: Vec<Point> = cells.iter().map(|(c, _)| c.center).collect();
        let mut dists: Vec<f64> = cells.iter().map(|&(_, d)| d).collect();
        let mut sides: Vec<f64> = cells.iter().map(|(c, _)| c.side).collect();
        let levels: Vec<u32> = cells.iter().map(|(c, _)| c.level).collect();
        let root_side = 2.0 * radius;

        let mut grids: Vec<HashMap<(i64, i64), Vec<usize>>> = Vec::new();
        for (i, (&p, &level)) in nodes.iter().zip(&levels).enumerate() {
            let level = level as usize;
            if grids.len() <= level {
                grids.resize_with(level + 1, HashMap::new);
            }
            let bucket = NEIGHBOUR_REACH * root_side / (1u64 << level) as f64;
            grids[level].entry(bucket_key(p, bucket)).or_default().push(i);
        }

        let candidate_lists: Vec<Vec<usize>> = (0..nodes.len())
            .into_par_iter()
            .map(|i| {
                let p = nodes[i];
                let mut out = Vec::new();
                for (level, grid) in grids.iter().enumerate().take(levels[i] as usize + 1) {
                    let bucket = NEIGHBOUR_REACH * root_side / (1u64 << level) as f64;
                    let (bx, by) = bucket_key(p, bucket);
                    for dx in -1..=1 {
                        for dy in -1..=1 {
                            let Some(members) = grid.get(&(bx + dx, by + dy)) else {
                                continue;
                            };
                            for &j in members {
                                if level as u32 == levels[i] && j <= i {
                                    continue;
                                }
                                let q = nodes[j];
                                if p.dist(q) <= bucket && p.dist(q) < dists[i] + dists[j] {
                                    out.push(j);
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();

        let mut pairs: Vec<(usize, usize)> = candidate_lists
            .into_iter()
            .enumerate()
            .flat_map(|(i, list)| list.into_iter().map(move |j| (i.min(j), i.max(j))))
            .collect();

        let mut seed_ids = Vec::with_capacity(seeds.len());
        for &s in seeds {
            let d = domain.dist_to_boundary(s);
            let side = h_factor * d / std::f64::consts::SQRT_2;
            let id = nodes.len();
            for j in 0..nodes.len() {
                let reach = NEIGHBOUR_REACH * side.max(sides[j]);
                let gap = s.dist(nodes[j]);
                if gap <= reach && gap < d + dists[j] {
                    pairs.push((j, id));
                }
            }
            nodes.push(s);
            dists.push(d);
            sides.push(side);
            seed_ids.push(id);
        }
        pairs.sort_unstable();
        pairs.dedup();

        let weights: Vec<f64> = pairs
            .par_iter()
            .map(|&(i, j)| segment_weight(domain, nodes[i], nodes[j], 2))
            .collect();
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (&(i, j), &w) in pairs.iter().zip(&weights) {
            if i != j && w.is_finite() {
                adjacency[i].push((j, w));
                adjacency[j].push((i, w));
            }
        }
        Ok(QhGraph {
            nodes,
            dists,
            sides,
            adjacency,
            h_factor,
            seeds: seed_ids,
        })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn h_factor(&self) -> f64 {
        self.h_factor
    }

    /// Node indices of the seeds passed to [`QhGraph::build`], in order.
    pub fn seed_indices(&self) -> &[usize] {
        &self.seeds
    }

    /// Boundary distance at node `i`.
    pub fn node_distance(&self, i: usize) -> f64 {
        self.dists[i]
    }

    /// Side of the cell a node stands for.
    pub fn cell_side(&self, i: usize) -> f64 {
        self.sides[i]
    }

    /// Dijkstra from `from` to `to`; ties are broken by node index.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<(f64, Vec<usize>)> {
        let n = self.nodes.len();
        let mut cost = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        cost[from] = 0.0;
        heap.push(Visit { cost: 0.0, node: from });
        while let Some(Visit { cost: c, node }) = heap.pop() {
            if c > cost[node] {
                continue;
            }
            if node == to {
                break;
            }
            for &(next, w) in &self.adjacency[node] {
                let nc = c + w;
                if nc < cost[next] || (nc == cost[next] && node < prev[next]) {
                    cost[next] = nc;
                    prev[next] = node;
                    heap.push(Visit { cost: nc, node: next });
                }
            }
        }
        if !cost[to].is_finite() {
            return None;
        }
        let mut path = vec![to];
        let mut at = to;
        while at != from {
            at = prev[at];
            path.push(at);
        }
        path.reverse();
        Some((cost[to], path))
    }

    /// Graph distance between two nodes.
    pub fn distance(&self, from: usize, to: usize) -> Option<f64> {
        self.shortest_path(from, to).map(|(c, _)| c)
    }
}

fn judge<D: DomainOracle + ?Sized>(domain: &D, c: Cell, h_factor: f64, min_side: f64) -> (f64, CellFate) {
    let d = domain.dist_to_boundary(c.center);
    let diam = c.side * std::f64::consts::SQRT_2;
    if !domain.contains(c.center) {
        let fate = if d >= 0.5 * diam || c.side <= min_side {
            CellFate::Drop
        } else {
            CellFate::Split
        };
        return (d, fate);
    }
    if diam <= h_factor * d {
        (d, CellFate::Keep)
    } else if c.side > min_side {
        (d, CellFate::Split)
    } else if d > diam {
        (d, CellFate::Keep)
    } else {
        (d, CellFate::Drop)
    }
}

fn bucket_key(p: Point, bucket: f64) -> (i64, i64) {
    ((p.x / bucket).floor() as i64, (p.y / bucket).floor() as i64)
}

#[derive(Debug, Clone, Copy)]
struct Visit {
    cost: f64,
    node: usize,
}

impl PartialEq for Visit {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Visit {}

impl PartialOrd for Visit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Visit {
    // min-heap on (cost, node)
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Result of [`qh_distance_upper`].
#[derive(Debug, Clone, PartialEq)]
pub struct QhEstimate {
    /// Upper bound on the quasihyperbolic distance.
    pub value: f64,
    /// `(h_factor, best value so far)` for each refinement level.
    pub refinement_history: Vec<(f64, f64)>,
    /// Vertices of the polyline realizing `value`.
    pub path: Vec<Point>,
}

/// Upper bound on `k_D(x, y)`, refining the graph by halving `h_factor`
/// until the relative change drops below `tol` or the node budget is hit.
pub fn qh_distance_upper<D: DomainOracle + ?Sized>(
    domain: &D,
    x: Point,
    y: Point,
    h_factor: f64,
    tol: f64,
) -> Result<QhEstimate> {
    qh_distance_upper_with_waypoints(domain, x, y, &[], h_factor, tol)
}

/// As [`qh_distance_upper`], with extra graph nodes at `waypoints`.
pub fn qh_distance_upper_with_waypoints<D: DomainOracle + ?Sized>(
    domain: &D,
    x: Point,
    y: Point,
    waypoints: &[Point],
    h_factor: f64,
    tol: f64,
) -> Result<QhEstimate> {
    if !(tol > 0.0) {
        return Err(QhError::InvalidParam(format!("tol must be positive, got {tol}")));
    }
    if !(h_factor > 0.0 && h_factor < 1.0) {
        return Err(QhError::InvalidParam(format!(
            "h_factor must lie in (0, 1), got {h_factor}"
        )));
    }
    for p in [x, y] {
        if !domain.contains(p) {
            return Err(QhError::OutsideDomain(p));
        }
    }
    if x == y {
        return Ok(QhEstimate {
            value: 0.0,
            refinement_history: vec![(h_factor, 0.0)],
            path: vec![x],
        });
    }
    let quad_tol = 1e-9;
    let mut seeds = vec![x, y];
    seeds.extend_from_slice(waypoints);

    let mut h = h_factor;
    let mut best: Option<(f64, Vec<Point>)> = None;
    let mut history = Vec::new();
    let mut last_nodes = 0usize;
    loop {
        if last_nodes > 0 && 4 * last_nodes > NODE_BUDGET {
            break;
        }
        let graph = match QhGraph::build(domain, h, &seeds) {
            Ok(g) => g,
            Err(QhError::InvalidParam(_)) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        last_nodes = graph.node_count();
        let ids = graph.seed_indices();
        let found = graph.shortest_path(ids[0], ids[1]);
        let previous = best.as_ref().map(|(v, _)| *v);
        if let Some((_, path)) = found {
            let mut pts: Vec<Point> = path.iter().map(|&i| graph.nodes[i]).collect();
            smooth_path(domain, &mut pts);
            let value = qh_length(&Curve::polyline(&pts)?, domain, quad_tol)?;
            if previous.is_none_or(|v| value < v) {
                best = Some((value, pts));
            }
        }
        if let Some((value, _)) = &best {
            history.push((h, *value));
            if let Some(prev) = previous {
                if (prev - value).abs() <= tol * value.abs() {
                    break;
                }
            }
        }
        h *= 0.5;
    }
    match best {
        Some((value, path)) => Ok(QhEstimate {
            value,
            refinement_history: history,
            path,
        }),
        None => Err(QhError::Disconnected),
    }
}

/// Moves interior vertices of a polyline to shorten its quasihyperbolic
/// length, keeping every segment covered by its endpoint discs.
fn smooth_path<D: DomainOracle + ?Sized>(domain: &D, pts: &mut [Point]) {
    if pts.len() < 3 {
        return;
    }
    let dirs: [Point; 8] = std::array::from_fn(|k| {
        Point::from_polar(1.0, k as f64 * std::f64::consts::FRAC_PI_4)
    });
    let valid = |p: Point, q: Point| {
        p.dist(q) < domain.dist_to_boundary(p) + domain.dist_to_boundary(q)
    };
    let local = |p: Point, v: Point, q: Point| segment_weight(domain, p, v, 4) + segment_weight(domain, v, q, 4);
    for _sweep in 0..40 {
        let mut gain = 0.0;
        for i in 1..pts.len() - 1 {
            let (p, q) = (pts[i - 1], pts[i + 1]);
            let mut v = pts[i];
            let mut cost = local(p, v, q);
            let mut step = 0.25 * v.dist(p).min(v.dist(q));
            let floor = 1e-4 * step;
            while step > floor {
                let mut moved = false;
                for d in &dirs {
                    let cand = v + *d * step;
                    if !domain.contains(cand) || !valid(p, cand) || !valid(cand, q) {
                        continue;
                    }
                    let c = local(p, cand, q);
                    if c < cost {
                        gain += cost - c;
                        cost = c;
                        v = cand;
                        moved = true;
                        break;
                    }
                }
                if !moved {
                    step *= 0.5;
                }
            }
            pts[i] = v;
        }
        if gain < 1e-10 {
            break;
        }
    }
}

/// Quasihyperbolic length of the polyline through `waypoints`.
pub fn qh_length_of_path_nodes<D: DomainOracle + ?Sized>(domain: &D, waypoints: &[Point], tol: f64) -> Result<f64> {
    qh_length(&Curve::polyline(waypoints)?, domain, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::PuncturedPlane;
    use std::f64::consts::{E, FRAC_PI_2};

    #[test]
    fn same_point_is_zero() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let p = Point::new(1.0, 1.0);
        let est = qh_distance_upper(&g, p, p, 0.5, 1e-2).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn quarter_turn() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let est = qh_distance_upper(&g, Point::new(1.0, 0.0), Point::new(0.0, 1.0), 0.5, 1e-2).unwrap();
        assert!(est.value >= FRAC_PI_2 - 1e-3);
        assert!(est.value <= FRAC_PI_2 * 1.02, "{est:?}");
        for w in est.refinement_history.windows(2) {
            assert!(w[1].1 <= w[0].1);
        }
    }

    #[test]
    fn radial_segment() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let est = qh_distance_upper(&g, Point::new(1.0, 0.0), Point::new(E, 0.0), 0.5, 1e-2).unwrap();
        assert!((est.value - 1.0).abs() <= 0.02);
    }

    #[test]
    fn outside_point_rejected() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        assert!(matches!(
            qh_distance_upper(&g, Point::ORIGIN, Point::new(1.0, 0.0), 0.5, 1e-2),
            Err(QhError::OutsideDomain(_))
        ));
    }

    #[test]
    fn path_nodes() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let p = Point::new(1.0, 0.0);
        assert_eq!(qh_length_of_path_nodes(&g, &[p, p], 1e-9).unwrap(), 0.0);
        let v = qh_length_of_path_nodes(&g, &[p, Point::new(E, 0.0)], 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gauss_weight_on_radial_segment() {
        let g = PuncturedPlane::new(Point::ORIGIN);
        let w = segment_weight(&g, Point::new(1.0, 0.0), Point::new(1.2, 0.0), 2);
        assert!((w - 1.2f64.ln()).abs() < 1e-10);
    }
}
