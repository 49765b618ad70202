//! Node deployments, unit-disk connectivity, the hop-count oracle and
//! planarized subgraphs for face routing.
//!
//! Generated coordinates are snapped to a 1e-6 grid so that a scenario file
//! written with six decimals reloads to bit-identical positions, and
//! therefore to an identical adjacency.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_sq(&self, other: &Position) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn distance(&self, other: &Position) -> f64 {
        self.distance_sq(other).sqrt()
    }
}

/// Rectangular deployment area anchored at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Area {
    pub width: f64,
    pub height: f64,
}

impl Area {
    pub const fn new(width: f64, height: f64) -> Self {
        Self { width, height }
    }

    fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.height > 0.0) || !self.width.is_finite() || !self.height.is_finite() {
            return Err(Error::invalid(format!(
                "area dimensions must be positive, got {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    /// True when `p` lies in the rectangular notch cut out of the C-shaped
    /// region: the right 60% of the width over the middle third of the height.
    pub fn in_c_notch(&self, p: &Position) -> bool {
        p.x >= 0.4 * self.width && p.y >= self.height / 3.0 && p.y <= 2.0 * self.height / 3.0
    }
}

impl Default for Area {
    fn default() -> Self {
        Self::new(100.0, 100.0)
    }
}

impl FromStr for Area {
    type Err = Error;

    /// Parses `WxH`, e.g. `100x100`.
    fn from_str(s: &str) -> Result<Self> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| Error::invalid(format!("area must look like WxH, got {s:?}")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad area dimension {v:?}")))
        };
        let area = Area::new(parse(w)?, parse(h)?);
        area.validate()?;
        Ok(area)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Deployment {
    #[default]
    Uniform,
    CShape,
}

impl Deployment {
    pub fn generate(self, n: usize, area: Area, seed: u64) -> Result<Vec<Position>> {
        match self {
            Deployment::Uniform => generate_uniform(n, area, seed),
            Deployment::CShape => generate_c_shape(n, area, seed),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Deployment::Uniform => "uniform",
            Deployment::CShape => "cshape",
        }
    }
}

impl FromStr for Deployment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Deployment::Uniform),
            "cshape" | "c-shape" | "c" => Ok(Deployment::CShape),
            other => Err(Error::invalid(format!("unknown deployment {other:?}"))),
        }
    }
}

fn quantize(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

fn sample_point(rng: &mut ChaCha8Rng, area: Area) -> Position {
    let x = quantize(rng.gen_range(0.0..=area.width));
    let y = quantize(rng.gen_range(0.0..=area.height));
    Position::new(x, y)
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("node count must be at least 1"));
    }
    Ok(())
}

/// `n` positions drawn independently and uniformly over `area`.
pub fn generate_uniform(n: usize, area: Area, seed: u64) -> Result<Vec<Position>> {
    check_count(n)?;
    area.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| sample_point(&mut rng, area)).collect())
}

/// `n` positions uniform over the C region, sampled by rejection.
pub fn generate_c_shape(n: usize, area: Area, seed: u64) -> Result<Vec<Position>> {
    check_count(n)?;
    area.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = sample_point(&mut rng, area);
        if !area.in_c_notch(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Immutable deployment plus its unit-disk adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    positions: Vec<Position>,
    radio_range: f64,
    adjacency: Vec<Vec<NodeId>>,
}

/// Builds the unit-disk graph: `u ~ v` iff `d(u, v) <= radio_range`.
pub fn build_topology(positions: Vec<Position>, radio_range: f64) -> Topology {
    let n = positions.len();
    let r2 = radio_range * radio_range;
    let mut adjacency = vec![Vec::new(); n];
    for u in 0..n {
        for v in (u + 1)..n {
            if positions[u].distance_sq(&positions[v]) <= r2 {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
    }
    // Both endpoints are pushed in increasing order of the outer index, so
    // every list is already sorted.
    Topology {
        positions,
        radio_range,
        adjacency,
    }
}

impl Topology {
    /// Builds a topology from an explicit edge list, bypassing the unit-disk
    /// rule. Used for hand-built fixtures; positions default to the origin.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for {n} nodes")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop on node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Topology {
            positions: vec![Position::new(0.0, 0.0); n],
            radio_range: 0.0,
            adjacency,
        })
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn radio_range(&self) -> f64 {
        self.radio_range
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn position(&self, v: NodeId) -> Position {
        self.positions[v]
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<NodeId>] {
        &self.adjacency
    }

    pub fn are_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / self.node_count() as f64
    }

    /// Axis-aligned bounding box of all positions as `(min, max)`.
    pub fn bounds(&self) -> (Position, Position) {
        let mut lo = Position::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Position::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.positions {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Scenario file text: `N RANGE` header, then `id x y` per node.
    pub fn to_scenario(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.node_count(), self.radio_range);
        for (id, p) in self.positions.iter().enumerate() {
            let _ = writeln!(out, "{id} {:.6} {:.6}", p.x, p.y);
        }
        out
    }

    pub fn from_scenario(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lineno, header) = lines.next().ok_or_else(|| Error::parse(1, "empty scenario"))?;
        let mut fields = header.split_whitespace();
        let n: usize = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::parse(lineno, "expected node count"))?;
        let range: f64 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::parse(lineno, "expected radio range"))?;
        if range.is_nan() || range <= 0.0 {
            return Err(Error::parse(lineno, "radio range must be positive"));
        }
        let mut positions: Vec<Option<Position>> = vec![None; n];
        for (lineno, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::parse(lineno, "expected `id x y`"));
            }
            let id: usize = f[0].parse().map_err(|_| Error::parse(lineno, "bad node id"))?;
            let x: f64 = f[1].parse().map_err(|_| Error::parse(lineno, "bad x"))?;
            let y: f64 = f[2].parse().map_err(|_| Error::parse(lineno, "bad y"))?;
            let slot = positions
                .get_mut(id)
                .ok_or_else(|| Error::parse(lineno, format!("node id {id} >= {n}")))?;
            if slot.replace(Position::new(x, y)).is_some() {
                return Err(Error::parse(lineno, format!("duplicate node id {id}")));
            }
        }
        let positions = positions
            .into_iter()
            .enumerate()
            .map(|(id, p)| p.ok_or_else(|| Error::parse(0, format!("missing node {id}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(build_topology(positions, range))
    }
}

/// Breadth-first hop distances from `src`; `None` for unreachable nodes.
pub fn bfs_hops(t: &Topology, src: NodeId) -> Vec<Option<u32>> {
    let mut dist = vec![None; t.node_count()];
    let mut queue = VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for &v in t.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn is_connected(t: &Topology) -> bool {
    t.is_empty() || bfs_hops(t, 0).iter().all(Option::is_some)
}

/// Nodes not reachable from node 0, ascending.
pub fn unreachable_from_root(t: &Topology) -> Vec<NodeId> {
    if t.is_empty() {
        return Vec::new();
    }
    bfs_hops(t, 0)
        .iter()
        .enumerate()
        .filter_map(|(v, d)| d.is_none().then_some(v))
        .collect()
}

/// Dense all-pairs hop-count matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopMatrix {
    n: usize,
    hops: Vec<u32>,
}

impl HopMatrix {
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Option<u32> {
        let h = self.hops[u * self.n + v];
        (h != Self::UNREACHABLE).then_some(h)
    }

    pub fn row(&self, u: NodeId) -> &[u32] {
        &self.hops[u * self.n..(u + 1) * self.n]
    }
}

pub fn all_pairs_shortest_hops(t: &Topology) -> HopMatrix {
    use rayon::prelude::*;

    let n = t.node_count();
    let mut hops = vec![HopMatrix::UNREACHABLE; n * n];
    if n > 0 {
        hops.par_chunks_mut(n).enumerate().for_each(|(src, row)| {
            for (slot, d) in row.iter_mut().zip(bfs_hops(t, src)) {
                if let Some(d) = d {
                    *slot = d;
                }
            }
        });
    }
    HopMatrix { n, hops }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Planarization {
    Gabriel,
    RelativeNeighborhood,
}

/// Crossing-free subgraph of a topology used by perimeter routing.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSubgraph {
    kind: Planarization,
    kept: Vec<Vec<NodeId>>,
}

impl PlanarSubgraph {
    pub fn kind(&self) -> Planarization {
        self.kind
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.kept[v]
    }

    pub fn node_count(&self) -> usize {
        self.kept.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.kept
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.kept.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn contains_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.kept[u].binary_search(&v).is_ok()
    }

    /// The kept edges as a stand-alone topology over the same positions.
    pub fn to_topology(&self, base: &Topology) -> Topology {
        Topology {
            positions: base.positions.clone(),
            radio_range: base.radio_range,
            adjacency: self.kept.clone(),
        }
    }
}

// Any witness for either rule is strictly closer to `u` than `v` is, and so
// is itself a neighbor of `u`; scanning `adj(u)` is exhaustive.
fn planarize(t: &Topology, kind: Planarization, has_witness: impl Fn(f64, f64, f64) -> bool) -> PlanarSubgraph {
    let kept = (0..t.node_count())
        .map(|u| {
            let pu = t.position(u);
            t.neighbors(u)
                .iter()
                .copied()
                .filter(|&v| {
                    let pv = t.position(v);
                    let duv = pu.distance_sq(&pv);
                    !t.neighbors(u).iter().any(|&w| {
                        w != v && {
                            let pw = t.position(w);
                            has_witness(duv, pu.distance_sq(&pw), pv.distance_sq(&pw))
                        }
                    })
                })
                .collect()
        })
        .collect();
    PlanarSubgraph { kind, kept }
}

/// Gabriel graph: keep `uv` unless some `w` lies strictly inside the circle
/// with diameter `uv`.
pub fn gabriel_graph(t: &Topology) -> PlanarSubgraph {
    planarize(t, Planarization::Gabriel, |duv, duw, dvw| duw + dvw < duv)
}

/// Relative neighborhood graph: keep `uv` unless some `w` is strictly closer
/// to both endpoints than they are to each other.
pub fn rng_graph(t: &Topology) -> PlanarSubgraph {
    planarize(t, Planarization::RelativeNeighborhood, |duv, duw, dvw| duw.max(dvw) < duv)
}

/// Twice the signed area of triangle `abc`; positive when counterclockwise.
pub fn orientation(a: Position, b: Position, c: Position) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Proper crossing of segments `ab` and `cd`: interiors intersect at a single
/// point and no endpoint lies on the other segment.
pub fn segments_cross(a: Position, b: Position, c: Position, d: Position) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(side: usize, spacing: f64) -> Vec<Position> {
        (0..side * side)
            .map(|i| Position::new((i % side) as f64 * spacing, (i / side) as f64 * spacing))
            .collect()
    }

    #[test]
    fn zero_nodes_rejected() {
        assert!(matches!(generate_uniform(0, Area::default(), 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(generate_c_shape(0, Area::default(), 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn uniform_positions_inside_area() {
        let pts = generate_uniform(1000, Area::default(), 7).unwrap();
        assert_eq!(pts.len(), 1000);
        assert!(pts.iter().all(|p| (0.0..=100.0).contains(&p.x) && (0.0..=100.0).contains(&p.y)));
    }

    #[test]
    fn generators_are_deterministic() {
        let a = generate_uniform(50, Area::default(), 99).unwrap();
        let b = generate_uniform(50, Area::default(), 99).unwrap();
        let bits = |v: &[Position]| v.iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&generate_uniform(50, Area::default(), 100).unwrap()));
        assert_eq!(
            generate_c_shape(40, Area::default(), 3).unwrap(),
            generate_c_shape(40, Area::default(), 3).unwrap()
        );
    }

    #[test]
    fn c_shape_avoids_notch() {
        let pts = generate_c_shape(150, Area::default(), 11).unwrap();
        assert_eq!(pts.len(), 150);
        assert!(!pts.iter().any(|p| p.x >= 40.0 && p.y > 33.3 && p.y < 66.7));
        let one = generate_c_shape(1, Area::default(), 0).unwrap();
        assert!(!Area::default().in_c_notch(&one[0]));
    }

    #[test]
    fn boundary_distance_is_connected() {
        let t = build_topology(vec![Position::new(0.0, 0.0), Position::new(3.0, 4.0)], 5.0);
        assert_eq!(t.neighbors(0), &[1]);
        let t = build_topology(vec![Position::new(0.0, 0.0), Position::new(3.0, 4.0)], 4.999_999);
        assert!(t.neighbors(0).is_empty());
    }

    #[test]
    fn grid_has_only_axis_edges() {
        let t = build_topology(grid(3, 1.0), 1.0);
        assert_eq!(t.edge_count(), 12);
        assert!(!t.are_adjacent(0, 4));
        assert!(t.are_adjacent(0, 1) && t.are_adjacent(0, 3));
    }

    #[test]
    fn single_node() {
        let t = build_topology(generate_uniform(1, Area::default(), 5).unwrap(), 10.0);
        assert!(t.neighbors(0).is_empty());
        assert!(is_connected(&t));
        assert_eq!(all_pairs_shortest_hops(&t).get(0, 0), Some(0));
    }

    #[test]
    fn two_far_nodes_disconnected() {
        let t = build_topology(vec![Position::new(0.0, 0.0), Position::new(50.0, 0.0)], 10.0);
        assert!(!is_connected(&t));
        assert_eq!(unreachable_from_root(&t), vec![1]);
        assert_eq!(all_pairs_shortest_hops(&t).get(0, 1), None);
    }

    #[test]
    fn chain_hops() {
        let t = Topology::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let m = all_pairs_shortest_hops(&t);
        assert_eq!(m.get(0, 2), Some(2));
        assert_eq!(m.get(2, 0), Some(2));
        assert_eq!(m.get(1, 1), Some(0));
    }

    #[test]
    fn pair_and_triangle_planarizations_keep_everything() {
        let pair = build_topology(vec![Position::new(0.0, 0.0), Position::new(1.0, 0.0)], 2.0);
        assert_eq!(gabriel_graph(&pair).edge_count(), 1);
        assert_eq!(rng_graph(&pair).edge_count(), 1);

        let h = 3f64.sqrt() / 2.0;
        let tri = build_topology(
            vec![Position::new(0.0, 0.0), Position::new(1.0, 0.0), Position::new(0.5, h)],
            1.5,
        );
        assert_eq!(gabriel_graph(&tri).edge_count(), 3);
    }

    #[test]
    fn gabriel_drops_edge_with_interior_witness() {
        // w sits right on the midpoint side of uv.
        let t = build_topology(
            vec![Position::new(0.0, 0.0), Position::new(2.0, 0.0), Position::new(1.0, 0.2)],
            3.0,
        );
        let gg = gabriel_graph(&t);
        assert!(!gg.contains_edge(0, 1));
        assert!(gg.contains_edge(0, 2) && gg.contains_edge(1, 2));
    }

    #[test]
    fn crossing_predicate() {
        let p = Position::new;
        assert!(segments_cross(p(0.0, 0.0), p(2.0, 2.0), p(0.0, 2.0), p(2.0, 0.0)));
        // Shared endpoint is not a crossing.
        assert!(!segments_cross(p(0.0, 0.0), p(2.0, 2.0), p(2.0, 2.0), p(3.0, 0.0)));
        assert!(!segments_cross(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(1.0, 1.0)));
    }

    #[test]
    fn area_parsing() {
        assert_eq!("100x50".parse::<Area>().unwrap(), Area::new(100.0, 50.0));
        assert!("100".parse::<Area>().is_err());
        assert!("0x10".parse::<Area>().is_err());
    }

    #[test]
    fn scenario_round_trip_is_exact() {
        let pts = generate_uniform(300, Area::default(), 42).unwrap();
        let t = build_topology(pts, 9.3);
        let back = Topology::from_scenario(&t.to_scenario()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn scenario_parse_errors() {
        assert!(Topology::from_scenario("").is_err());
        assert!(Topology::from_scenario("2 1.0\n0 0 0\n").is_err());
        assert!(Topology::from_scenario("1 1.0\n0 0 0\n0 1 1\n").is_err());
        assert!(Topology::from_scenario("1 -1\n0 0 0\n").is_err());
    }
}
