//! Multi-anchor hop-count virtual coordinates, their aligned (averaged)
//! variant, and naming-uniqueness measurements.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::topology::{bfs_hops, Position, Topology};
use crate::NodeId;

/// Integer virtual coordinates: `coords[v][i]` is the hop distance from
/// anchor `i` to node `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateAssignment {
    anchors: Vec<NodeId>,
    coords: Vec<Vec<u32>>,
}

impl CoordinateAssignment {
    pub fn anchors(&self) -> &[NodeId] {
        &self.anchors
    }

    pub fn dimensions(&self) -> usize {
        self.anchors.len()
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, v: NodeId) -> &[u32] {
        &self.coords[v]
    }

    /// Keeps only the first `k` dimensions.
    pub fn prefix(&self, k: usize) -> CoordinateAssignment {
        CoordinateAssignment {
            anchors: self.anchors[..k].to_vec(),
            coords: self.coords.iter().map(|c| c[..k].to_vec()).collect(),
        }
    }

    /// Appends one dimension anchored at `anchor`.
    pub fn with_anchor(&self, t: &Topology, anchor: NodeId) -> Result<CoordinateAssignment> {
        let mut anchors = self.anchors.clone();
        anchors.push(anchor);
        assign_vcs(t, &anchors)
    }

    /// One line per node: `id c1 c2 ... ck`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, c) in self.coords.iter().enumerate() {
            let _ = write!(out, "{id}");
            for v in c {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Real-valued coordinates after neighborhood averaging.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedAssignment {
    anchors: Vec<NodeId>,
    coords: Vec<Vec<f64>>,
}

impl AlignedAssignment {
    pub fn anchors(&self) -> &[NodeId] {
        &self.anchors
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, v: NodeId) -> &[f64] {
        &self.coords[v]
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, c) in self.coords.iter().enumerate() {
            let _ = write!(out, "{id}");
            for v in c {
                let _ = write!(out, " {v:.6}");
            }
            out.push('\n');
        }
        out
    }
}

fn check_anchor_ids(t: &Topology, anchors: &[NodeId]) -> Result<()> {
    let mut seen = HashSet::with_capacity(anchors.len());
    for &a in anchors {
        if a >= t.node_count() {
            return Err(Error::invalid(format!("anchor {a} is not a node (N = {})", t.node_count())));
        }
        if !seen.insert(a) {
            return Err(Error::invalid(format!("duplicate anchor {a}")));
        }
    }
    Ok(())
}

/// Hop-count VCS with one dimension per anchor, in the given order.
pub fn assign_vcs(t: &Topology, anchors: &[NodeId]) -> Result<CoordinateAssignment> {
    if anchors.is_empty() {
        return Err(Error::invalid("at least one anchor is required"));
    }
    check_anchor_ids(t, anchors)?;
    let n = t.node_count();
    let mut coords = vec![Vec::with_capacity(anchors.len()); n];
    for &a in anchors {
        let hops = bfs_hops(t, a);
        let unreachable: Vec<NodeId> = (0..n).filter(|&v| hops[v].is_none()).collect();
        if !unreachable.is_empty() {
            return Err(Error::Disconnected { root: a, unreachable });
        }
        for (c, h) in coords.iter_mut().zip(hops) {
            c.push(h.unwrap_or_default());
        }
    }
    Ok(CoordinateAssignment {
        anchors: anchors.to_vec(),
        coords,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnchorStrategy {
    /// Nodes nearest the corners of the deployment's bounding box, in the
    /// order bottom-left, bottom-right, top-right, top-left.
    Corners,
    Random,
    /// Nodes nearest the centroid of the bounding box, closest first.
    Center,
    Given(Vec<NodeId>),
}

impl FromStr for AnchorStrategy {
    type Err = Error;

    /// `corner(s)`, `random`, `center`, or a comma list of node ids.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corner" | "corners" => Ok(AnchorStrategy::Corners),
            "random" => Ok(AnchorStrategy::Random),
            "center" | "centre" => Ok(AnchorStrategy::Center),
            list => list
                .split(',')
                .map(|v| v.trim().parse::<NodeId>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(AnchorStrategy::Given)
                .map_err(|_| Error::invalid(format!("unknown anchor strategy {s:?}"))),
        }
    }
}

impl AnchorStrategy {
    pub fn name(&self) -> String {
        match self {
            AnchorStrategy::Corners => "corner".into(),
            AnchorStrategy::Random => "random".into(),
            AnchorStrategy::Center => "center".into(),
            AnchorStrategy::Given(ids) => ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
        }
    }
}

fn nearest_to(t: &Topology, target: Position, exclude: &[NodeId]) -> Option<NodeId> {
    (0..t.node_count())
        .filter(|v| !exclude.contains(v))
        .min_by(|&a, &b| {
            let da = t.position(a).distance_sq(&target);
            let db = t.position(b).distance_sq(&target);
            da.total_cmp(&db).then(a.cmp(&b))
        })
}

pub fn select_anchors(t: &Topology, strategy: &AnchorStrategy, k: usize, seed: u64) -> Result<Vec<NodeId>> {
    let n = t.node_count();
    if let AnchorStrategy::Given(ids) = strategy {
        check_anchor_ids(t, ids)?;
        return Ok(ids.clone());
    }
    if k == 0 || k > n {
        return Err(Error::invalid(format!("anchor count {k} must be in 1..={n}")));
    }
    let (lo, hi) = t.bounds();
    match strategy {
        AnchorStrategy::Corners => {
            if k > 4 {
                return Err(Error::invalid("corner strategy supports at most 4 anchors"));
            }
            let corners = [
                Position::new(lo.x, lo.y),
                Position::new(hi.x, lo.y),
                Position::new(hi.x, hi.y),
                Position::new(lo.x, hi.y),
            ];
            let mut picked = Vec::with_capacity(k);
            for c in &corners[..k] {
                let v = nearest_to(t, *c, &picked).expect("k <= n");
                picked.push(v);
            }
            Ok(picked)
        }
        AnchorStrategy::Center => {
            let centroid = Position::new((lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0);
            let mut picked = Vec::with_capacity(k);
            while picked.len() < k {
                let v = nearest_to(t, centroid, &picked).expect("k <= n");
                picked.push(v);
            }
            Ok(picked)
        }
        AnchorStrategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(rand::seq::index::sample(&mut rng, n, k).into_vec())
        }
        AnchorStrategy::Given(_) => unreachable!(),
    }
}

/// Replaces every node's vector with the mean over its closed neighborhood,
/// `iterations` times, each pass reading only the previous pass's values.
pub fn align_coordinates(a: &CoordinateAssignment, t: &Topology, iterations: usize) -> AlignedAssignment {
    let mut cur: Vec<Vec<f64>> = a
        .coords
        .iter()
        .map(|c| c.iter().map(|&h| f64::from(h)).collect())
        .collect();
    let dims = a.dimensions();
    for _ in 0..iterations {
        let next = (0..cur.len())
            .map(|v| {
                let nbrs = t.neighbors(v);
                let count = (nbrs.len() + 1) as f64;
                (0..dims)
                    .map(|i| {
                        let sum = cur[v][i] + nbrs.iter().map(|&u| cur[u][i]).sum::<f64>();
                        sum / count
                    })
                    .collect()
            })
            .collect();
        cur = next;
    }
    AlignedAssignment {
        anchors: a.anchors.clone(),
        coords: cur,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
}

impl Metric {
    /// A value monotone in the true distance; squared length for Euclidean.
    /// Greedy comparisons use this to avoid `sqrt` rounding collapsing
    /// distinct distances.
    pub fn rank(self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum(),
            Metric::Manhattan => p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum(),
        }
    }

    pub fn eval(self, p: &[f64], q: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => self.rank(p, q).sqrt(),
            Metric::Manhattan => self.rank(p, q),
        }
    }
}

pub fn distance(p: &[f64], q: &[f64], metric: Metric) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::invalid(format!(
            "coordinate length mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(metric.eval(p, q))
}

/// Number of distinct coordinate vectors.
pub fn uniqueness_degree(a: &CoordinateAssignment) -> usize {
    a.coords.iter().map(Vec::as_slice).collect::<HashSet<_>>().len()
}

/// Largest `k` such that the VCS on the first `k` anchors of
/// `anchor_sequence` has strictly more distinct vectors than the one on the
/// first `k - 1` (zero anchors count as one shared vector). This is an
/// estimate tied to the given sequence, not a maximum over anchor sets.
pub fn estimate_dimension_degradation(t: &Topology, anchor_sequence: &[NodeId]) -> Result<usize> {
    if anchor_sequence.is_empty() || t.is_empty() {
        return Ok(0);
    }
    let full = assign_vcs(t, anchor_sequence)?;
    let mut prev = 1usize;
    let mut best = 0;
    for k in 1..=anchor_sequence.len() {
        let ud = full.coords.iter().map(|c| &c[..k]).collect::<HashSet<_>>().len();
        if ud > prev {
            best = k;
        }
        prev = ud;
    }
    Ok(best)
}
