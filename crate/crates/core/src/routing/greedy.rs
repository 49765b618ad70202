use crate::coords::{AlignedAssignment, CoordinateAssignment, Metric};
use crate::topology::Topology;
use crate::NodeId;

use super::{drive, FailureReason, HopBudget, HopMode, Outcome, RouteResult, Walk};

/// Per-node coordinates plus the metric greedy forwarding compares them
/// with: geographic positions, integer VCS vectors or aligned vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateView {
    dims: usize,
    data: Vec<f64>,
    metric: Metric,
}

impl CoordinateView {
    pub fn geographic(t: &Topology) -> Self {
        let data = t.positions().iter().flat_map(|p| [p.x, p.y]).collect();
        Self {
            dims: 2,
            data,
            metric: Metric::Euclidean,
        }
    }

    pub fn vcs(a: &CoordinateAssignment, metric: Metric) -> Self {
        let data = (0..a.node_count())
            .flat_map(|v| a.coords(v).iter().map(|&h| f64::from(h)))
            .collect();
        Self {
            dims: a.dimensions(),
            data,
            metric,
        }
    }

    pub fn aligned(a: &AlignedAssignment, metric: Metric) -> Self {
        let data = (0..a.node_count()).flat_map(|v| a.coords(v).iter().copied()).collect();
        Self {
            dims: a.anchors().len(),
            data,
            metric,
        }
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn point(&self, v: NodeId) -> &[f64] {
        &self.data[v * self.dims..(v + 1) * self.dims]
    }

    /// Order-preserving stand-in for [`Self::distance`].
    pub fn rank(&self, u: NodeId, v: NodeId) -> f64 {
        self.metric.rank(self.point(u), self.point(v))
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> f64 {
        self.metric.eval(self.point(u), self.point(v))
    }
}

/// The neighbor of `current` closest to `dst` among those strictly closer
/// than `current` itself; lowest id on ties. `None` at a local minimum,
/// including when `current` shares `dst`'s coordinates.
pub fn greedy_next(t: &Topology, view: &CoordinateView, current: NodeId, dst: NodeId) -> Option<NodeId> {
    let mut best_rank = view.rank(current, dst);
    let mut best = None;
    for &n in t.neighbors(current) {
        let r = view.rank(n, dst);
        if r < best_rank {
            best_rank = r;
            best = Some(n);
        }
    }
    best
}

pub fn greedy_forward(
    t: &Topology,
    view: &CoordinateView,
    src: NodeId,
    dst: NodeId,
    budget: HopBudget,
) -> RouteResult {
    drive(Walk::new(src, budget), |w| {
        let cur = w.current();
        if cur == dst {
            return Ok(Some(Outcome::Delivered));
        }
        match greedy_next(t, view, cur, dst) {
            Some(n) => w.hop(n, HopMode::Greedy).map(|_| None),
            None => Ok(Some(Outcome::Failed(FailureReason::LocalMinimum))),
        }
    })
}
