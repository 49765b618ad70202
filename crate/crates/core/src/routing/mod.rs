//! Routing protocols. Every protocol is a pure function of immutable inputs
//! returning a [`RouteResult`], so all-pairs evaluation can fan out freely.

mod baselines;
mod greedy;
mod gpsr;
mod spr;

use std::fmt;
use std::fmt::Write as _;

pub use baselines::{bvr_route, lcr_route, shortest_path_route};
pub use greedy::{greedy_forward, greedy_next, CoordinateView};
pub use gpsr::gpsr_route;
pub use spr::{agsp_route, spr_next, spr_route};

use crate::error::{Error, Result};
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HopMode {
    Greedy,
    Perimeter,
    SprAscend,
    SprDescend,
    Backtrack,
    FloodFallback,
    /// Oracle shortest-path hop.
    ShortestPath,
}

impl HopMode {
    pub fn tag(self) -> &'static str {
        match self {
            HopMode::Greedy => "greedy",
            HopMode::Perimeter => "perimeter",
            HopMode::SprAscend => "spr-ascend",
            HopMode::SprDescend => "spr-descend",
            HopMode::Backtrack => "backtrack",
            HopMode::FloodFallback => "flood-fallback",
            HopMode::ShortestPath => "sp",
        }
    }

    /// Greedy and oracle hops; everything else is some form of recovery.
    pub fn is_direct(self) -> bool {
        matches!(self, HopMode::Greedy | HopMode::ShortestPath)
    }

    pub fn is_spr(self) -> bool {
        matches!(self, HopMode::SprAscend | HopMode::SprDescend)
    }
}

impl fmt::Display for HopMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureReason {
    LocalMinimum,
    LoopDetected,
    TtlExceeded,
    Disconnected,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureReason::LocalMinimum => "local-minimum",
            FailureReason::LoopDetected => "loop-detected",
            FailureReason::TtlExceeded => "ttl-exceeded",
            FailureReason::Disconnected => "disconnected",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Delivered,
    Failed(FailureReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteResult {
    /// Starts at the source; consecutive nodes are adjacent.
    pub path: Vec<NodeId>,
    /// `modes[i]` tags the hop `path[i] -> path[i + 1]`.
    pub modes: Vec<HopMode>,
    pub outcome: Outcome,
    /// Broadcast transmissions spent on flooding, outside the delivery path.
    pub flood_tx: usize,
}

impl RouteResult {
    pub fn hop_count(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    pub fn delivered(&self) -> bool {
        self.outcome == Outcome::Delivered
    }

    pub fn destination_reached(&self) -> Option<NodeId> {
        self.delivered().then(|| *self.path.last().expect("path is never empty"))
    }

    /// No hop used a recovery mode.
    pub fn direct_only(&self) -> bool {
        self.modes.iter().all(|m| m.is_direct())
    }

    /// Number of maximal runs of perimeter hops.
    pub fn recoveries(&self) -> usize {
        self.modes
            .iter()
            .enumerate()
            .filter(|&(i, m)| *m == HopMode::Perimeter && (i == 0 || self.modes[i - 1] != HopMode::Perimeter))
            .count()
    }

    pub fn hops_in(&self, mode: HopMode) -> usize {
        self.modes.iter().filter(|&&m| m == mode).count()
    }

    pub fn has_repeated_node(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.path.len());
        !self.path.iter().all(|v| seen.insert(*v))
    }

    /// One line per path node: `seq node mode dist_to_dst`. The source line
    /// carries mode `src`; later lines carry the mode of the hop that
    /// reached the node.
    pub fn trace(&self, dist_to_dst: impl Fn(NodeId) -> f64) -> String {
        let mut out = String::new();
        for (seq, &v) in self.path.iter().enumerate() {
            let mode = if seq == 0 { "src" } else { self.modes[seq - 1].tag() };
            let _ = writeln!(out, "{seq} {v} {mode} {:.6}", dist_to_dst(v));
        }
        out
    }
}

/// Maximum number of hops a packet may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HopBudget(usize);

impl HopBudget {
    pub fn new(ttl: usize) -> Result<Self> {
        if ttl == 0 {
            return Err(Error::invalid("ttl must be positive"));
        }
        Ok(Self(ttl))
    }

    /// `factor * n` hops, at least one.
    pub fn scaled(n: usize, factor: usize) -> Self {
        Self((n * factor).max(1))
    }

    /// The default budget of `4 * n` hops.
    pub fn for_nodes(n: usize) -> Self {
        Self::scaled(n, 4)
    }

    pub fn ttl(self) -> usize {
        self.0
    }
}

/// Accumulates a route while enforcing the hop budget.
pub(crate) struct Walk {
    path: Vec<NodeId>,
    modes: Vec<HopMode>,
    ttl: usize,
    flood_tx: usize,
}

pub(crate) struct TtlExceeded;

impl Walk {
    pub(crate) fn new(src: NodeId, budget: HopBudget) -> Self {
        Self {
            path: vec![src],
            modes: Vec::new(),
            ttl: budget.ttl(),
            flood_tx: 0,
        }
    }

    pub(crate) fn current(&self) -> NodeId {
        *self.path.last().expect("non-empty")
    }

    pub(crate) fn previous(&self) -> Option<NodeId> {
        self.path.len().checked_sub(2).map(|i| self.path[i])
    }

    pub(crate) fn hop(&mut self, next: NodeId, mode: HopMode) -> std::result::Result<(), TtlExceeded> {
        if self.modes.len() >= self.ttl {
            return Err(TtlExceeded);
        }
        self.path.push(next);
        self.modes.push(mode);
        Ok(())
    }

    pub(crate) fn add_flood_tx(&mut self, tx: usize) {
        self.flood_tx += tx;
    }

    pub(crate) fn finish(self, outcome: Outcome) -> RouteResult {
        RouteResult {
            path: self.path,
            modes: self.modes,
            outcome,
            flood_tx: self.flood_tx,
        }
    }

    pub(crate) fn fail(self, reason: FailureReason) -> RouteResult {
        self.finish(Outcome::Failed(reason))
    }
}

/// Runs `step` until it yields an outcome, mapping budget exhaustion to
/// `ttl-exceeded`.
pub(crate) fn drive(
    mut walk: Walk,
    mut step: impl FnMut(&mut Walk) -> std::result::Result<Option<Outcome>, TtlExceeded>,
) -> RouteResult {
    loop {
        match step(&mut walk) {
            Ok(None) => {}
            Ok(Some(outcome)) => return walk.finish(outcome),
            Err(TtlExceeded) => return walk.fail(FailureReason::TtlExceeded),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recoveries_count_runs() {
        use HopMode::*;
        let r = RouteResult {
            path: vec![0, 1, 2, 3, 4, 5, 6],
            modes: vec![Greedy, Perimeter, Perimeter, Greedy, Perimeter, Greedy],
            outcome: Outcome::Delivered,
            flood_tx: 0,
        };
        assert_eq!(r.recoveries(), 2);
        assert_eq!(r.hops_in(Perimeter), 3);
        assert!(!r.direct_only());
        assert_eq!(r.hop_count(), 6);
    }

    #[test]
    fn trace_lines() {
        let r = RouteResult {
            path: vec![4, 7],
            modes: vec![HopMode::Greedy],
            outcome: Outcome::Delivered,
            flood_tx: 0,
        };
        assert_eq!(r.trace(|v| if v == 7 { 0.0 } else { 1.5 }), "0 4 src 1.500000\n1 7 greedy 0.000000\n");
    }

    #[test]
    fn budget_rejects_zero() {
        assert!(HopBudget::new(0).is_err());
        assert_eq!(HopBudget::for_nodes(10).ttl(), 40);
        assert_eq!(HopBudget::for_nodes(0).ttl(), 1);
    }
}
