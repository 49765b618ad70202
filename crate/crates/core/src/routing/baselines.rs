//! Comparison protocols: the shortest-path oracle, LCR-style depth-first
//! backtracking and BVR-style anchor fallback with scoped flooding.

use std::collections::HashSet;

use crate::coords::CoordinateAssignment;
use crate::topology::{bfs_hops, HopMatrix, Topology};
use crate::NodeId;

use super::{drive, greedy_next, CoordinateView, FailureReason, HopBudget, HopMode, Outcome, RouteResult, Walk};

/// Follows the hop-count oracle, lowest-id neighbor on ties.
pub fn shortest_path_route(t: &Topology, hops: &HopMatrix, src: NodeId, dst: NodeId, budget: HopBudget) -> RouteResult {
    drive(Walk::new(src, budget), |w| {
        let cur = w.current();
        if cur == dst {
            return Ok(Some(Outcome::Delivered));
        }
        let Some(d) = hops.get(cur, dst) else {
            return Ok(Some(Outcome::Failed(FailureReason::Disconnected)));
        };
        let next = t
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&n| hops.get(n, dst) == Some(d - 1))
            .expect("a shortest-path predecessor exists");
        w.hop(next, HopMode::ShortestPath).map(|_| None)
    })
}

/// Greedy on VCS vectors; on the first local minimum, a depth-first search
/// whose visited set and return stack travel in the packet. The search
/// prefers the unvisited neighbor closest to the destination and otherwise
/// steps back along the edge it arrived on.
pub fn lcr_route(view: &CoordinateView, t: &Topology, src: NodeId, dst: NodeId, budget: HopBudget) -> RouteResult {
    let mut dfs: Option<(HashSet<NodeId>, Vec<NodeId>)> = None;
    drive(Walk::new(src, budget), |w| {
        let cur = w.current();
        if cur == dst {
            return Ok(Some(Outcome::Delivered));
        }
        let Some((visited, stack)) = dfs.as_mut() else {
            match greedy_next(t, view, cur, dst) {
                Some(n) => return w.hop(n, HopMode::Greedy).map(|_| None),
                None => {
                    // The greedy prefix never repeats a node, so it is
                    // already a valid DFS stack.
                    dfs = Some((w.path.iter().copied().collect(), w.path.clone()));
                    return Ok(None);
                }
            }
        };
        let forward = t
            .neighbors(cur)
            .iter()
            .copied()
            .filter(|n| !visited.contains(n))
            .min_by(|&a, &b| view.rank(a, dst).total_cmp(&view.rank(b, dst)).then(a.cmp(&b)));
        match forward {
            Some(n) => {
                visited.insert(n);
                stack.push(n);
                w.hop(n, HopMode::Backtrack).map(|_| None)
            }
            None => {
                stack.pop();
                match stack.last() {
                    Some(&back) => w.hop(back, HopMode::Backtrack).map(|_| None),
                    None => Ok(Some(Outcome::Failed(FailureReason::LoopDetected))),
                }
            }
        }
    })
}

enum BvrPhase {
    Greedy,
    /// Heading for `anchor` (a dimension index); `best` is the rank at the
    /// point greedy failed.
    Fallback { anchor: usize, best: f64 },
}

/// Greedy on Manhattan distance over many anchors. When stuck, the packet
/// climbs the hop-count tree of the anchor closest to the destination,
/// resuming greedy as soon as a neighbor beats the stuck point. Reaching the
/// anchor triggers a flood scoped to the destination's hop distance; the
/// delivery path is then the anchor's shortest path to the destination and
/// the flood's transmissions are recorded in `flood_tx`.
pub fn bvr_route(
    vcs: &CoordinateAssignment,
    view: &CoordinateView,
    t: &Topology,
    src: NodeId,
    dst: NodeId,
    budget: HopBudget,
) -> RouteResult {
    let mut phase = BvrPhase::Greedy;
    drive(Walk::new(src, budget), |w| {
        let cur = w.current();
        if cur == dst {
            return Ok(Some(Outcome::Delivered));
        }
        match phase {
            BvrPhase::Greedy => match greedy_next(t, view, cur, dst) {
                Some(n) => w.hop(n, HopMode::Greedy).map(|_| None),
                None => {
                    let target = vcs.coords(dst);
                    let anchor = (0..target.len()).min_by_key(|&i| (target[i], i)).expect("at least one anchor");
                    phase = BvrPhase::Fallback {
                        anchor,
                        best: view.rank(cur, dst),
                    };
                    Ok(None)
                }
            },
            BvrPhase::Fallback { anchor, best } => {
                if let Some(n) = greedy_next(t, view, cur, dst) {
                    if view.rank(n, dst) < best {
                        phase = BvrPhase::Greedy;
                        return w.hop(n, HopMode::Greedy).map(|_| None);
                    }
                }
                let level = vcs.coords(cur)[anchor];
                if level > 0 {
                    let up = t
                        .neighbors(cur)
                        .iter()
                        .copied()
                        .find(|&n| vcs.coords(n)[anchor] + 1 == level)
                        .expect("hop-count gradient toward the anchor");
                    return w.hop(up, HopMode::Backtrack).map(|_| None);
                }
                flood_from_anchor(vcs, t, anchor, dst, w)
            }
        }
    })
}

fn flood_from_anchor(
    vcs: &CoordinateAssignment,
    t: &Topology,
    anchor: usize,
    dst: NodeId,
    w: &mut Walk,
) -> Result<Option<Outcome>, super::TtlExceeded> {
    let scope = vcs.coords(dst)[anchor];
    // Every node strictly inside the scope rebroadcasts once.
    let tx = (0..t.node_count()).filter(|&v| vcs.coords(v)[anchor] < scope).count();
    w.add_flood_tx(tx);
    let to_dst = bfs_hops(t, dst);
    loop {
        let cur = w.current();
        if cur == dst {
            return Ok(Some(Outcome::Delivered));
        }
        let Some(d) = to_dst[cur] else {
            return Ok(Some(Outcome::Failed(FailureReason::Disconnected)));
        };
        let next = t
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&n| to_dst[n] == Some(d - 1))
            .expect("shortest-path predecessor");
        w.hop(next, HopMode::FloodFallback)?;
    }
}
