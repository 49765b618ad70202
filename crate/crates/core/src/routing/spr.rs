//! Spanning-path routing over interval labels, and the hybrid that runs
//! greedy forwarding on aligned coordinates and falls back to it.

use crate::spvcs::SpanLabeling;
use crate::topology::Topology;
use crate::NodeId;

use super::{drive, greedy_next, CoordinateView, HopBudget, HopMode, Outcome, RouteResult, Walk};

/// Next hop toward the node labeled `dst_spvc`.
///
/// Candidates are non-parent neighbors whose closed interval contains the
/// destination label. Among them the narrowest interval wins (lowest label
/// on ties): every candidate is an ancestor of the destination, so the
/// narrowest is the deepest one and each hop strictly shrinks the remaining
/// tree distance even across non-tree edges. Without a candidate the packet
/// climbs to the parent.
pub fn spr_next(labels: &SpanLabeling, t: &Topology, current: NodeId, dst_spvc: usize) -> (NodeId, HopMode) {
    let parent = labels.parent(current);
    let best = t
        .neighbors(current)
        .iter()
        .copied()
        .filter(|&n| n != parent && labels.label(n).contains(dst_spvc))
        .min_by_key(|&n| {
            let l = labels.label(n);
            (l.width(), l.spvc)
        });
    match best {
        Some(n) => (n, HopMode::SprDescend),
        None => (parent, HopMode::SprAscend),
    }
}

pub fn spr_route(labels: &SpanLabeling, t: &Topology, src: NodeId, dst: NodeId, budget: HopBudget) -> RouteResult {
    let dst_spvc = labels.label(dst).spvc;
    drive(Walk::new(src, budget), |w| {
        let cur = w.current();
        if labels.label(cur).spvc == dst_spvc {
            return Ok(Some(Outcome::Delivered));
        }
        let (next, mode) = spr_next(labels, t, cur, dst_spvc);
        w.hop(next, mode).map(|_| None)
    })
}

/// Greedy on aligned coordinates; at the first local minimum, spanning-path
/// routing takes over for the rest of the way. With `reenter_greedy`, an
/// SPR node whose greedy choice is strictly closer to the destination than
/// the last switch point hands the packet back to greedy.
pub fn agsp_route(
    aligned: &CoordinateView,
    labels: &SpanLabeling,
    t: &Topology,
    src: NodeId,
    dst: NodeId,
    reenter_greedy: bool,
    budget: HopBudget,
) -> RouteResult {
    let dst_spvc = labels.label(dst).spvc;
    // Aligned distance at the latest switch point; `None` while greedy.
    let mut switched_at: Option<f64> = None;
    drive(Walk::new(src, budget), |w| {
        let cur = w.current();
        if cur == dst {
            return Ok(Some(Outcome::Delivered));
        }
        match switched_at {
            None => match greedy_next(t, aligned, cur, dst) {
                Some(n) => w.hop(n, HopMode::Greedy).map(|_| None),
                None => {
                    switched_at = Some(aligned.rank(cur, dst));
                    Ok(None)
                }
            },
            Some(switch_rank) => {
                if reenter_greedy {
                    if let Some(n) = greedy_next(t, aligned, cur, dst) {
                        if aligned.rank(n, dst) < switch_rank {
                            switched_at = None;
                            return w.hop(n, HopMode::Greedy).map(|_| None);
                        }
                    }
                }
                let (next, mode) = spr_next(labels, t, cur, dst_spvc);
                w.hop(next, mode).map(|_| None)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{align_coordinates, assign_vcs, Metric};
    use crate::routing::greedy_forward;
    use crate::spvcs::{setup_ospvcs, setup_spvcs};

    fn path(n: usize) -> Topology {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Topology::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn same_node() {
        let t = path(3);
        let l = setup_spvcs(&t, 0).unwrap();
        let r = spr_route(&l, &t, 1, 1, HopBudget::for_nodes(3));
        assert!(r.delivered());
        assert_eq!(r.path, vec![1]);
    }

    #[test]
    fn climbs_then_descends() {
        // Star around 0: leaf to leaf goes through the center.
        let t = Topology::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let l = setup_spvcs(&t, 0).unwrap();
        let r = spr_route(&l, &t, 1, 3, HopBudget::for_nodes(4));
        assert_eq!(r.path, vec![1, 0, 3]);
        assert_eq!(r.modes, vec![HopMode::SprAscend, HopMode::SprDescend]);
    }

    #[test]
    fn back_edge_shortcut_is_taken() {
        // 4-cycle: the DFS tree is the path 0-1-2-3, with back edge 3-0.
        let t = Topology::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let l = setup_spvcs(&t, 0).unwrap();
        let r = spr_route(&l, &t, 0, 3, HopBudget::for_nodes(4));
        assert_eq!(r.path, vec![0, 3]);
        let o = setup_ospvcs(&t, 0).unwrap();
        assert!(spr_route(&o, &t, 1, 3, HopBudget::for_nodes(4)).delivered());
    }

    #[test]
    fn agsp_falls_back_once() {
        // 4-cycle with one anchor: 1 and 3 collide even after alignment,
        // so greedy is stuck at 1 immediately.
        let t = Topology::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let a = assign_vcs(&t, &[0]).unwrap();
        let view = CoordinateView::aligned(&align_coordinates(&a, &t, 1), Metric::Euclidean);
        let l = setup_spvcs(&t, 0).unwrap();
        let r = agsp_route(&view, &l, &t, 1, 3, false, HopBudget::for_nodes(4));
        assert!(r.delivered());
        assert!(r.modes.iter().all(|m| m.is_spr()));

        let g = agsp_route(&view, &l, &t, 2, 0, false, HopBudget::for_nodes(4));
        let pure = greedy_forward(&t, &view, 2, 0, HopBudget::for_nodes(4));
        assert!(pure.delivered());
        assert_eq!(g, pure);

        let same = agsp_route(&view, &l, &t, 2, 2, true, HopBudget::for_nodes(4));
        assert_eq!(same.hop_count(), 0);
    }
}
