//! Greedy forwarding on positions with right-hand-rule face traversal of a
//! planar subgraph when greedy gets stuck.

use std::f64::consts::TAU;

use crate::topology::{PlanarSubgraph, Position, Topology};
use crate::NodeId;

use super::{drive, greedy_next, CoordinateView, FailureReason, HopBudget, HopMode, Outcome, RouteResult, Walk};

fn bearing(from: Position, to: Position) -> f64 {
    (to.y - from.y).atan2(to.x - from.x)
}

/// First planar neighbor of `at` sweeping counterclockwise from direction
/// `reference`. A neighbor lying exactly on the reference direction comes
/// last, so arriving on an edge only bounces back along it at a dead end.
fn next_ccw(t: &Topology, planar: &PlanarSubgraph, at: NodeId, reference: f64) -> Option<NodeId> {
    let here = t.position(at);
    planar
        .neighbors(at)
        .iter()
        .map(|&n| {
            let mut a = (bearing(here, t.position(n)) - reference).rem_euclid(TAU);
            if a <= 0.0 {
                a = TAU;
            }
            (a, n)
        })
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
        .map(|(_, n)| n)
}

/// Intersection of segment `p1 p2` with segment `q1 q2`, excluding `p1`.
fn intersection(p1: Position, p2: Position, q1: Position, q2: Position) -> Option<Position> {
    let r = (p2.x - p1.x, p2.y - p1.y);
    let s = (q2.x - q1.x, q2.y - q1.y);
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom == 0.0 {
        return None;
    }
    let qp = (q1.x - p1.x, q1.y - p1.y);
    let t = (qp.0 * s.1 - qp.1 * s.0) / denom;
    let u = (qp.0 * r.1 - qp.1 * r.0) / denom;
    if t > 0.0 && t <= 1.0 && (0.0..=1.0).contains(&u) {
        Some(Position::new(p1.x + t * r.0, p1.y + t * r.1))
    } else {
        None
    }
}

struct Perimeter {
    /// Where greedy failed.
    entry: Position,
    /// Where the packet entered the current face.
    face_point: Position,
    /// First directed edge taken on the current face.
    first_edge: (NodeId, NodeId),
}

pub fn gpsr_route(t: &Topology, planar: &PlanarSubgraph, src: NodeId, dst: NodeId, budget: HopBudget) -> RouteResult {
    let view = CoordinateView::geographic(t);
    let target = t.position(dst);
    let mut perimeter: Option<Perimeter> = None;

    drive(Walk::new(src, budget), |w| {
        let cur = w.current();
        if cur == dst {
            return Ok(Some(Outcome::Delivered));
        }
        let here = t.position(cur);

        if let Some(p) = &perimeter {
            if here.distance_sq(&target) < p.entry.distance_sq(&target) {
                perimeter = None;
            }
        }

        let Some(state) = perimeter.as_mut() else {
            if let Some(n) = greedy_next(t, &view, cur, dst) {
                w.hop(n, HopMode::Greedy)?;
                return Ok(None);
            }
            let Some(first) = next_ccw(t, planar, cur, bearing(here, target)) else {
                return Ok(Some(Outcome::Failed(FailureReason::LocalMinimum)));
            };
            perimeter = Some(Perimeter {
                entry: here,
                face_point: here,
                first_edge: (cur, first),
            });
            w.hop(first, HopMode::Perimeter)?;
            return Ok(None);
        };

        let prev = w.previous().expect("perimeter mode always follows a hop");
        let Some(mut next) = next_ccw(t, planar, cur, bearing(here, t.position(prev))) else {
            return Ok(Some(Outcome::Failed(FailureReason::LocalMinimum)));
        };

        // Face change: while the chosen edge crosses the entry->destination
        // segment closer to the destination than where this face was
        // entered, move onto the adjacent face.
        let mut changed_face = false;
        for _ in 0..planar.neighbors(cur).len() {
            let crossing = intersection(here, t.position(next), state.entry, target)
                .filter(|i| i.distance_sq(&target) < state.face_point.distance_sq(&target));
            let Some(i) = crossing else { break };
            state.face_point = i;
            next = next_ccw(t, planar, cur, bearing(here, t.position(next))).expect("cur has a planar neighbor");
            state.first_edge = (cur, next);
            changed_face = true;
        }

        if !changed_face && (cur, next) == state.first_edge {
            return Ok(Some(Outcome::Failed(FailureReason::LoopDetected)));
        }
        w.hop(next, HopMode::Perimeter)?;
        Ok(None)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::greedy_forward;
    use crate::topology::{build_topology, gabriel_graph};

    #[test]
    fn ccw_order() {
        let p = Position::new;
        let t = build_topology(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(-1.0, 0.0)], 1.0);
        let planar = gabriel_graph(&t);
        // Looking east, the first counterclockwise neighbor is north.
        assert_eq!(next_ccw(&t, &planar, 0, 0.0), Some(2));
        // Arriving from the north (reference points north): west comes next.
        assert_eq!(next_ccw(&t, &planar, 0, std::f64::consts::FRAC_PI_2), Some(3));
        // The reference neighbor itself is taken last.
        assert_eq!(next_ccw(&t, &planar, 1, std::f64::consts::PI), Some(0));
    }

    #[test]
    fn routes_around_a_wall() {
        // A U-shaped detour: the straight line from 0 to 6 runs through a
        // gap with no nodes, and 0 is a local minimum.
        let p = Position::new;
        let pts = vec![
            p(0.0, 0.0),  // 0 source
            p(0.0, 1.0),  // 1
            p(0.0, 2.0),  // 2
            p(1.0, 2.5),  // 3
            p(2.0, 2.0),  // 4
            p(2.0, 1.0),  // 5
            p(2.0, 0.0),  // 6 destination
            p(-1.0, 0.0), // 7 dead-end spur
        ];
        let t = build_topology(pts, 1.2);
        let view = CoordinateView::geographic(&t);
        let greedy = greedy_forward(&t, &view, 0, 6, HopBudget::for_nodes(8));
        assert_eq!(greedy.outcome, Outcome::Failed(FailureReason::LocalMinimum));

        let gg = gabriel_graph(&t);
        let r = gpsr_route(&t, &gg, 0, 6, HopBudget::for_nodes(8));
        assert!(r.delivered(), "{r:?}");
        assert!(r.hops_in(HopMode::Perimeter) >= 1);
        for e in r.path.windows(2) {
            assert!(t.are_adjacent(e[0], e[1]));
        }
    }

    #[test]
    fn unreachable_destination_loops_out() {
        let p = Position::new;
        let t = build_topology(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), p(10.0, 0.0)], 1.5);
        let gg = gabriel_graph(&t);
        let r = gpsr_route(&t, &gg, 0, 3, HopBudget::for_nodes(4));
        assert!(!r.delivered());
    }
}
