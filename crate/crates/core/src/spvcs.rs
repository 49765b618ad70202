//! Spanning-path virtual coordinates.
//!
//! Every node gets a preorder number `spvc` in a spanning tree rooted at the
//! anchor, plus `max_range`, the largest preorder number in its subtree. The
//! closed interval `[spvc, max_range]` is then exactly the set of labels
//! below the node, which is all a router needs to pick a next hop.
//!
//! Two trees are supported: the depth-first tree that the numbering walk
//! itself discovers, and a breadth-first parent tree numbered afterwards by
//! a depth-first walk restricted to tree edges. Neighbors are always visited
//! in ascending id order.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::topology::Topology;
use crate::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanLabel {
    pub spvc: usize,
    pub max_range: usize,
    /// The root is its own parent.
    pub parent: NodeId,
}

impl SpanLabel {
    /// Closed-interval membership.
    pub fn contains(&self, spvc: usize) -> bool {
        self.spvc <= spvc && spvc <= self.max_range
    }

    pub fn width(&self) -> usize {
        self.max_range - self.spvc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelVariant {
    DepthFirst,
    BreadthFirstTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanLabeling {
    anchor: NodeId,
    variant: LabelVariant,
    labels: Vec<SpanLabel>,
    by_spvc: Vec<NodeId>,
    depth: Vec<usize>,
}

impl SpanLabeling {
    pub fn anchor(&self) -> NodeId {
        self.anchor
    }

    pub fn variant(&self) -> LabelVariant {
        self.variant
    }

    pub fn label(&self, v: NodeId) -> &SpanLabel {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[SpanLabel] {
        &self.labels
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn node_with_spvc(&self, spvc: usize) -> NodeId {
        self.by_spvc[spvc]
    }

    pub fn parent(&self, v: NodeId) -> NodeId {
        self.labels[v].parent
    }

    /// Depth of `v` in the labeling tree (root = 0).
    pub fn depth(&self, v: NodeId) -> usize {
        self.depth[v]
    }

    pub fn tree_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// One line per node: `id spvc max_range parent`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "{id} {} {} {}", l.spvc, l.max_range, l.parent);
        }
        out
    }
}

const UNSET: usize = usize::MAX;

fn check_anchor(t: &Topology, anchor: NodeId) -> Result<()> {
    if anchor >= t.node_count() {
        return Err(Error::invalid(format!(
            "anchor {anchor} is not a node (N = {})",
            t.node_count()
        )));
    }
    Ok(())
}

/// Depth-first preorder numbering over `children(v)`. Each stack frame holds
/// a node and a cursor into its child candidates; when a node is exhausted
/// its `max_range` is the last number handed out.
fn number_preorder<'a>(
    n: usize,
    anchor: NodeId,
    parent: &mut [NodeId],
    children: impl Fn(NodeId) -> &'a [NodeId],
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut spvc = vec![UNSET; n];
    let mut max_range = vec![UNSET; n];
    let mut depth = vec![0usize; n];
    let mut next = 0usize;

    spvc[anchor] = next;
    next += 1;
    parent[anchor] = anchor;
    let mut stack: Vec<(NodeId, &[NodeId], usize)> = vec![(anchor, children(anchor), 0)];

    while let Some(frame) = stack.last_mut() {
        let (node, cands, cursor) = (frame.0, frame.1, &mut frame.2);
        // Candidates are re-checked when reached: a deeper walk may have
        // labeled them in the meantime.
        let mut descend = None;
        while *cursor < cands.len() {
            let c = cands[*cursor];
            *cursor += 1;
            if spvc[c] == UNSET {
                descend = Some(c);
                break;
            }
        }
        match descend {
            Some(c) => {
                parent[c] = node;
                spvc[c] = next;
                next += 1;
                depth[c] = depth[node] + 1;
                stack.push((c, children(c), 0));
            }
            None => {
                max_range[node] = next - 1;
                stack.pop();
            }
        }
    }
    (spvc, max_range, depth)
}

fn finish(
    t: &Topology,
    anchor: NodeId,
    variant: LabelVariant,
    parent: Vec<NodeId>,
    spvc: Vec<usize>,
    max_range: Vec<usize>,
    depth: Vec<usize>,
) -> Result<SpanLabeling> {
    let unreachable: Vec<NodeId> = (0..t.node_count()).filter(|&v| spvc[v] == UNSET).collect();
    if !unreachable.is_empty() {
        return Err(Error::Disconnected {
            root: anchor,
            unreachable,
        });
    }
    let mut by_spvc = vec![0; t.node_count()];
    let labels = (0..t.node_count())
        .map(|v| {
            by_spvc[spvc[v]] = v;
            SpanLabel {
                spvc: spvc[v],
                max_range: max_range[v],
                parent: parent[v],
            }
        })
        .collect();
    Ok(SpanLabeling {
        anchor,
        variant,
        labels,
        by_spvc,
        depth,
    })
}

/// Depth-first spanning-path labeling rooted at `anchor`: the first unlabeled
/// neighbor (ascending id) of each node becomes its next child.
pub fn setup_spvcs(t: &Topology, anchor: NodeId) -> Result<SpanLabeling> {
    check_anchor(t, anchor)?;
    let n = t.node_count();
    let mut parent = vec![UNSET; n];
    let (spvc, max_range, depth) = number_preorder(n, anchor, &mut parent, |v| t.neighbors(v));
    finish(t, anchor, LabelVariant::DepthFirst, parent, spvc, max_range, depth)
}

/// Breadth-first parent tree, then depth-first numbering along tree edges
/// only. The tree depth equals the anchor's eccentricity.
pub fn setup_ospvcs(t: &Topology, anchor: NodeId) -> Result<SpanLabeling> {
    check_anchor(t, anchor)?;
    let n = t.node_count();
    let mut bfs_parent = vec![UNSET; n];
    bfs_parent[anchor] = anchor;
    let mut queue = VecDeque::from([anchor]);
    while let Some(v) = queue.pop_front() {
        for &u in t.neighbors(v) {
            if bfs_parent[u] == UNSET {
                bfs_parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    let tree_children: Vec<Vec<NodeId>> = (0..n)
        .map(|v| {
            t.neighbors(v)
                .iter()
                .copied()
                .filter(|&u| u != anchor && bfs_parent[u] == v)
                .collect()
        })
        .collect();
    let mut parent = vec![UNSET; n];
    let (spvc, max_range, depth) = number_preorder(n, anchor, &mut parent, |v| &tree_children[v]);
    finish(t, anchor, LabelVariant::BreadthFirstTree, parent, spvc, max_range, depth)
}
