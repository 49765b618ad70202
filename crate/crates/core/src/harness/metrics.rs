use std::cmp::Ordering;

use crate::routing::{HopMode, RouteResult};
use crate::topology::HopMatrix;
use crate::NodeId;

/// One CSV row: a protocol evaluated on all ordered pairs of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub seed: u64,
    pub protocol: String,
    pub radio_range: f64,
    pub mean_degree: f64,
    /// Delivered over all ordered connected pairs.
    pub delivery_ratio: f64,
    /// Delivered pairs that used only direct hops, over delivered pairs.
    pub greedy_ratio: f64,
    /// Mean `hops / shortest_hops` over delivered pairs.
    pub avg_stretch: f64,
    /// Nearest-rank 95th percentile of the same stretches.
    pub p95_stretch: f64,
    /// Mean flooded transmissions per pair.
    pub flood_tx: f64,
}

/// Per-row facts that stay out of the CSV.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RowDiagnostics {
    pub pairs: usize,
    pub delivered: usize,
    pub recoveries: usize,
    pub perimeter_hops: usize,
    pub repeated_node_paths: usize,
    /// Delivered pairs whose hops were all greedy.
    pub greedy_only: usize,
    /// Maximum depth of the labeling tree, for span protocols.
    pub tree_depth: Option<usize>,
}

impl RowDiagnostics {
    /// Perimeter hops per perimeter recovery, `None` without recoveries.
    pub fn perimeter_hops_per_recovery(&self) -> Option<f64> {
        (self.recoveries > 0).then(|| self.perimeter_hops as f64 / self.recoveries as f64)
    }

    pub fn greedy_only_fraction(&self) -> f64 {
        if self.delivered == 0 {
            1.0
        } else {
            self.greedy_only as f64 / self.delivered as f64
        }
    }
}

pub(crate) fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Nearest-rank percentile of an ascending slice.
pub(crate) fn percentile_nearest_rank(sorted: &[f64], pct: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = ((pct / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub(crate) fn summarize(
    protocol: &str,
    seed: u64,
    radio_range: f64,
    mean_degree: f64,
    hops: &HopMatrix,
    routes: &[(NodeId, NodeId, RouteResult)],
) -> (MetricsRow, RowDiagnostics) {
    let mut diag = RowDiagnostics::default();
    let mut stretches = Vec::new();
    let mut direct = 0usize;
    let mut flood = 0usize;
    for (src, dst, r) in routes {
        let Some(best) = hops.get(*src, *dst) else { continue };
        diag.pairs += 1;
        flood += r.flood_tx;
        diag.recoveries += r.recoveries();
        diag.perimeter_hops += r.hops_in(HopMode::Perimeter);
        if r.has_repeated_node() {
            diag.repeated_node_paths += 1;
        }
        if !r.delivered() {
            continue;
        }
        diag.delivered += 1;
        if r.direct_only() {
            direct += 1;
        }
        if r.modes.iter().all(|&m| m == HopMode::Greedy) {
            diag.greedy_only += 1;
        }
        stretches.push(r.hop_count() as f64 / best as f64);
    }
    stretches.sort_by(f64::total_cmp);

    let ratio = |num: usize, den: usize| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    let (avg, p95) = if stretches.is_empty() {
        (1.0, 1.0)
    } else {
        (
            stretches.iter().sum::<f64>() / stretches.len() as f64,
            percentile_nearest_rank(&stretches, 95.0),
        )
    };
    let row = MetricsRow {
        seed,
        protocol: protocol.to_string(),
        radio_range: round6(radio_range),
        mean_degree: round6(mean_degree),
        delivery_ratio: round6(ratio(diag.delivered, diag.pairs)),
        greedy_ratio: round6(ratio(direct, diag.delivered)),
        avg_stretch: round6(avg),
        p95_stretch: round6(p95),
        flood_tx: round6(if diag.pairs == 0 { 0.0 } else { flood as f64 / diag.pairs as f64 }),
    };
    (row, diag)
}

pub(crate) fn row_order(a: &MetricsRow, b: &MetricsRow) -> Ordering {
    a.protocol
        .cmp(&b.protocol)
        .then(a.radio_range.total_cmp(&b.radio_range))
        .then(a.seed.cmp(&b.seed))
}
