//! Seeded experiment orchestration: build scenarios, run every protocol on
//! every ordered node pair, and reduce the routes to per-scenario metrics.
//!
//! Scenarios and source nodes are processed on the rayon pool; results are
//! collected in index order and reduced sequentially, so the output does not
//! depend on scheduling.

mod config;
mod metrics;
mod output;

use rayon::prelude::*;

pub use config::{calibrate_radio_range, scenario_seed, splitmix64, AnchorPlan, ExperimentConfig, Protocol};
pub use metrics::{MetricsRow, RowDiagnostics};
pub use output::{emit_csv, read_csv, write_csv, CSV_HEADER};

use crate::coords::{align_coordinates, assign_vcs, select_anchors, AlignedAssignment, AnchorStrategy, CoordinateAssignment, Metric};
use crate::error::{Error, Result};
use crate::routing::{
    agsp_route, bvr_route, gpsr_route, greedy_forward, lcr_route, shortest_path_route, spr_route, CoordinateView, HopBudget,
    RouteResult,
};
use crate::spvcs::{setup_ospvcs, setup_spvcs, SpanLabeling};
use crate::topology::{
    all_pairs_shortest_hops, build_topology, gabriel_graph, is_connected, rng_graph, HopMatrix, PlanarSubgraph, Topology,
};
use crate::NodeId;

/// One connected deployment at one sweep point.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub seed: u64,
    pub trial: usize,
    pub range_index: usize,
    pub topology: Topology,
    /// Disconnected deployments skipped before this one.
    pub regenerated: usize,
}

/// Generates the `trial`-th scenario at `cfg.radio_ranges[range_index]`,
/// redrawing with the next derived seed until the topology is connected.
pub fn build_scenario(cfg: &ExperimentConfig, range_index: usize, trial: usize) -> Result<Scenario> {
    let range = cfg.radio_ranges[range_index];
    for attempt in 0..cfg.max_attempts {
        let seed = scenario_seed(cfg.base_seed, trial, range_index, attempt);
        let positions = cfg.deployment.generate(cfg.node_count, cfg.area, seed)?;
        let topology = build_topology(positions, range);
        if is_connected(&topology) {
            return Ok(Scenario {
                seed,
                trial,
                range_index,
                topology,
                regenerated: attempt,
            });
        }
    }
    Err(Error::NoConnectedScenario {
        attempts: cfg.max_attempts,
        radio_range: range,
    })
}

/// Everything the selected protocols need for one scenario, built once.
pub struct ScenarioRouting<'a> {
    pub topology: &'a Topology,
    pub hops: HopMatrix,
    pub budget: HopBudget,
    pub reenter_greedy: bool,
    pub geo: CoordinateView,
    pub gabriel: Option<PlanarSubgraph>,
    pub rng: Option<PlanarSubgraph>,
    pub vcs: Option<CoordinateAssignment>,
    pub vcs_view: Option<CoordinateView>,
    pub aligned: Option<AlignedAssignment>,
    pub aligned_view: Option<CoordinateView>,
    pub bvr: Option<(CoordinateAssignment, CoordinateView)>,
    pub spvcs: Option<SpanLabeling>,
    pub ospvcs: Option<SpanLabeling>,
}

fn span_anchor(t: &Topology, strategy: &AnchorStrategy, seed: u64) -> Result<NodeId> {
    Ok(select_anchors(t, strategy, 1, seed)?[0])
}

impl<'a> ScenarioRouting<'a> {
    pub fn new(cfg: &ExperimentConfig, topology: &'a Topology, seed: u64) -> Result<Self> {
        let wants = |ps: &[Protocol]| cfg.protocols.iter().any(|p| ps.contains(p));
        let n = topology.node_count();
        let plan = &cfg.anchors;

        let vcs = if wants(&[Protocol::GfVcs, Protocol::GfAvcs, Protocol::Lcr, Protocol::Agsp]) {
            let count = plan.vcs_count.min(n);
            let anchors = select_anchors(topology, &plan.vcs, count, splitmix64(seed ^ 0x5643_5300))?;
            Some(assign_vcs(topology, &anchors)?)
        } else {
            None
        };
        let aligned = match (&vcs, wants(&[Protocol::GfAvcs, Protocol::Agsp])) {
            (Some(v), true) => Some(align_coordinates(v, topology, cfg.align_iterations)),
            _ => None,
        };
        let bvr = if wants(&[Protocol::Bvr]) {
            let anchors = select_anchors(topology, &plan.bvr, plan.bvr_count, splitmix64(seed ^ 0x4256_5200))?;
            let a = assign_vcs(topology, &anchors)?;
            let view = CoordinateView::vcs(&a, Metric::Manhattan);
            Some((a, view))
        } else {
            None
        };
        let span_seed = splitmix64(seed ^ 0x5350_414E);
        let spvcs = if wants(&[Protocol::Spr, Protocol::Agsp]) {
            Some(setup_spvcs(topology, span_anchor(topology, &plan.span, span_seed)?)?)
        } else {
            None
        };
        let ospvcs = if wants(&[Protocol::Ospr]) {
            Some(setup_ospvcs(topology, span_anchor(topology, &plan.span, span_seed)?)?)
        } else {
            None
        };

        Ok(Self {
            topology,
            hops: all_pairs_shortest_hops(topology),
            budget: HopBudget::scaled(n, cfg.ttl_factor),
            reenter_greedy: cfg.reenter_greedy,
            geo: CoordinateView::geographic(topology),
            gabriel: wants(&[Protocol::GpsrGg]).then(|| gabriel_graph(topology)),
            rng: wants(&[Protocol::GpsrRng]).then(|| rng_graph(topology)),
            vcs_view: vcs.as_ref().map(|v| CoordinateView::vcs(v, Metric::Euclidean)),
            aligned_view: aligned.as_ref().map(|a| CoordinateView::aligned(a, Metric::Euclidean)),
            vcs,
            aligned,
            bvr,
            spvcs,
            ospvcs,
        })
    }

    /// Routes one packet. Panics if `protocol` was not part of the config
    /// this context was built from.
    pub fn route(&self, protocol: Protocol, src: NodeId, dst: NodeId) -> RouteResult {
        let t = self.topology;
        let b = self.budget;
        let need = |what: &str| -> ! { panic!("{what} not built for this scenario") };
        match protocol {
            Protocol::Sp => shortest_path_route(t, &self.hops, src, dst, b),
            Protocol::GfGeo => greedy_forward(t, &self.geo, src, dst, b),
            Protocol::GpsrGg => gpsr_route(t, self.gabriel.as_ref().unwrap_or_else(|| need("GG")), src, dst, b),
            Protocol::GpsrRng => gpsr_route(t, self.rng.as_ref().unwrap_or_else(|| need("RNG")), src, dst, b),
            Protocol::GfVcs => greedy_forward(t, self.vcs_view.as_ref().unwrap_or_else(|| need("VCS")), src, dst, b),
            Protocol::GfAvcs => greedy_forward(t, self.aligned_view.as_ref().unwrap_or_else(|| need("AVCS")), src, dst, b),
            Protocol::Lcr => lcr_route(self.vcs_view.as_ref().unwrap_or_else(|| need("VCS")), t, src, dst, b),
            Protocol::Bvr => {
                let (a, view) = self.bvr.as_ref().unwrap_or_else(|| need("BVR VCS"));
                bvr_route(a, view, t, src, dst, b)
            }
            Protocol::Spr => spr_route(self.spvcs.as_ref().unwrap_or_else(|| need("SPVCS")), t, src, dst, b),
            Protocol::Ospr => spr_route(self.ospvcs.as_ref().unwrap_or_else(|| need("OSPVCS")), t, src, dst, b),
            Protocol::Agsp => agsp_route(
                self.aligned_view.as_ref().unwrap_or_else(|| need("AVCS")),
                self.spvcs.as_ref().unwrap_or_else(|| need("SPVCS")),
                t,
                src,
                dst,
                self.reenter_greedy,
                b,
            ),
        }
    }

    pub fn labeling_for(&self, protocol: Protocol) -> Option<&SpanLabeling> {
        match protocol {
            Protocol::Spr | Protocol::Agsp => self.spvcs.as_ref(),
            Protocol::Ospr => self.ospvcs.as_ref(),
            _ => None,
        }
    }

    /// Routes every ordered pair `src != dst`, sources in parallel, results
    /// in `(src, dst)` order.
    pub fn route_all_pairs(&self, protocol: Protocol) -> Vec<(NodeId, NodeId, RouteResult)> {
        let n = self.topology.node_count();
        (0..n)
            .into_par_iter()
            .map(|src| {
                (0..n)
                    .filter(|&dst| dst != src)
                    .map(|dst| (src, dst, self.route(protocol, src, dst)))
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }
}

/// A metrics row plus diagnostics that do not go into the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub row: MetricsRow,
    pub diagnostics: RowDiagnostics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    /// Sorted by `(protocol, radio_range, seed)`.
    pub records: Vec<ExperimentRecord>,
    /// Disconnected deployments that were redrawn.
    pub regenerated: usize,
}

impl ExperimentOutcome {
    pub fn rows(&self) -> Vec<MetricsRow> {
        self.records.iter().map(|r| r.row.clone()).collect()
    }

    pub fn records_for<'s>(&'s self, protocol: &'s str) -> impl Iterator<Item = &'s ExperimentRecord> + 's {
        self.records.iter().filter(move |r| r.row.protocol == protocol)
    }

    /// `key=value` lines describing how the rows were produced.
    pub fn metadata(&self, cfg: &ExperimentConfig) -> String {
        let ranges: Vec<String> = cfg.radio_ranges.iter().map(|r| format!("{r:.6}")).collect();
        let protocols: Vec<&str> = cfg.protocols.iter().map(|p| p.name()).collect();
        [
            format!("nodes={}", cfg.node_count),
            format!("area={}x{}", cfg.area.width, cfg.area.height),
            format!("deployment={}", cfg.deployment.name()),
            format!("radio_ranges={}", ranges.join(",")),
            format!("trials={}", cfg.trials),
            format!("base_seed={}", cfg.base_seed),
            format!("protocols={}", protocols.join(",")),
            format!("span_anchor={}", cfg.anchors.span.name()),
            format!("vcs_anchors={}x{}", cfg.anchors.vcs.name(), cfg.anchors.vcs_count),
            format!("bvr_anchors={}x{}", cfg.anchors.bvr.name(), cfg.anchors.bvr_count),
            format!("align_iterations={}", cfg.align_iterations),
            format!("reenter_greedy={}", cfg.reenter_greedy),
            format!("ttl_factor={}", cfg.ttl_factor),
            format!("regenerated_disconnected={}", self.regenerated),
            "lcr_state=visited set carried in packet".to_string(),
            "bvr_stretch=delivery-path hops; flood transmissions in flood_tx".to_string(),
        ]
        .join("\n")
            + "\n"
    }
}

fn evaluate_scenario(cfg: &ExperimentConfig, scenario: &Scenario, label: Option<&str>) -> Result<Vec<ExperimentRecord>> {
    let ctx = ScenarioRouting::new(cfg, &scenario.topology, scenario.seed)?;
    let range = cfg.radio_ranges[scenario.range_index];
    Ok(cfg
        .protocols
        .iter()
        .map(|&p| {
            let routes = ctx.route_all_pairs(p);
            let name = match label {
                Some(l) => format!("{}@{l}", p.name()),
                None => p.name().to_string(),
            };
            let (row, mut diagnostics) =
                metrics::summarize(&name, scenario.seed, range, scenario.topology.mean_degree(), &ctx.hops, &routes);
            diagnostics.tree_depth = ctx.labeling_for(p).map(SpanLabeling::tree_depth);
            ExperimentRecord { row, diagnostics }
        })
        .collect())
}

fn run_labeled(cfg: &ExperimentConfig, label: Option<&str>) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let points: Vec<(usize, usize)> = (0..cfg.radio_ranges.len())
        .flat_map(|r| (0..cfg.trials).map(move |t| (r, t)))
        .collect();
    let per_point = points
        .par_iter()
        .map(|&(r, t)| {
            let scenario = build_scenario(cfg, r, t)?;
            let records = evaluate_scenario(cfg, &scenario, label)?;
            Ok((scenario.regenerated, records))
        })
        .collect::<Result<Vec<_>>>()?;

    let regenerated = per_point.iter().map(|(g, _)| g).sum();
    let mut records: Vec<ExperimentRecord> = per_point.into_iter().flat_map(|(_, r)| r).collect();
    records.sort_by(|a, b| metrics::row_order(&a.row, &b.row));
    Ok(ExperimentOutcome { records, regenerated })
}

/// Runs every configured protocol over every `(range, trial)` scenario.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_labeled(cfg, None)
}

/// Reruns the spanning-path protocols once per anchor placement over the
/// same scenarios. Protocol names in the rows are suffixed `@<placement>`.
pub fn anchor_impact_study(
    cfg: &ExperimentConfig,
    placements: &[AnchorStrategy],
) -> Result<Vec<(AnchorStrategy, ExperimentOutcome)>> {
    if !cfg.protocols.iter().any(|p| matches!(p, Protocol::Spr | Protocol::Ospr)) {
        return Err(Error::invalid("anchor study needs spr or ospr among the protocols"));
    }
    placements
        .iter()
        .map(|placement| {
            let mut c = cfg.clone();
            c.protocols.retain(|p| p.uses_span_anchor());
            c.anchors.span = placement.clone();
            run_labeled(&c, Some(&placement.name())).map(|o| (placement.clone(), o))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Deployment;

    fn small(protocols: Vec<Protocol>) -> ExperimentConfig {
        ExperimentConfig {
            node_count: 40,
            radio_ranges: vec![25.0],
            trials: 2,
            protocols,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn sp_rows_are_exact() {
        let out = run_experiment(&small(vec![Protocol::Sp])).unwrap();
        assert_eq!(out.records.len(), 2);
        for r in out.rows() {
            assert_eq!(r.avg_stretch, 1.0);
            assert_eq!(r.p95_stretch, 1.0);
            assert_eq!(r.delivery_ratio, 1.0);
        }
    }

    #[test]
    fn every_protocol_runs() {
        let mut cfg = small(Protocol::ALL.to_vec());
        cfg.trials = 1;
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.records.len(), Protocol::ALL.len());
        for rec in &out.records {
            assert!(rec.row.avg_stretch >= 1.0, "{:?}", rec.row);
            assert!((0.0..=1.0).contains(&rec.row.delivery_ratio));
        }
        let names: Vec<&str> = out.records.iter().map(|r| r.row.protocol.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }

    #[test]
    fn unreachable_connectivity_errors() {
        let cfg = ExperimentConfig {
            node_count: 50,
            radio_ranges: vec![1.0],
            trials: 1,
            max_attempts: 3,
            protocols: vec![Protocol::Sp],
            ..ExperimentConfig::default()
        };
        assert!(matches!(run_experiment(&cfg), Err(Error::NoConnectedScenario { attempts: 3, .. })));
    }

    #[test]
    fn single_node_rows() {
        let cfg = ExperimentConfig {
            node_count: 1,
            trials: 1,
            protocols: vec![Protocol::Spr],
            ..ExperimentConfig::default()
        };
        let study = anchor_impact_study(&cfg, &[AnchorStrategy::Center, AnchorStrategy::Corners]).unwrap();
        assert_eq!(study.len(), 2);
        for (_, out) in study {
            let row = &out.records[0].row;
            assert_eq!(row.delivery_ratio, 1.0);
            assert_eq!(out.records[0].diagnostics.pairs, 0);
        }
    }

    #[test]
    fn anchor_study_requires_span_protocol() {
        let cfg = small(vec![Protocol::Agsp]);
        assert!(anchor_impact_study(&cfg, &[AnchorStrategy::Center]).is_err());
    }

    #[test]
    fn c_shape_scenarios_are_connected() {
        let cfg = ExperimentConfig {
            node_count: 150,
            deployment: Deployment::CShape,
            radio_ranges: vec![14.0],
            trials: 3,
            ..ExperimentConfig::default()
        };
        for t in 0..3 {
            let s = build_scenario(&cfg, 0, t).unwrap();
            assert!(is_connected(&s.topology));
        }
    }
}
