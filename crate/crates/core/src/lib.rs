//! Geometric routing over unit-disk graphs: topology generation and
//! planarization, hop-count virtual coordinates, spanning-path interval
//! labels, the routing protocols built on them, and a seeded experiment
//! harness that reduces all-pairs routes to path-stretch metrics.

pub mod coords;
pub mod error;
pub mod harness;
pub mod routing;
pub mod spvcs;
pub mod topology;

/// Dense node index in `0..N`.
pub type NodeId = usize;

pub use coords::{
    align_coordinates, assign_vcs, distance, estimate_dimension_degradation, select_anchors, uniqueness_degree,
    AlignedAssignment, AnchorStrategy, CoordinateAssignment, Metric,
};
pub use error::{Error, Result};
pub use harness::{
    anchor_impact_study, build_scenario, calibrate_radio_range, emit_csv, read_csv, run_experiment, write_csv,
    ExperimentConfig, ExperimentOutcome, ExperimentRecord, MetricsRow, Protocol, RowDiagnostics,
};
pub use routing::{
    agsp_route, bvr_route, gpsr_route, greedy_forward, lcr_route, shortest_path_route, spr_route, CoordinateView,
    FailureReason, HopBudget, HopMode, Outcome, RouteResult,
};
pub use spvcs::{setup_ospvcs, setup_spvcs, LabelVariant, SpanLabel, SpanLabeling};
pub use topology::{
    all_pairs_shortest_hops, build_topology, gabriel_graph, is_connected, rng_graph, Area, Deployment, HopMatrix,
    Planarization, PlanarSubgraph, Position, Topology,
};
