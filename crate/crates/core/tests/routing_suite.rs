use spanpath_core::harness::{build_scenario, ScenarioRouting};
use spanpath_core::{
    all_pairs_shortest_hops, build_topology, gabriel_graph, gpsr_route, greedy_forward, read_csv, run_experiment,
    write_csv, Area, CoordinateView, Deployment, ExperimentConfig, FailureReason, HopBudget, HopMode, Outcome,
    Position, Protocol, Topology,
};

fn scenario(deployment: Deployment, n: usize, range: f64, trial: usize) -> Topology {
    let cfg = ExperimentConfig {
        node_count: n,
        deployment,
        radio_ranges: vec![range],
        ..ExperimentConfig::default()
    };
    build_scenario(&cfg, 0, trial).unwrap().topology
}

#[test]
fn gpsr_on_gabriel_delivers_all_pairs() {
    for trial in 0..2 {
        let t = scenario(Deployment::Uniform, 150, 13.0, trial);
        let gg = gabriel_graph(&t);
        let hops = all_pairs_shortest_hops(&t);
        let n = t.node_count();
        for src in 0..n {
            for dst in 0..n {
                let r = gpsr_route(&t, &gg, src, dst, HopBudget::for_nodes(n));
                assert!(r.delivered(), "trial {trial} {src}->{dst}: {:?}", r.outcome);
                assert!(r.hop_count() >= hops.get(src, dst).unwrap() as usize);
                for h in r.path.windows(2) {
                    assert!(t.are_adjacent(h[0], h[1]));
                }
            }
        }
    }
}

#[test]
fn c_shape_void_defeats_greedy_but_not_gpsr() {
    // Source inside the notch's lower lip, destination on the upper lip,
    // with the straight line crossing the empty notch.
    let mut pts = Vec::new();
    for x in (0..=10).map(|i| i as f64 * 10.0) {
        pts.push(Position::new(x, 25.0));
        pts.push(Position::new(x, 75.0));
    }
    for y in [35.0, 45.0, 55.0, 65.0] {
        pts.push(Position::new(0.0, y));
    }
    let t = build_topology(pts, 10.5);
    let (src, dst) = (2 * 10, 2 * 10 + 1);
    assert_eq!(t.position(src), Position::new(100.0, 25.0));
    let view = CoordinateView::geographic(&t);
    let greedy = greedy_forward(&t, &view, src, dst, HopBudget::for_nodes(t.node_count()));
    assert_eq!(greedy.outcome, Outcome::Failed(FailureReason::LocalMinimum));
    let r = gpsr_route(&t, &gabriel_graph(&t), src, dst, HopBudget::for_nodes(t.node_count()));
    assert!(r.delivered());
    assert!(r.recoveries() >= 1);
}

#[test]
fn fallback_protocols_deliver_all_pairs() {
    let protocols = [Protocol::Lcr, Protocol::Bvr, Protocol::Agsp, Protocol::Spr, Protocol::Ospr, Protocol::Sp];
    for deployment in [Deployment::Uniform, Deployment::CShape] {
        let cfg = ExperimentConfig {
            node_count: 120,
            deployment,
            radio_ranges: vec![15.0],
            protocols: protocols.to_vec(),
            ..ExperimentConfig::default()
        };
        let s = build_scenario(&cfg, 0, 0).unwrap();
        let ctx = ScenarioRouting::new(&cfg, &s.topology, s.seed).unwrap();
        for p in protocols {
            for (src, dst, r) in ctx.route_all_pairs(p) {
                assert!(r.delivered(), "{p} {src}->{dst} on {deployment:?}: {:?}", r.outcome);
                assert_eq!(r.destination_reached(), Some(dst));
                assert!(r.hop_count() >= ctx.hops.get(src, dst).unwrap() as usize);
            }
        }
    }
}

#[test]
fn agsp_switches_once_without_reentry() {
    let cfg = ExperimentConfig {
        node_count: 150,
        deployment: Deployment::CShape,
        radio_ranges: vec![13.0],
        protocols: vec![Protocol::Agsp],
        ..ExperimentConfig::default()
    };
    let s = build_scenario(&cfg, 0, 1).unwrap();
    let ctx = ScenarioRouting::new(&cfg, &s.topology, s.seed).unwrap();
    let mut switched = 0;
    for (_, _, r) in ctx.route_all_pairs(Protocol::Agsp) {
        let k = r.modes.iter().position(|m| m.is_spr()).unwrap_or(r.modes.len());
        assert!(r.modes[..k].iter().all(|&m| m == HopMode::Greedy));
        assert!(r.modes[k..].iter().all(|m| m.is_spr()));
        switched += usize::from(k < r.modes.len());
    }
    assert!(switched > 0, "the void should force some fallbacks");
}

#[test]
fn sp_rows_and_csv_round_trip() {
    let cfg = ExperimentConfig {
        node_count: 60,
        area: Area::new(60.0, 60.0),
        radio_ranges: vec![14.0, 18.0],
        trials: 3,
        protocols: vec![Protocol::Sp, Protocol::Spr, Protocol::Bvr],
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&cfg).unwrap();
    let rows = out.rows();
    assert_eq!(rows.len(), 2 * 3 * 3);
    for r in rows.iter().filter(|r| r.protocol == "sp") {
        assert_eq!((r.avg_stretch, r.delivery_ratio, r.greedy_ratio), (1.0, 1.0, 1.0));
    }
    for r in &rows {
        assert!(r.avg_stretch >= 1.0 && r.p95_stretch >= r.avg_stretch.min(r.p95_stretch));
        assert!((0.0..=1.0).contains(&r.greedy_ratio));
        if r.protocol != "bvr" {
            assert_eq!(r.flood_tx, 0.0);
        }
    }
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    assert!(out.metadata(&cfg).contains("regenerated_disconnected="));
}

#[test]
fn route_trace_lists_every_hop() {
    let t = scenario(Deployment::Uniform, 80, 20.0, 0);
    let view = CoordinateView::geographic(&t);
    let r = greedy_forward(&t, &view, 0, 1, HopBudget::for_nodes(80));
    let trace = r.trace(|v| view.distance(v, 1));
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines.len(), r.path.len());
    assert!(lines[0].contains("src"));
}
