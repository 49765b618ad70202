use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use spanpath_core::harness::{build_scenario, ScenarioRouting};
use spanpath_core::{
    all_pairs_shortest_hops, gabriel_graph, rng_graph, setup_ospvcs, setup_spvcs, ExperimentConfig, Protocol, Topology,
};

fn scenario(n: usize, range: f64) -> (ExperimentConfig, Topology, u64) {
    let cfg = ExperimentConfig {
        node_count: n,
        radio_ranges: vec![range],
        trials: 1,
        ..ExperimentConfig::default()
    };
    let s = build_scenario(&cfg, 0, 0).expect("connected scenario");
    (cfg, s.topology, s.seed)
}

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("construction");
    for (n, range) in [(200, 12.0), (1000, 5.5)] {
        let (_, t, _) = scenario(n, range);
        g.bench_with_input(BenchmarkId::new("spvcs", n), &t, |b, t| b.iter(|| setup_spvcs(t, 0).unwrap()));
        g.bench_with_input(BenchmarkId::new("ospvcs", n), &t, |b, t| b.iter(|| setup_ospvcs(t, 0).unwrap()));
        g.bench_with_input(BenchmarkId::new("gabriel", n), &t, |b, t| b.iter(|| gabriel_graph(t)));
        g.bench_with_input(BenchmarkId::new("rng", n), &t, |b, t| b.iter(|| rng_graph(t)));
        g.bench_with_input(BenchmarkId::new("all_pairs_hops", n), &t, |b, t| {
            b.iter(|| all_pairs_shortest_hops(t))
        });
    }
    g.finish();
}

fn all_pairs_routing(c: &mut Criterion) {
    let (cfg, t, seed) = scenario(200, 12.0);
    let ctx = ScenarioRouting::new(&cfg, &t, seed).unwrap();
    let mut g = c.benchmark_group("all_pairs_200");
    g.sample_size(10);
    for p in [Protocol::GpsrGg, Protocol::Lcr, Protocol::Bvr, Protocol::Spr, Protocol::Ospr, Protocol::Agsp] {
        g.bench_function(p.name(), |b| b.iter(|| black_box(ctx.route_all_pairs(p))));
    }
    g.finish();
}

criterion_group!(benches, construction, all_pairs_routing);
criterion_main!(benches);
