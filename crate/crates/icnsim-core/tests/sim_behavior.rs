//! Cross-module behavior: learned routes against exact shortest paths,
//! analytic baselines, and request liveness on randomized graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use icnsim_core::experiment::no_cache_expected_cost;
use icnsim_core::learning::TableView;
use icnsim_core::simulator::{
    run, SimConfig, Simulation, Strategy, TopologySpec, WorkloadSpec,
};
use icnsim_core::topology::Topology;
use icnsim_core::workload::{zipf_weights, RequestDistribution};

fn chain_no_cache(nodes: usize, contents: usize, steps: u64) -> SimConfig {
    SimConfig {
        topology: TopologySpec::Chain { nodes },
        custodian_cost: 100.0,
        workload: WorkloadSpec::Zipf { contents, beta: 0.8 },
        strategy: Strategy::QCACHING,
        cache_capacity: 0,
        exploration_rate: 0.05,
        steps,
        ..SimConfig::default()
    }
}

#[test]
fn chain_estimates_converge_to_remaining_path_costs() {
    let mut sim = Simulation::new(chain_no_cache(3, 2, 0)).unwrap();
    for _ in 0..4000 {
        sim.step();
    }
    let spf = sim.topology().spf_to_custodian();
    for x in 0..3 {
        for d in 0..2 {
            let (_, q) = sim.qtables().min_cost_to_go(TableView::Live, x, d).unwrap();
            assert!(
                (q - spf.dist[x]).abs() < 1e-3,
                "node {x} content {d}: estimate {q} vs distance {}",
                spf.dist[x]
            );
        }
    }
}

#[test]
fn converged_routing_follows_shortest_paths() {
    let mut sim = Simulation::new(chain_no_cache(4, 2, 0)).unwrap();
    for _ in 0..6000 {
        sim.step();
    }
    let spf = sim.topology().spf_to_custodian();
    for x in 0..4 {
        for d in 0..2 {
            let (next, _) = sim.qtables().min_cost_to_go(TableView::Snapshot, x, d).unwrap();
            assert_eq!(Some(next), spf.next[x], "node {x} content {d} routes off the shortest path");
        }
    }
}

#[test]
fn no_cache_spf_matches_the_closed_form_expectation() {
    // With B = 0 and SPF every request from x costs exactly dist(x), so the
    // per-step mean equals Σ share_x · dist(x) with no sampling noise.
    let config = SimConfig {
        topology: TopologySpec::Chain { nodes: 4 },
        custodian_cost: 25.0,
        workload: WorkloadSpec::Zipf { contents: 10, beta: 0.8 },
        strategy: Strategy::SPF_LRU,
        cache_capacity: 0,
        steps: 200,
        ..SimConfig::default()
    };
    let topo = config.build_topology().unwrap();
    let dist = RequestDistribution::new(zipf_weights(10, 0.8).unwrap(), vec![1.0; 4]).unwrap();
    let expected = no_cache_expected_cost(&topo, &dist);
    assert!((expected - 26.5).abs() < 1e-12); // (28 + 27 + 26 + 25) / 4

    let metrics = run(&config).unwrap();
    for step in &metrics.per_step {
        assert!((step.mean_cost().unwrap() - expected).abs() < 1e-9);
        assert_eq!(step.custodian_hits, step.completed);
    }
}

#[test]
fn reference_setup_beats_the_no_cache_baseline() {
    let reference = SimConfig { steps: 1500, ..SimConfig::default() };
    let cached = run(&reference).unwrap();
    let uncached = run(&SimConfig { cache_capacity: 0, ..reference.clone() }).unwrap();
    let warm = reference.steps / 2;
    let cached_cost = cached.window(warm).mean_download_cost();
    let uncached_cost = uncached.window(warm).mean_download_cost();
    assert!(
        cached_cost < uncached_cost,
        "caching ({cached_cost}) must beat the custodian-only baseline ({uncached_cost})"
    );
}

/// Random connected graph: a spanning tree plus a few extra links, unit
/// costs, custodian attached to a random node.
fn random_topology(rng: &mut ChaCha8Rng, max_nodes: usize) -> Topology {
    let n = rng.gen_range(4..=max_nodes);
    let mut links: Vec<(usize, usize, f64)> = Vec::new();
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        links.push((parent, i, 1.0));
    }
    let extras = rng.gen_range(0..=n / 2);
    for _ in 0..extras {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (a, b) = (a.min(b), a.max(b));
        if a != b && !links.iter().any(|&(x, y, _)| (x, y) == (a, b)) {
            links.push((a, b, 1.0));
        }
    }
    let attach = rng.gen_range(0..n);
    Topology::from_links(n, &links, attach, 50.0).unwrap()
}

#[test]
fn requests_complete_on_randomized_topologies() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for round in 0..10 {
        let topo = random_topology(&mut rng, 16);
        let config = SimConfig {
            topology: TopologySpec::Custom(topo),
            workload: WorkloadSpec::Zipf { contents: 12, beta: 0.8 },
            strategy: Strategy::QCACHING,
            cache_capacity: 2,
            exploration_rate: 0.2,
            steps: 150,
            seed: round,
            ..SimConfig::default()
        };
        let metrics = run(&config).unwrap();
        assert_eq!(metrics.total_generated(), metrics.total_completed(), "round {round}");
        for s in &metrics.per_step {
            assert_eq!(s.completed, s.cache_hits() + s.custodian_hits);
        }
    }
}

#[test]
fn leaf_mode_restricts_request_origins() {
    let config = SimConfig {
        topology: TopologySpec::Tree { depth: 2 },
        client_mode: icnsim_core::simulator::ClientMode::Leaves,
        workload: WorkloadSpec::Zipf { contents: 5, beta: 0.8 },
        steps: 50,
        cache_capacity: 0,
        strategy: Strategy::SPF_LRU,
        ..SimConfig::default()
    };
    let metrics = run(&config).unwrap();
    // Interior nodes 0..2 never originate, so they only see relayed
    // traffic; with SPF toward the root they relay everything.
    for s in &metrics.per_step {
        assert_eq!(s.generated, 4); // leaves 3, 4, 5, 6
    }
}
