//! Multi-run orchestration: warmup-discarded aggregation with Student-t
//! confidence intervals, parameter sweeps, and the exhaustive placement
//! oracle used to sanity-check the heuristics.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::derive_seed;
use crate::error::{Error, Result};
use crate::metrics::MetricsSeries;
use crate::simulator::{run, SimConfig, TopologySpec, WorkloadSpec};
use crate::topology::{ContentId, NodeId, Topology};
use crate::workload::RequestDistribution;

/// Post-warmup aggregates of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub mean_download_cost: f64,
    pub completed: u64,
    pub custodian_hits: u64,
    pub custodian_hit_rate: f64,
    pub cache_hit_rate: f64,
    pub budget_fallback_rate: f64,
    /// Mean network-wide content diversity; present only when the run
    /// recorded it.
    pub mean_diversity: Option<f64>,
}

impl RunSummary {
    pub fn from_metrics(metrics: &MetricsSeries, warmup: u64) -> RunSummary {
        let w = metrics.window(warmup);
        let completed = w.completed;
        let rate = |n: u64| if completed == 0 { 0.0 } else { n as f64 / completed as f64 };
        let mean_diversity = if metrics.diversity.is_empty() {
            None
        } else {
            let tail = &metrics.diversity[warmup.min(metrics.steps()) as usize..];
            if tail.is_empty() {
                None
            } else {
                Some(tail.iter().sum::<usize>() as f64 / tail.len() as f64)
            }
        };
        RunSummary {
            mean_download_cost: w.mean_download_cost(),
            completed,
            custodian_hits: w.custodian_hits,
            custodian_hit_rate: rate(w.custodian_hits),
            cache_hit_rate: rate(completed - w.custodian_hits),
            budget_fallback_rate: rate(w.budget_fallbacks),
            mean_diversity,
        }
    }

    /// Named metric values, the unit every aggregate is computed over.
    pub fn metric_values(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![
            ("mean_download_cost", self.mean_download_cost),
            ("custodian_hits", self.custodian_hits as f64),
            ("custodian_hit_rate", self.custodian_hit_rate),
            ("cache_hit_rate", self.cache_hit_rate),
            ("budget_fallback_rate", self.budget_fallback_rate),
        ];
        if let Some(d) = self.mean_diversity {
            v.push(("mean_diversity", d));
        }
        v
    }
}

/// Across-run mean and 95% confidence half-width (Student-t, n−1 degrees of
/// freedom). The half-width is undefined for a single run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub ci_half_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    /// The swept parameter value, if this point belongs to a sweep.
    pub sweep_value: Option<f64>,
    pub warmup: u64,
    pub runs: Vec<RunSummary>,
    /// Aggregates keyed by metric name, in `RunSummary::metric_values`
    /// order.
    pub metrics: Vec<(&'static str, Aggregate)>,
}

impl ExperimentResult {
    pub fn metric(&self, name: &str) -> Option<Aggregate> {
        self.metrics.iter().find(|(n, _)| *n == name).map(|(_, a)| *a)
    }

    /// Mean download cost with its half-width, the headline comparison
    /// metric.
    pub fn mean_download_cost(&self) -> Aggregate {
        self.metric("mean_download_cost").expect("always aggregated")
    }
}

/// Two-sided 95% Student-t critical values; `df` capped by the table tail.
pub fn t_critical_975(df: u64) -> f64 {
    const TABLE: [f64; 30] = [
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179,
        2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
        2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    ];
    match df {
        0 => f64::INFINITY,
        1..=30 => TABLE[(df - 1) as usize],
        31..=40 => 2.021,
        41..=60 => 2.000,
        61..=120 => 1.980,
        _ => 1.960,
    }
}

fn aggregate_values(values: &[f64]) -> Aggregate {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Aggregate { mean, ci_half_width: None };
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    let half = t_critical_975((n - 1) as u64) * libm::sqrt(var / n as f64);
    Aggregate { mean, ci_half_width: Some(half) }
}

/// Discards the first `warmup` steps of every run, summarizes each run, and
/// aggregates across runs. Requires at least one run and `warmup` smaller
/// than the shortest run.
pub fn aggregate(runs: &[MetricsSeries], warmup: u64) -> Result<ExperimentResult> {
    if runs.is_empty() {
        return Err(Error::InvalidParameter("aggregate needs at least one run".into()));
    }
    if let Some(short) = runs.iter().find(|r| r.steps() <= warmup && r.steps() > 0) {
        return Err(Error::InvalidParameter(format!(
            "warmup {warmup} must be below the run length {}",
            short.steps()
        )));
    }
    let summaries: Vec<RunSummary> = runs.iter().map(|r| RunSummary::from_metrics(r, warmup)).collect();
    Ok(aggregate_summaries(summaries, warmup, None))
}

fn aggregate_summaries(runs: Vec<RunSummary>, warmup: u64, sweep_value: Option<f64>) -> ExperimentResult {
    let names: Vec<&'static str> = runs[0].metric_values().iter().map(|(n, _)| *n).collect();
    let metrics = names
        .iter()
        .map(|&name| {
            let values: Vec<f64> = runs
                .iter()
                .filter_map(|r| {
                    r.metric_values().iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
                })
                .collect();
            (name, aggregate_values(&values))
        })
        .collect();
    ExperimentResult { sweep_value, warmup, runs, metrics }
}

/// Executes `runs` seeded repetitions of `config` and aggregates them.
/// Seeds derive from (config.seed, 0, run_index), so a single-value sweep
/// reproduces this bit-exactly. `warmup` defaults to half the steps.
pub fn run_many(config: &SimConfig, runs: u64, warmup: Option<u64>) -> Result<ExperimentResult> {
    run_point(config, 0, runs, warmup, None)
}

fn run_point(
    config: &SimConfig,
    value_index: u64,
    runs: u64,
    warmup: Option<u64>,
    sweep_value: Option<f64>,
) -> Result<ExperimentResult> {
    if runs == 0 {
        return Err(Error::InvalidParameter("need at least one run".into()));
    }
    let warmup = warmup.unwrap_or(config.steps / 2);
    if config.steps > 0 && warmup >= config.steps {
        return Err(Error::InvalidParameter(format!(
            "warmup {warmup} must be below steps {}",
            config.steps
        )));
    }
    let mut summaries = Vec::with_capacity(runs as usize);
    for run_index in 0..runs {
        let mut cfg = config.clone();
        cfg.seed = derive_seed(config.seed, value_index, run_index);
        let metrics = run(&cfg)?;
        summaries.push(RunSummary::from_metrics(&metrics, warmup));
    }
    Ok(aggregate_summaries(summaries, warmup, sweep_value))
}

/// Returns a copy of `base` with the named sweep parameter set to `value`.
pub fn apply_sweep_value(base: &SimConfig, parameter: &str, value: f64) -> Result<SimConfig> {
    let mut config = base.clone();
    let as_count = |value: f64, what: &str| -> Result<u64> {
        if value < 0.0 || libm::floor(value) != value {
            return Err(Error::Config(format!("{what} must be a non-negative integer, got {value}")));
        }
        Ok(value as u64)
    };
    match parameter {
        "exploration_rate" => config.exploration_rate = value,
        "alpha" => config.alpha = value,
        "custodian_cost" => {
            if matches!(config.topology, TopologySpec::Custom(_)) {
                return Err(Error::Config(
                    "custodian_cost cannot be swept on a custom topology".into(),
                ));
            }
            config.custodian_cost = value;
        }
        "cache_capacity" => config.cache_capacity = as_count(value, "cache_capacity")? as usize,
        "sync_period" => config.sync_period = as_count(value, "sync_period")?,
        "steps" => config.steps = as_count(value, "steps")?,
        "hop_budget" => config.hop_budget = Some(as_count(value, "hop_budget")? as u32),
        "count_decay" => config.count_decay = value,
        "tree_depth" => match config.topology {
            TopologySpec::Tree { .. } => {
                config.topology = TopologySpec::Tree { depth: as_count(value, "tree_depth")? as u32 }
            }
            _ => return Err(Error::Config("tree_depth applies only to tree topologies".into())),
        },
        "chain_nodes" => match config.topology {
            TopologySpec::Chain { .. } => {
                config.topology = TopologySpec::Chain { nodes: as_count(value, "chain_nodes")? as usize }
            }
            _ => return Err(Error::Config("chain_nodes applies only to chain topologies".into())),
        },
        "zipf_beta" => match &config.workload {
            WorkloadSpec::Zipf { contents, .. } => {
                config.workload = WorkloadSpec::Zipf { contents: *contents, beta: value }
            }
            _ => return Err(Error::Config("zipf_beta applies only to zipf workloads".into())),
        },
        "contents" => match &config.workload {
            WorkloadSpec::Zipf { beta, .. } => {
                config.workload =
                    WorkloadSpec::Zipf { contents: as_count(value, "contents")? as usize, beta: *beta }
            }
            _ => return Err(Error::Config("contents applies only to zipf workloads".into())),
        },
        other => return Err(Error::Config(format!("unknown sweep parameter '{other}'"))),
    }
    config.validate()?;
    Ok(config)
}

/// Runs `runs_per_point` repetitions of `base` at every parameter value.
/// Seeds derive from (base.seed, value_index, run_index).
pub fn sweep(
    base: &SimConfig,
    parameter: &str,
    values: &[f64],
    runs_per_point: u64,
    warmup: Option<u64>,
) -> Result<Vec<ExperimentResult>> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    let mut results = Vec::with_capacity(values.len());
    for (value_index, &value) in values.iter().enumerate() {
        let config = apply_sweep_value(base, parameter, value)?;
        results.push(run_point(&config, value_index as u64, runs_per_point, warmup, Some(value))?);
    }
    Ok(results)
}

/// The exact minimizer of expected download cost over all per-node size-B
/// placements, under fixed shortest-path routing with opportunistic hits.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementOracle {
    /// Chosen contents per regular node.
    pub placement: Vec<BTreeSet<ContentId>>,
    /// Network-wide expected download cost per request.
    pub expected_cost: f64,
}

/// Exhaustively enumerates per-node placements (refusing above 10^6
/// combinations) and evaluates each against the request distribution under
/// shortest-path-first routing.
pub fn brute_force_placement_oracle(
    topology: &Topology,
    dist: &RequestDistribution,
    capacity: usize,
) -> Result<PlacementOracle> {
    let nodes = topology.node_count();
    let contents = dist.content_count();
    let slots = capacity.min(contents);

    let per_node = binomial(contents, slots);
    let total = checked_pow(per_node, nodes);
    match total {
        Some(t) if t <= 1_000_000 => {}
        _ => {
            return Err(Error::TooLarge(format!(
                "{nodes} nodes × C({contents},{slots}) subsets each ≈ {per_node}^{nodes} placements exceed the 10^6 enumeration guard"
            )))
        }
    }

    let subsets = enumerate_subsets(contents, slots);
    let spf = topology.spf_to_custodian();
    let total_rate: f64 = (0..nodes).map(|x| dist.rate(x)).sum();
    if total_rate <= 0.0 {
        return Err(Error::InvalidParameter("no client issues requests".into()));
    }

    // Mixed-radix counter over per-node subset indices.
    let mut indices = vec![0usize; nodes];
    let mut best_cost = f64::INFINITY;
    let mut best: Option<Vec<usize>> = None;
    loop {
        let cost = expected_cost_for(topology, dist, &spf, &subsets, &indices, total_rate);
        if cost < best_cost {
            best_cost = cost;
            best = Some(indices.clone());
        }
        // Advance the counter.
        let mut pos = 0;
        loop {
            if pos == nodes {
                let chosen = best.expect("at least one placement evaluated");
                let placement = chosen
                    .iter()
                    .map(|&i| subsets[i].iter().copied().collect::<BTreeSet<_>>())
                    .collect();
                return Ok(PlacementOracle { placement, expected_cost: best_cost });
            }
            indices[pos] += 1;
            if indices[pos] < subsets.len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

fn expected_cost_for(
    topology: &Topology,
    dist: &RequestDistribution,
    spf: &crate::topology::SpfTable,
    subsets: &[Vec<ContentId>],
    indices: &[usize],
    total_rate: f64,
) -> f64 {
    let holds = |node: NodeId, d: ContentId| subsets[indices[node]].binary_search(&d).is_ok();
    let mut cost = 0.0;
    for x in 0..topology.node_count() {
        let share = dist.rate(x) / total_rate;
        if share <= 0.0 {
            continue;
        }
        for d in 0..dist.content_count() {
            let p = dist.request_prob(x, d);
            if p <= 0.0 {
                continue;
            }
            // Walk the shortest path until a holder or the custodian.
            let mut node = x;
            let mut acc = 0.0;
            while !topology.is_custodian(node) && !holds(node, d) {
                let next = spf.next[node].expect("route to custodian exists");
                acc += topology.link_cost(node, next);
                node = next;
            }
            cost += share * p * acc;
        }
    }
    cost
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k); // C(n,k) = C(n,n−k); callers guarantee k <= n
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut result: u128 = 1;
    for _ in 0..exp {
        result = result.checked_mul(base)?;
        if result > 10_000_000 {
            return None;
        }
    }
    Some(result)
}

/// All size-k subsets of 0..n in lexicographic order, each sorted.
fn enumerate_subsets(n: usize, k: usize) -> Vec<Vec<ContentId>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn recurse(n: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for c in start..n {
            current.push(c);
            recurse(n, k, c + 1, current, out);
            current.pop();
        }
    }
    recurse(n, k, 0, &mut current, &mut out);
    out
}

/// Distinct contents cached network-wide per step, from (step, node,
/// content) dump rows.
pub fn diversity_metric(rows: &[(u64, NodeId, ContentId)]) -> Vec<(u64, usize)> {
    let mut steps: Vec<u64> = rows.iter().map(|r| r.0).collect();
    steps.sort_unstable();
    steps.dedup();
    steps
        .into_iter()
        .map(|step| {
            let distinct: BTreeSet<ContentId> =
                rows.iter().filter(|r| r.0 == step).map(|r| r.2).collect();
            (step, distinct.len())
        })
        .collect()
}

/// A sanity helper used by tests and the oracle: the expected no-cache cost
/// Σ share_x · spf_cost(x) (content mix does not matter when nothing is
/// cached).
pub fn no_cache_expected_cost(topology: &Topology, dist: &RequestDistribution) -> f64 {
    let spf = topology.spf_to_custodian();
    let total_rate: f64 = (0..topology.node_count()).map(|x| dist.rate(x)).sum();
    (0..topology.node_count())
        .map(|x| dist.rate(x) / total_rate * spf.dist[x])
        .sum()
}

/// Per-content weights w_x(d) = r_x(d) · Q_x(d) at a node, the ranking a
/// locally optimal cache would follow.
pub fn local_weights(
    dist: &RequestDistribution,
    node: NodeId,
    cost_to_go: impl Fn(ContentId) -> f64,
) -> Vec<f64> {
    (0..dist.content_count())
        .map(|d| dist.request_prob(node, d) * cost_to_go(d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::Strategy;
    use crate::topology::build_chain;
    use crate::workload::zipf_weights;

    fn series_with_costs(costs: &[f64]) -> MetricsSeries {
        // One completed unit-cost request per step with the given cost.
        let mut m = MetricsSeries::new(1, 1);
        for &c in costs {
            m.per_step.push(crate::metrics::StepMetrics {
                generated: 1,
                completed: 1,
                cost_sum: c,
                custodian_hits: 0,
                budget_fallbacks: 0,
                nonce_fallbacks: 0,
            });
        }
        m
    }

    #[test]
    fn identical_runs_have_zero_width_intervals() {
        let runs = vec![series_with_costs(&[4.0; 10]), series_with_costs(&[4.0; 10])];
        let result = aggregate(&runs, 2).unwrap();
        let agg = result.mean_download_cost();
        assert_eq!(agg.mean, 4.0);
        assert_eq!(agg.ci_half_width, Some(0.0));
    }

    #[test]
    fn two_run_interval_matches_the_closed_form() {
        let runs = vec![series_with_costs(&[4.0; 4]), series_with_costs(&[6.0; 4])];
        let result = aggregate(&runs, 0).unwrap();
        let agg = result.mean_download_cost();
        assert_eq!(agg.mean, 5.0);
        // s = sqrt(((4-5)^2 + (6-5)^2)/1) = sqrt(2); hw = t(0.975,1)·s/√2.
        let expected = 12.706 * (2.0f64).sqrt() / (2.0f64).sqrt();
        assert!((agg.ci_half_width.unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn single_run_has_undefined_interval() {
        let runs = vec![series_with_costs(&[3.0; 5])];
        let result = aggregate(&runs, 1).unwrap();
        assert_eq!(result.mean_download_cost().ci_half_width, None);
    }

    #[test]
    fn aggregate_is_permutation_invariant() {
        let a = series_with_costs(&[4.0; 6]);
        let b = series_with_costs(&[6.0; 6]);
        let c = series_with_costs(&[5.0; 6]);
        let r1 = aggregate(&[a.clone(), b.clone(), c.clone()], 1).unwrap();
        let r2 = aggregate(&[c, a, b], 1).unwrap();
        assert_eq!(r1.metrics, r2.metrics);
    }

    #[test]
    fn aggregate_rejects_bad_warmup() {
        let runs = vec![series_with_costs(&[1.0; 5])];
        assert!(aggregate(&runs, 5).is_err());
        assert!(aggregate(&[], 0).is_err());
    }

    #[test]
    fn t_table_matches_reference_quantiles() {
        use statrs::distribution::{ContinuousCDF, StudentsT};
        for df in [1u64, 4, 9, 29] {
            let exact = StudentsT::new(0.0, 1.0, df as f64).unwrap().inverse_cdf(0.975);
            assert!(
                (t_critical_975(df) - exact).abs() < 5e-3,
                "df {df}: table {} vs exact {exact}",
                t_critical_975(df)
            );
        }
    }

    #[test]
    fn single_value_sweep_reproduces_a_plain_experiment() {
        let base = SimConfig {
            steps: 60,
            workload: WorkloadSpec::Zipf { contents: 10, beta: 0.8 },
            topology: TopologySpec::Chain { nodes: 3 },
            cache_capacity: 2,
            ..SimConfig::default()
        };
        let plain = run_many(&base, 3, Some(30)).unwrap();
        let swept = sweep(&base, "exploration_rate", &[base.exploration_rate], 3, Some(30)).unwrap();
        assert_eq!(swept.len(), 1);
        assert_eq!(swept[0].runs, plain.runs);
        assert_eq!(swept[0].metrics, plain.metrics);
    }

    #[test]
    fn sweep_rejects_unknown_parameters_and_empty_values() {
        let base = SimConfig::default();
        assert!(sweep(&base, "definitely_not_a_field", &[1.0], 1, None).is_err());
        assert!(sweep(&base, "exploration_rate", &[], 1, None).is_err());
    }

    #[test]
    fn oracle_with_no_capacity_equals_the_no_cache_expectation() {
        let topo = build_chain(3, 50.0).unwrap();
        let dist =
            RequestDistribution::new(zipf_weights(4, 0.8).unwrap(), vec![1.0, 1.0, 1.0]).unwrap();
        let oracle = brute_force_placement_oracle(&topo, &dist, 0).unwrap();
        let expected = no_cache_expected_cost(&topo, &dist);
        assert!((oracle.expected_cost - expected).abs() < 1e-12);
        // (52 + 51 + 50) / 3
        assert!((expected - 51.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_with_full_capacity_costs_nothing() {
        let topo = build_chain(2, 50.0).unwrap();
        let dist = RequestDistribution::new(zipf_weights(3, 1.0).unwrap(), vec![1.0, 1.0]).unwrap();
        let oracle = brute_force_placement_oracle(&topo, &dist, 3).unwrap();
        assert_eq!(oracle.expected_cost, 0.0);
        assert!(oracle.placement.iter().all(|p| p.len() == 3));
    }

    #[test]
    fn oracle_enumerates_the_two_client_chain() {
        // Chain of 2 clients + custodian, C=3, B=1, Zipf(0.8): 9 placements.
        let topo = build_chain(2, 10.0).unwrap();
        let probs = zipf_weights(3, 0.8).unwrap();
        let dist = RequestDistribution::new(probs.clone(), vec![1.0, 1.0]).unwrap();
        let oracle = brute_force_placement_oracle(&topo, &dist, 1).unwrap();

        // Independent check: evaluate all 9 placements directly.
        let spf = topo.spf_to_custodian();
        let mut best = f64::INFINITY;
        for a in 0..3usize {
            for b in 0..3usize {
                let mut cost = 0.0;
                for x in 0..2usize {
                    for d in 0..3usize {
                        let holder = [a, b];
                        let mut node = x;
                        let mut acc = 0.0;
                        while node != topo.custodian() && holder.get(node) != Some(&d) {
                            let next = spf.next[node].unwrap();
                            acc += topo.link_cost(node, next);
                            node = next;
                        }
                        cost += 0.5 * probs[d] * acc;
                    }
                }
                best = best.min(cost);
            }
        }
        assert!((oracle.expected_cost - best).abs() < 1e-12);
        assert!(oracle.placement.iter().all(|p| p.len() == 1));
    }

    #[test]
    fn oracle_refuses_oversized_instances() {
        let topo = crate::topology::build_layered(3, 4, 100.0).unwrap();
        let dist = RequestDistribution::new(zipf_weights(100, 0.8).unwrap(), vec![1.0; 12]).unwrap();
        let err = brute_force_placement_oracle(&topo, &dist, 10).unwrap_err();
        assert!(matches!(err, Error::TooLarge(_)), "{err}");
    }

    #[test]
    fn oracle_cost_lower_bounds_a_heuristic_run() {
        let config = SimConfig {
            topology: TopologySpec::Chain { nodes: 3 },
            custodian_cost: 10.0,
            workload: WorkloadSpec::Zipf { contents: 5, beta: 0.8 },
            strategy: Strategy::SPF_LFU,
            cache_capacity: 1,
            steps: 800,
            ..SimConfig::default()
        };
        let topo = config.build_topology().unwrap();
        let dist =
            RequestDistribution::new(zipf_weights(5, 0.8).unwrap(), vec![1.0, 1.0, 1.0]).unwrap();
        let oracle = brute_force_placement_oracle(&topo, &dist, 1).unwrap();
        let metrics = run(&config).unwrap();
        let steady = metrics.window(400).mean_download_cost();
        assert!(
            oracle.expected_cost <= steady + 1e-9,
            "oracle {} must lower-bound the heuristic {steady}",
            oracle.expected_cost
        );
    }

    #[test]
    fn diversity_counts_distinct_contents_per_step() {
        // Two caches holding identical contents → diversity = B.
        let rows = vec![(0, 0, 1), (0, 0, 2), (0, 1, 1), (0, 1, 2)];
        assert_eq!(diversity_metric(&rows), vec![(0, 2)]);
        // Disjoint caches → diversity = B · nodes.
        let rows = vec![(1, 0, 1), (1, 0, 2), (1, 1, 3), (1, 1, 4)];
        assert_eq!(diversity_metric(&rows), vec![(1, 4)]);
    }
}
