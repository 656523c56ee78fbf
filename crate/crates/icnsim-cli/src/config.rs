//! TOML run configuration. Every key has a default taken from the
//! reference setup (12-node layered network, cache size 10, Zipf 0.8 over
//! 100 contents, custodian cost 100, exploration rate 0.05), so an empty
//! config runs the reference experiment.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use icnsim_core::simulator::{ClientMode, SimConfig, Strategy, TopologySpec, WorkloadSpec};

use crate::formats::{load_topology, load_trace};
use crate::CliFailure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub topology: TopologySection,
    pub workload: WorkloadSection,
    pub strategy: StrategySection,
    pub sim: SimSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TopologySection {
    /// One of `chain`, `tree`, `layered`, `file`.
    pub kind: String,
    /// Chain length (`kind = "chain"`).
    pub nodes: usize,
    /// Tree depth (`kind = "tree"`).
    pub depth: u32,
    /// Grid shape (`kind = "layered"`).
    pub levels: usize,
    pub width: usize,
    /// Topology file (`kind = "file"`), relative to the config file.
    pub path: Option<PathBuf>,
    pub custodian_cost: f64,
    /// `all` or `leaves`.
    pub clients: String,
}

impl Default for TopologySection {
    fn default() -> Self {
        TopologySection {
            kind: "layered".into(),
            nodes: 5,
            depth: 3,
            levels: 3,
            width: 4,
            path: None,
            custodian_cost: 100.0,
            clients: "all".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WorkloadSection {
    /// `zipf` or `trace`.
    pub kind: String,
    pub contents: usize,
    pub beta: f64,
    /// Trace CSV (`kind = "trace"`), relative to the config file.
    pub path: Option<PathBuf>,
    pub epoch_steps: u64,
    pub count_decay: f64,
}

impl Default for WorkloadSection {
    fn default() -> Self {
        WorkloadSection {
            kind: "zipf".into(),
            contents: 100,
            beta: 0.8,
            path: None,
            epoch_steps: 1000,
            count_decay: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StrategySection {
    pub name: String,
}

impl Default for StrategySection {
    fn default() -> Self {
        StrategySection { name: "qcaching".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub steps: u64,
    /// Steps discarded before aggregating; default half the steps.
    pub warmup: Option<u64>,
    pub runs: u64,
    pub seed: u64,
    pub cache_capacity: usize,
    pub alpha: f64,
    pub exploration_rate: f64,
    pub sync_period: u64,
    pub hop_budget: Option<u32>,
    pub record_diversity: bool,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            steps: 2000,
            warmup: None,
            runs: 10,
            seed: 1,
            cache_capacity: 10,
            alpha: 0.5,
            exploration_rate: 0.05,
            sync_period: 50,
            hop_budget: None,
            record_diversity: false,
        }
    }
}

/// A fully resolved run plan: the core config plus experiment framing.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: SimConfig,
    pub runs: u64,
    pub warmup: Option<u64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<FileConfig, CliFailure> {
        toml::from_str(text).map_err(|e| CliFailure::Config(format!("bad config: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Builds the core `SimConfig`, loading referenced files relative to
    /// `base_dir`.
    pub fn resolve(&self, base_dir: &Path) -> Result<Resolved, CliFailure> {
        let topology = match self.topology.kind.as_str() {
            "chain" => TopologySpec::Chain { nodes: self.topology.nodes },
            "tree" => TopologySpec::Tree { depth: self.topology.depth },
            "layered" => {
                TopologySpec::Layered { levels: self.topology.levels, width: self.topology.width }
            }
            "file" => {
                let rel = self.topology.path.as_ref().ok_or_else(|| {
                    CliFailure::Config("topology.kind = \"file\" needs topology.path".into())
                })?;
                TopologySpec::Custom(load_topology(&base_dir.join(rel))?)
            }
            other => {
                return Err(CliFailure::Config(format!(
                    "unknown topology.kind '{other}' (expected chain, tree, layered, or file)"
                )))
            }
        };
        let client_mode = match self.topology.clients.as_str() {
            "all" => ClientMode::EveryNode,
            "leaves" => ClientMode::Leaves,
            other => {
                return Err(CliFailure::Config(format!(
                    "unknown topology.clients '{other}' (expected all or leaves)"
                )))
            }
        };
        let workload = match self.workload.kind.as_str() {
            "zipf" => WorkloadSpec::Zipf { contents: self.workload.contents, beta: self.workload.beta },
            "trace" => {
                let rel = self.workload.path.as_ref().ok_or_else(|| {
                    CliFailure::Config("workload.kind = \"trace\" needs workload.path".into())
                })?;
                WorkloadSpec::Trace {
                    epochs: load_trace(&base_dir.join(rel))?,
                    epoch_steps: self.workload.epoch_steps,
                }
            }
            other => {
                return Err(CliFailure::Config(format!(
                    "unknown workload.kind '{other}' (expected zipf or trace)"
                )))
            }
        };
        let strategy = Strategy::from_name(&self.strategy.name)
            .map_err(|e| CliFailure::Config(e.to_string()))?;
        let config = SimConfig {
            topology,
            custodian_cost: self.topology.custodian_cost,
            client_mode,
            workload,
            strategy,
            cache_capacity: self.sim.cache_capacity,
            alpha: self.sim.alpha,
            exploration_rate: self.sim.exploration_rate,
            sync_period: self.sim.sync_period,
            hop_budget: self.sim.hop_budget,
            steps: self.sim.steps,
            seed: self.sim.seed,
            count_decay: self.workload.count_decay,
            record_diversity: self.sim.record_diversity,
        };
        config.validate().map_err(|e| CliFailure::Config(e.to_string()))?;
        if self.sim.runs == 0 {
            return Err(CliFailure::Config("sim.runs must be at least 1".into()));
        }
        if let Some(w) = self.sim.warmup {
            if self.sim.steps > 0 && w >= self.sim.steps {
                return Err(CliFailure::Config(format!(
                    "sim.warmup {w} must be below sim.steps {}",
                    self.sim.steps
                )));
            }
        }
        Ok(Resolved { config, runs: self.sim.runs, warmup: self.sim.warmup })
    }
}

/// Known keys per section, used to qualify bare override keys.
const SECTIONS: [(&str, &[&str]); 4] = [
    (
        "topology",
        &["kind", "nodes", "depth", "levels", "width", "path", "custodian_cost", "clients"],
    ),
    ("workload", &["kind", "contents", "beta", "path", "epoch_steps", "count_decay"]),
    ("strategy", &["name"]),
    (
        "sim",
        &[
            "steps",
            "warmup",
            "runs",
            "seed",
            "cache_capacity",
            "alpha",
            "exploration_rate",
            "sync_period",
            "hop_budget",
            "record_diversity",
        ],
    ),
];

fn parse_override_value(raw: &str) -> toml::Value {
    if let Ok(v) = raw.parse::<i64>() {
        return toml::Value::Integer(v);
    }
    if let Ok(v) = raw.parse::<f64>() {
        return toml::Value::Float(v);
    }
    if let Ok(v) = raw.parse::<bool>() {
        return toml::Value::Boolean(v);
    }
    toml::Value::String(raw.to_string())
}

/// Applies `key=value` overrides to a config document. Keys may be given
/// as `section.key` or as a bare key when it is unambiguous.
pub fn apply_overrides(text: &str, overrides: &[String]) -> Result<FileConfig, CliFailure> {
    let mut table: toml::Table =
        toml::from_str(text).map_err(|e| CliFailure::Config(format!("bad config: {e}")))?;
    for entry in overrides {
        let (key, raw_value) = entry.split_once('=').ok_or_else(|| {
            CliFailure::Config(format!("override '{entry}' must look like key=value"))
        })?;
        let (section, field) = match key.split_once('.') {
            Some((s, f)) => {
                let known = SECTIONS
                    .iter()
                    .find(|(name, _)| *name == s)
                    .ok_or_else(|| CliFailure::Config(format!("unknown config section '{s}'")))?;
                if !known.1.contains(&f) {
                    return Err(CliFailure::Config(format!("unknown config key '{s}.{f}'")));
                }
                (s, f)
            }
            None => {
                let matches: Vec<&str> = SECTIONS
                    .iter()
                    .filter(|(_, fields)| fields.contains(&key))
                    .map(|(name, _)| *name)
                    .collect();
                match matches.as_slice() {
                    [] => return Err(CliFailure::Config(format!("unknown config key '{key}'"))),
                    [section] => (*section, key),
                    many => {
                        return Err(CliFailure::Config(format!(
                            "ambiguous config key '{key}' (in sections {}); qualify it",
                            many.join(", ")
                        )))
                    }
                }
            }
        };
        let entry_table = table
            .entry(section.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        let toml::Value::Table(entry_table) = entry_table else {
            return Err(CliFailure::Config(format!("config section '{section}' is not a table")));
        };
        entry_table.insert(field.to_string(), parse_override_value(raw_value));
    }
    let merged = toml::to_string(&table).expect("table serializes");
    FileConfig::parse(&merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_reference_setup() {
        let cfg = FileConfig::parse("").unwrap();
        let resolved = cfg.resolve(Path::new(".")).unwrap();
        assert_eq!(resolved.config, SimConfig::default());
        assert_eq!(resolved.runs, 10);
    }

    #[test]
    fn config_round_trips_through_toml() {
        let text = r#"
[topology]
kind = "tree"
depth = 4
custodian_cost = 50.0
clients = "leaves"

[workload]
contents = 64
beta = 1.2

[strategy]
name = "qlfu"

[sim]
steps = 500
runs = 3
seed = 9
exploration_rate = 0.2
"#;
        let parsed = FileConfig::parse(text).unwrap();
        let reparsed = FileConfig::parse(&parsed.to_toml()).unwrap();
        assert_eq!(parsed, reparsed);
        let a = parsed.resolve(Path::new(".")).unwrap().config;
        let b = reparsed.resolve(Path::new(".")).unwrap().config;
        assert_eq!(a, b);
    }

    #[test]
    fn overrides_take_effect_and_reject_unknown_keys() {
        let cfg = apply_overrides("", &["steps=0".into(), "strategy.name=inform".into()]).unwrap();
        assert_eq!(cfg.sim.steps, 0);
        assert_eq!(cfg.strategy.name, "inform");

        assert!(apply_overrides("", &["bogus=1".into()]).is_err());
        assert!(apply_overrides("", &["sim.bogus=1".into()]).is_err());
        assert!(apply_overrides("", &["kind=tree".into()]).is_err(), "ambiguous key must fail");
        let cfg = apply_overrides("", &["topology.kind=chain".into(), "nodes=7".into()]).unwrap();
        assert_eq!(cfg.topology.kind, "chain");
        assert_eq!(cfg.topology.nodes, 7);
    }

    #[test]
    fn unknown_names_are_rejected_at_resolve_time() {
        let bad = FileConfig::parse("[strategy]\nname = \"fancy\"\n").unwrap();
        assert!(bad.resolve(Path::new(".")).is_err());
        let bad = FileConfig::parse("[topology]\nkind = \"ring\"\n").unwrap();
        assert!(bad.resolve(Path::new(".")).is_err());
    }
}
