#![cfg_attr(not(test), no_std)]

//! Core engine for simulating networks of cache-routers that jointly learn
//! routes and make cost-aware cache eviction decisions.
//!
//! Everything in this crate is deterministic given a seed and free of IO:
//! topology construction, workload sampling, tabular cost-to-go learning,
//! cache policies (LRU / LFU / MEC), the lock-step request lifecycle, and
//! multi-run experiment aggregation. File formats and the command line live
//! in the companion `icnsim-cli` crate.

extern crate alloc;

pub mod caching;
pub mod error;
pub mod experiment;
pub mod learning;
pub mod metrics;
pub mod simulator;
pub mod topology;
pub mod workload;

pub use caching::{CachePolicy, CacheState};
pub use error::{Error, Result};
pub use experiment::{aggregate, sweep, ExperimentResult, RunSummary};
pub use learning::{QTables, TableView, SYNC_NEVER};
pub use metrics::MetricsSeries;
pub use simulator::{run, ClientMode, Routing, SimConfig, Simulation, Strategy, TopologySpec, WorkloadSpec};
pub use topology::{ContentId, NodeId, Topology};

/// Mixes a base seed with stream indices so that sweep points and runs get
/// independent, reproducible RNG streams. A plain experiment is the
/// `value_index = 0` case, which keeps single-value sweeps bit-identical to
/// multi-run experiments.
pub fn derive_seed(base_seed: u64, value_index: u64, run_index: u64) -> u64 {
    // SplitMix64 finalizer over the packed indices.
    let mut z = base_seed
        .wrapping_add(value_index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(run_index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
