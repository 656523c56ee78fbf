//! Per-step and per-run measurement series produced by a simulation.

use alloc::vec;
use alloc::vec::Vec;

use crate::topology::{ContentId, NodeId};

/// Counters for one lock-step. Every generated request completes within its
/// step, so `generated == completed` and completions split into cache hits
/// and custodian services.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepMetrics {
    pub generated: u64,
    pub completed: u64,
    /// Sum of download costs over requests completed this step.
    pub cost_sum: f64,
    /// Completions served by the custodian.
    pub custodian_hits: u64,
    /// Requests forced onto shortest paths by hop-budget exhaustion.
    pub budget_fallbacks: u64,
    /// Requests forced onto shortest paths by duplicate-nonce detection.
    pub nonce_fallbacks: u64,
}

impl StepMetrics {
    /// Completions served from some cache (origin included).
    pub fn cache_hits(&self) -> u64 {
        self.completed - self.custodian_hits
    }

    pub fn mean_cost(&self) -> Option<f64> {
        if self.completed == 0 {
            None
        } else {
            Some(self.cost_sum / self.completed as f64)
        }
    }
}

/// Aggregated counters over a step window.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WindowStats {
    pub steps: u64,
    pub completed: u64,
    pub cost_sum: f64,
    pub custodian_hits: u64,
    pub budget_fallbacks: u64,
    pub nonce_fallbacks: u64,
}

impl WindowStats {
    pub fn mean_download_cost(&self) -> f64 {
        if self.completed == 0 {
            0.0
        } else {
            self.cost_sum / self.completed as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSeries {
    nodes: usize,
    contents: usize,
    /// One entry per executed step.
    pub per_step: Vec<StepMetrics>,
    /// Distinct contents cached network-wide after each step; recorded only
    /// when diversity tracking is enabled.
    pub diversity: Vec<usize>,
    /// Download cost sums per content over all completions.
    pub per_content_cost: Vec<f64>,
    /// Completion counts per content.
    pub per_content_count: Vec<u64>,
    /// Cache hits per (node, content), flattened node-major.
    node_hits: Vec<u64>,
    /// Cache misses per (node, content), flattened node-major.
    node_misses: Vec<u64>,
}

impl MetricsSeries {
    pub fn new(nodes: usize, contents: usize) -> MetricsSeries {
        MetricsSeries {
            nodes,
            contents,
            per_step: Vec::new(),
            diversity: Vec::new(),
            per_content_cost: vec![0.0; contents],
            per_content_count: vec![0; contents],
            node_hits: vec![0; nodes * contents],
            node_misses: vec![0; nodes * contents],
        }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn contents(&self) -> usize {
        self.contents
    }

    pub fn steps(&self) -> u64 {
        self.per_step.len() as u64
    }

    pub(crate) fn record_lookup(&mut self, node: NodeId, content: ContentId, hit: bool) {
        let slot = node * self.contents + content;
        if hit {
            self.node_hits[slot] += 1;
        } else {
            self.node_misses[slot] += 1;
        }
    }

    pub(crate) fn record_completion(&mut self, content: ContentId, cost: f64) {
        self.per_content_cost[content] += cost;
        self.per_content_count[content] += 1;
    }

    pub fn hit_count(&self, node: NodeId, content: ContentId) -> u64 {
        self.node_hits[node * self.contents + content]
    }

    pub fn miss_count(&self, node: NodeId, content: ContentId) -> u64 {
        self.node_misses[node * self.contents + content]
    }

    /// Measured hit probability for (node, content); `None` before any
    /// lookup happened there.
    pub fn hit_rate(&self, node: NodeId, content: ContentId) -> Option<f64> {
        let hits = self.hit_count(node, content);
        let total = hits + self.miss_count(node, content);
        if total == 0 {
            None
        } else {
            Some(hits as f64 / total as f64)
        }
    }

    /// Mean download cost of a content over the whole run.
    pub fn per_content_mean_cost(&self, content: ContentId) -> Option<f64> {
        let n = self.per_content_count[content];
        if n == 0 {
            None
        } else {
            Some(self.per_content_cost[content] / n as f64)
        }
    }

    /// Sums step counters from `from_step` (inclusive) to the end.
    pub fn window(&self, from_step: u64) -> WindowStats {
        let mut w = WindowStats::default();
        for s in self.per_step.iter().skip(from_step as usize) {
            w.steps += 1;
            w.completed += s.completed;
            w.cost_sum += s.cost_sum;
            w.custodian_hits += s.custodian_hits;
            w.budget_fallbacks += s.budget_fallbacks;
            w.nonce_fallbacks += s.nonce_fallbacks;
        }
        w
    }

    pub fn total_generated(&self) -> u64 {
        self.per_step.iter().map(|s| s.generated).sum()
    }

    pub fn total_completed(&self) -> u64 {
        self.per_step.iter().map(|s| s.completed).sum()
    }

    /// Per-step mean download costs; steps with no completions yield None.
    pub fn cost_series(&self) -> impl Iterator<Item = Option<f64>> + '_ {
        self.per_step.iter().map(|s| s.mean_cost())
    }
}
