//! Per-node tabular cost-to-go estimates with a periodically synced routing
//! snapshot.
//!
//! Each node x keeps Q(d, y): the estimated cost to fetch content d through
//! neighbor y. Updates land in the live table; routing reads a snapshot that
//! is refreshed every `sync_period` steps, which damps count-to-infinity
//! oscillation while estimates settle. Tables start at 0 everywhere, so
//! untried neighbors look optimistically cheap.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::topology::{ContentId, NodeId, Topology};

/// Sentinel `sync_period`: the routing snapshot stays frozen at its initial
/// contents.
pub const SYNC_NEVER: u64 = u64::MAX;

/// Which table a read goes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableView {
    /// Freshest estimates; receives every update.
    Live,
    /// The routing copy, refreshed only at sync points.
    Snapshot,
}

#[derive(Debug, Clone)]
pub struct QTables {
    alpha: f64,
    sync_period: u64,
    exploration_rate: f64,
    contents: usize,
    /// Neighbor lists copied from the topology; entry order defines the
    /// value layout per node.
    neighbors: Vec<Vec<NodeId>>,
    /// Per node: contents × degree values, content-major.
    live: Vec<Vec<f64>>,
    snapshot: Vec<Vec<f64>>,
}

impl QTables {
    pub fn new(
        topology: &Topology,
        contents: usize,
        alpha: f64,
        sync_period: u64,
        exploration_rate: f64,
    ) -> Result<QTables> {
        if contents == 0 {
            return Err(Error::InvalidParameter("need at least one content".into()));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must be in (0, 1], got {alpha}")));
        }
        if sync_period == 0 {
            return Err(Error::InvalidParameter("sync period must be positive".into()));
        }
        if !(0.0..1.0).contains(&exploration_rate) {
            return Err(Error::InvalidParameter(format!(
                "exploration rate must be in [0, 1), got {exploration_rate}"
            )));
        }
        let neighbors: Vec<Vec<NodeId>> = (0..topology.graph_size())
            .map(|x| topology.neighbors(x).to_vec())
            .collect();
        let live: Vec<Vec<f64>> = neighbors.iter().map(|n| vec![0.0; n.len() * contents]).collect();
        let snapshot = live.clone();
        Ok(QTables { alpha, sync_period, exploration_rate, contents, neighbors, live, snapshot })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sync_period(&self) -> u64 {
        self.sync_period
    }

    pub fn exploration_rate(&self) -> f64 {
        self.exploration_rate
    }

    fn slot(&self, x: NodeId, d: ContentId, y: NodeId) -> Option<usize> {
        let idx = self.neighbors[x].binary_search(&y).ok()?;
        Some(d * self.neighbors[x].len() + idx)
    }

    fn table(&self, view: TableView) -> &Vec<Vec<f64>> {
        match view {
            TableView::Live => &self.live,
            TableView::Snapshot => &self.snapshot,
        }
    }

    pub fn get(&self, view: TableView, x: NodeId, d: ContentId, y: NodeId) -> f64 {
        let slot = self.slot(x, d, y).expect("y must be a neighbor of x");
        self.table(view)[x][slot]
    }

    /// The exponential-moving-average update toward `t + q_min`. Only the
    /// live table changes; returns the new estimate.
    pub fn q_update(&mut self, x: NodeId, d: ContentId, y: NodeId, t: f64, q_min: f64) -> Result<f64> {
        let slot = self
            .slot(x, d, y)
            .ok_or_else(|| Error::InvalidParameter(format!("{y} is not a neighbor of {x}")))?;
        let q = self.live[x][slot];
        let updated = q + self.alpha * (t + q_min - q);
        self.live[x][slot] = updated;
        Ok(updated)
    }

    /// Minimum cost-to-go at x for d: the best neighbor and its estimate,
    /// ties broken by lowest neighbor id.
    pub fn min_cost_to_go(&self, view: TableView, x: NodeId, d: ContentId) -> Result<(NodeId, f64)> {
        let neighbors = &self.neighbors[x];
        if neighbors.is_empty() {
            return Err(Error::InvalidTopology(format!("node {x} has no neighbors")));
        }
        let row = &self.table(view)[x];
        let base = d * neighbors.len();
        let mut best = (neighbors[0], row[base]);
        for (i, &y) in neighbors.iter().enumerate().skip(1) {
            let v = row[base + i];
            if v < best.1 {
                best = (y, v);
            }
        }
        Ok(best)
    }

    /// The minimum a responder reports back in the acknowledgement: the
    /// smallest live estimate over all of its neighbors. Optimistically
    /// low entries (untried neighbors still at 0) are quoted as-is; the
    /// resulting underestimates attract traffic and correct themselves.
    pub fn reported_min(&self, y: NodeId, d: ContentId) -> f64 {
        self.min_cost_to_go(TableView::Live, y, d)
            .expect("responder has neighbors")
            .1
    }

    /// Routing decision for a request at x that arrived from `upstream`:
    /// with probability `exploration_rate` a uniformly random neighbor
    /// (never the upstream sender when an alternative exists), otherwise
    /// the snapshot argmin.
    pub fn select_next_hop<R: Rng + ?Sized>(
        &self,
        x: NodeId,
        d: ContentId,
        upstream: Option<NodeId>,
        rng: &mut R,
    ) -> Result<NodeId> {
        let neighbors = &self.neighbors[x];
        if neighbors.is_empty() {
            return Err(Error::InvalidTopology(format!("node {x} has no neighbors")));
        }
        if neighbors.len() == 1 {
            return Ok(neighbors[0]);
        }
        if self.exploration_rate > 0.0 && rng.gen_bool(self.exploration_rate) {
            let candidates: Vec<NodeId> = match upstream {
                Some(up) => neighbors.iter().copied().filter(|&y| y != up).collect(),
                None => neighbors.clone(),
            };
            let pick = rng.gen_range(0..candidates.len());
            return Ok(candidates[pick]);
        }
        Ok(self.min_cost_to_go(TableView::Snapshot, x, d)?.0)
    }

    /// Copies live into the routing snapshot when `step` is a sync point.
    pub fn sync_routing_snapshot(&mut self, step: u64) {
        if self.sync_period != SYNC_NEVER && step % self.sync_period == 0 {
            for (dst, src) in self.snapshot.iter_mut().zip(&self.live) {
                dst.clone_from(src);
            }
        }
    }

    /// All (node, content, neighbor, value) entries of a table, in node,
    /// content, neighbor order. Used for dumps and convergence plots.
    pub fn entries(&self, view: TableView) -> impl Iterator<Item = (NodeId, ContentId, NodeId, f64)> + '_ {
        let table = self.table(view);
        self.neighbors.iter().enumerate().flat_map(move |(x, ns)| {
            (0..self.contents).flat_map(move |d| {
                ns.iter()
                    .enumerate()
                    .map(move |(i, &y)| (x, d, y, table[x][d * ns.len() + i]))
            })
        })
    }
}
