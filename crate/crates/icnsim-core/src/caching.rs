//! Per-node content stores: LRU, LFU, and MEC admission/eviction.
//!
//! LFU and MEC share the compare-then-replace structure: an incoming
//! content displaces the lowest-scoring stored item only if it scores
//! strictly higher. LFU scores by request count alone; MEC weights the
//! count by the current cost-to-go, so freezing the cost-to-go at 1 makes
//! MEC and LFU decide identically. LRU always admits and evicts the least
//! recently accessed item.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::topology::ContentId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CachePolicy {
    Lru,
    Lfu,
    Mec,
}

impl CachePolicy {
    pub fn name(&self) -> &'static str {
        match self {
            CachePolicy::Lru => "lru",
            CachePolicy::Lfu => "lfu",
            CachePolicy::Mec => "mec",
        }
    }
}

/// Outcome of an admission decision on the backward pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admission {
    pub admitted: bool,
    pub evicted: Option<ContentId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CacheState {
    capacity: usize,
    policy: CachePolicy,
    stored: BTreeSet<ContentId>,
    /// Last-access order for stored contents (LRU); values come from a
    /// monotonic per-cache access counter so within-step accesses stay
    /// ordered.
    recency: BTreeMap<ContentId, u64>,
    /// Request counts per content, kept for every content ever seen.
    /// Fractional because trace-driven runs decay them at epoch boundaries.
    counts: Vec<f64>,
    access_clock: u64,
}

impl CacheState {
    pub fn new(capacity: usize, policy: CachePolicy, contents: usize) -> CacheState {
        CacheState {
            capacity,
            policy,
            stored: BTreeSet::new(),
            recency: BTreeMap::new(),
            counts: vec![0.0; contents],
            access_clock: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn policy(&self) -> CachePolicy {
        self.policy
    }

    pub fn len(&self) -> usize {
        self.stored.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stored.is_empty()
    }

    pub fn contains(&self, d: ContentId) -> bool {
        self.stored.contains(&d)
    }

    pub fn stored(&self) -> impl Iterator<Item = ContentId> + '_ {
        self.stored.iter().copied()
    }

    pub fn request_count(&self, d: ContentId) -> f64 {
        self.counts[d]
    }

    /// Counts one request for `d` (forward pass, every visited node).
    pub fn record_request(&mut self, d: ContentId) {
        self.counts[d] += 1.0;
    }

    /// Checks the store; a hit refreshes recency under LRU.
    pub fn lookup(&mut self, d: ContentId) -> bool {
        if self.stored.contains(&d) {
            if self.policy == CachePolicy::Lru {
                self.access_clock += 1;
                self.recency.insert(d, self.access_clock);
            }
            true
        } else {
            false
        }
    }

    /// Admission decision for a content arriving on the backward pass.
    /// `cost_to_go` supplies the current minimum cost-to-go per content and
    /// is consulted only under MEC.
    ///
    /// Below capacity every policy admits without eviction. At capacity LRU
    /// always admits and drops the least recently accessed item; LFU and
    /// MEC admit only on a strictly higher score than the stored minimum,
    /// evicting the argmin (ties evict the lowest content id).
    pub fn consider_admission<F>(&mut self, d: ContentId, cost_to_go: F) -> Result<Admission>
    where
        F: Fn(ContentId) -> f64,
    {
        if self.stored.contains(&d) {
            return Err(Error::InvalidCall(format!("content {d} is already stored")));
        }
        if self.capacity == 0 {
            return Ok(Admission { admitted: false, evicted: None });
        }
        if self.stored.len() < self.capacity {
            self.insert(d);
            return Ok(Admission { admitted: true, evicted: None });
        }
        match self.policy {
            CachePolicy::Lru => {
                let victim = self
                    .recency
                    .iter()
                    .min_by(|a, b| a.1.cmp(b.1))
                    .map(|(&content, _)| content)
                    .expect("full LRU cache has recency entries");
                self.evict(victim);
                self.insert(d);
                Ok(Admission { admitted: true, evicted: Some(victim) })
            }
            CachePolicy::Lfu | CachePolicy::Mec => {
                let score = |content: ContentId| -> f64 {
                    match self.policy {
                        CachePolicy::Lfu => self.counts[content],
                        CachePolicy::Mec => self.counts[content] * cost_to_go(content),
                        CachePolicy::Lru => unreachable!(),
                    }
                };
                // BTreeSet iteration is ascending, so strict < keeps the
                // lowest-id argmin.
                let mut victim = None;
                let mut min_score = f64::INFINITY;
                for &stored in &self.stored {
                    let s = score(stored);
                    if s < min_score {
                        min_score = s;
                        victim = Some(stored);
                    }
                }
                let victim = victim.expect("cache is full, capacity > 0");
                if score(d) > min_score {
                    self.evict(victim);
                    self.insert(d);
                    Ok(Admission { admitted: true, evicted: Some(victim) })
                } else {
                    Ok(Admission { admitted: false, evicted: None })
                }
            }
        }
    }

    fn insert(&mut self, d: ContentId) {
        self.stored.insert(d);
        if self.policy == CachePolicy::Lru {
            self.access_clock += 1;
            self.recency.insert(d, self.access_clock);
        }
    }

    fn evict(&mut self, d: ContentId) {
        self.stored.remove(&d);
        self.recency.remove(&d);
    }

    /// Inserts without an admission check. Test and scenario seeding only;
    /// fails when the store is full or already holds `d`.
    pub fn preload(&mut self, d: ContentId) -> Result<()> {
        if self.stored.contains(&d) {
            return Err(Error::InvalidCall(format!("content {d} is already stored")));
        }
        if self.stored.len() >= self.capacity {
            return Err(Error::InvalidCall("cache is full".into()));
        }
        self.insert(d);
        Ok(())
    }

    /// Multiplies every request count by `gamma`; applied at trace epoch
    /// boundaries so stale popularity fades.
    pub fn decay_counts(&mut self, gamma: f64) {
        for c in &mut self.counts {
            *c *= gamma;
        }
    }
}

/// The size-`capacity` subset of contents with the largest weights, ties
/// resolved toward lower content ids. This is the optimal local placement
/// under an exact per-content weight vector.
pub fn optimal_local_placement(weights: &[f64], capacity: usize) -> BTreeSet<ContentId> {
    let mut ids: Vec<ContentId> = (0..weights.len()).collect();
    ids.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).expect("weights are comparable").then(a.cmp(&b)));
    ids.into_iter().take(capacity).collect()
}
