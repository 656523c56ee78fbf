//! Exogenous request streams: stationary Zipf catalogs and epoch-based
//! non-stationary traces.

use alloc::format;
use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::error::{Error, Result};
use crate::topology::{ContentId, NodeId};

/// Content catalog: ids 0..C−1, ranked by popularity (id 0 = rank 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Catalog {
    pub content_count: usize,
}

impl Catalog {
    pub fn new(content_count: usize) -> Result<Catalog> {
        if content_count == 0 {
            return Err(Error::InvalidParameter("catalog needs at least one content".into()));
        }
        Ok(Catalog { content_count })
    }
}

/// Zipf popularity: p(k) ∝ 1/k^beta over ranks k = 1..C, mapped to content
/// id k−1. beta = 0 degenerates to uniform.
pub fn zipf_weights(content_count: usize, beta: f64) -> Result<Vec<f64>> {
    if content_count == 0 {
        return Err(Error::InvalidParameter("catalog needs at least one content".into()));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("zipf beta must be >= 0, got {beta}")));
    }
    let mut weights: Vec<f64> = (1..=content_count)
        .map(|k| libm::pow(k as f64, -beta))
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

/// Raw exponential popularity weight at rank `x`: a + b·exp(−c·x).
pub fn exponential_weight(a: f64, b: f64, c: f64, x: f64) -> f64 {
    a + b * libm::exp(-c * x)
}

/// Exponential rank-popularity normalized over ranks 1..=C. Every raw
/// weight must be positive.
pub fn exponential_popularity(content_count: usize, a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    if content_count == 0 {
        return Err(Error::InvalidParameter("catalog needs at least one content".into()));
    }
    let mut weights: Vec<f64> = (1..=content_count)
        .map(|x| exponential_weight(a, b, c, x as f64))
        .collect();
    if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::InvalidParameter(
            "exponential popularity produced a non-positive weight".into(),
        ));
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(weights)
}

/// Per-node request process: a shared content distribution plus per-node
/// arrival rates (requests per lock-step; 0 marks a non-client). Content
/// popularity is global; locality enters through the rates.
#[derive(Debug, Clone)]
pub struct RequestDistribution {
    probs: Vec<f64>,
    sampler: WeightedIndex<f64>,
    rates: Vec<f64>,
}

impl RequestDistribution {
    pub fn new(probs: Vec<f64>, rates: Vec<f64>) -> Result<RequestDistribution> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("distribution needs at least one content".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "content probabilities sum to {total}, expected 1"
            )));
        }
        if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidParameter("rates must be finite and >= 0".into()));
        }
        if !rates.iter().any(|r| *r > 0.0) {
            return Err(Error::InvalidParameter("at least one node needs a positive rate".into()));
        }
        let sampler = WeightedIndex::new(probs.iter().copied())
            .map_err(|e| Error::InvalidParameter(format!("bad content weights: {e}")))?;
        Ok(RequestDistribution { probs, sampler, rates })
    }

    pub fn content_count(&self) -> usize {
        self.probs.len()
    }

    /// Probability that a request arriving at `node` asks for `content`.
    pub fn request_prob(&self, node: NodeId, content: ContentId) -> f64 {
        if self.rates.get(node).copied().unwrap_or(0.0) > 0.0 {
            self.probs[content]
        } else {
            0.0
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Requests per step issued by `node`.
    pub fn rate(&self, node: NodeId) -> f64 {
        self.rates.get(node).copied().unwrap_or(0.0)
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// Draws one content for a client node. Deterministic given the RNG
    /// state and draw order.
    pub fn sample_request<R: Rng + ?Sized>(&self, node: NodeId, rng: &mut R) -> Result<ContentId> {
        if self.rate(node) <= 0.0 {
            return Err(Error::InvalidParameter(format!("node {node} is not a client")));
        }
        Ok(self.sampler.sample(rng))
    }
}

/// One epoch (simulated day) of a trace: request counts per content id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEpoch {
    pub epoch: u64,
    pub counts: Vec<u64>,
}

impl TraceEpoch {
    /// Normalized per-content request rates for this epoch.
    pub fn rates(&self) -> Vec<f64> {
        let total: u64 = self.counts.iter().sum();
        self.counts.iter().map(|&c| c as f64 / total as f64).collect()
    }
}

/// Validates an epoch list: contiguous ascending indices from 0, equal
/// catalog sizes, and at least one positive count per epoch.
pub fn validate_trace(epochs: &[TraceEpoch]) -> Result<()> {
    if epochs.is_empty() {
        return Err(Error::InvalidParameter("trace has no epochs".into()));
    }
    let contents = epochs[0].counts.len();
    if contents == 0 {
        return Err(Error::InvalidParameter("trace has no contents".into()));
    }
    for (i, epoch) in epochs.iter().enumerate() {
        if epoch.epoch != i as u64 {
            return Err(Error::InvalidParameter(format!(
                "epochs must be contiguous from 0; position {i} holds epoch {}",
                epoch.epoch
            )));
        }
        if epoch.counts.len() != contents {
            return Err(Error::InvalidParameter(format!(
                "epoch {i} covers {} contents, expected {contents}",
                epoch.counts.len()
            )));
        }
        if epoch.counts.iter().all(|&c| c == 0) {
            return Err(Error::InvalidParameter(format!("epoch {i} has no requests")));
        }
    }
    Ok(())
}
