//! Synthetic request traces with the shape of a video-catalog workload:
//! exponential rank popularity, weekly periodicity (weekend peaks), and
//! linear growth over the trace. The per-epoch popularity reuses the
//! catalog-level exponential fit; whether popularity keeps that exact shape
//! day by day is an assumption of the generator, not a measured fact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use icnsim_core::workload::{exponential_popularity, TraceEpoch};

use crate::CliFailure;

#[derive(Debug, Clone)]
pub struct TraceGenConfig {
    pub contents: usize,
    pub epochs: usize,
    pub seed: u64,
    /// Exponential popularity parameters: weight(rank) = base + scale·e^(−decay·rank).
    pub base: f64,
    pub scale: f64,
    pub decay: f64,
    /// Relative swing of the 7-day cycle, peaking on the weekend.
    pub weekly_amplitude: f64,
    /// Fractional demand growth across 365 epochs.
    pub yearly_growth: f64,
    /// Mean total requests per epoch.
    pub daily_requests: f64,
}

impl Default for TraceGenConfig {
    fn default() -> Self {
        TraceGenConfig {
            contents: 31,
            epochs: 365,
            seed: 7,
            base: 1473.0,
            scale: 108_947.0,
            decay: 0.4707,
            weekly_amplitude: 0.3,
            yearly_growth: 1.0,
            daily_requests: 2000.0,
        }
    }
}

/// Generates the epoch list deterministically from the seed.
pub fn generate_trace(config: &TraceGenConfig) -> Result<Vec<TraceEpoch>, CliFailure> {
    if config.contents == 0 || config.epochs == 0 {
        return Err(CliFailure::Config("gen-trace needs contents >= 1 and epochs >= 1".into()));
    }
    if config.daily_requests <= 0.0 {
        return Err(CliFailure::Config("daily_requests must be positive".into()));
    }
    if !(0.0..1.0).contains(&config.weekly_amplitude) {
        return Err(CliFailure::Config("weekly_amplitude must be in [0, 1)".into()));
    }
    let popularity = exponential_popularity(config.contents, config.base, config.scale, config.decay)
        .map_err(|e| CliFailure::Config(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut epochs = Vec::with_capacity(config.epochs);
    for e in 0..config.epochs {
        // Weekend bump: days 5 and 6 of each week carry the amplitude,
        // weekdays give a little back so the weekly mean stays near 1.
        let weekly = if e % 7 >= 5 {
            1.0 + config.weekly_amplitude
        } else {
            1.0 - config.weekly_amplitude * 2.0 / 5.0
        };
        let growth = 1.0 + config.yearly_growth * e as f64 / 365.0;
        let mut counts = Vec::with_capacity(config.contents);
        for &p in &popularity {
            // Multiplicative jitter keeps epochs distinct without drowning
            // the shape.
            let noise = 0.75 + 0.5 * rng.gen::<f64>();
            let expected = config.daily_requests * p * weekly * growth * noise;
            counts.push(expected.round() as u64);
        }
        if counts.iter().all(|&c| c == 0) {
            counts[0] = 1;
        }
        epochs.push(TraceEpoch { epoch: e as u64, counts });
    }
    Ok(epochs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::trace_to_csv;
    use icnsim_core::workload::validate_trace;

    #[test]
    fn trace_has_the_requested_cardinality() {
        let epochs = generate_trace(&TraceGenConfig::default()).unwrap();
        assert_eq!(epochs.len(), 365);
        assert!(epochs.iter().all(|e| e.counts.len() == 31));
        // 31 contents × 365 epochs rows plus the header.
        let csv = trace_to_csv(&epochs);
        assert_eq!(csv.lines().count(), 31 * 365 + 1);
        validate_trace(&epochs).unwrap();
    }

    #[test]
    fn rank_one_dominates_the_tail() {
        let epochs = generate_trace(&TraceGenConfig::default()).unwrap();
        let total = |d: usize| epochs.iter().map(|e| e.counts[d]).sum::<u64>();
        assert!(total(0) >= total(30));
        // Monotone on the whole catalog in total, noise notwithstanding.
        assert!(total(0) > total(10));
    }

    #[test]
    fn identical_seeds_give_identical_bytes() {
        let a = trace_to_csv(&generate_trace(&TraceGenConfig::default()).unwrap());
        let b = trace_to_csv(&generate_trace(&TraceGenConfig::default()).unwrap());
        assert_eq!(a, b);
        let other = TraceGenConfig { seed: 8, ..TraceGenConfig::default() };
        let c = trace_to_csv(&generate_trace(&other).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn weekends_run_hotter_than_weekdays() {
        let config = TraceGenConfig { yearly_growth: 0.0, ..TraceGenConfig::default() };
        let epochs = generate_trace(&config).unwrap();
        let total = |e: &TraceEpoch| e.counts.iter().sum::<u64>() as f64;
        let weekend: f64 =
            epochs.iter().filter(|e| e.epoch % 7 >= 5).map(total).sum::<f64>() / 104.0;
        let weekday: f64 =
            epochs.iter().filter(|e| e.epoch % 7 < 5).map(total).sum::<f64>() / 261.0;
        assert!(weekend > weekday, "weekend {weekend} vs weekday {weekday}");
    }
}
