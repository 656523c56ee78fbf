//! Experiment result files: the long-format metrics CSV, the JSON summary,
//! and the per-step time series CSV.

use std::fs;
use std::path::Path;

use serde::Serialize;

use icnsim_core::experiment::ExperimentResult;
use icnsim_core::metrics::MetricsSeries;

use crate::CliFailure;

fn sweep_value_field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Long-format per-run metrics: `sweep_value,run,metric,value`. The
/// sweep_value column is empty for plain runs.
pub fn metrics_csv(points: &[ExperimentResult]) -> String {
    let mut out = String::from("sweep_value,run,metric,value\n");
    for point in points {
        let sv = sweep_value_field(point.sweep_value);
        for (run_idx, run) in point.runs.iter().enumerate() {
            for (name, value) in run.metric_values() {
                out.push_str(&format!("{sv},{run_idx},{name},{value}\n"));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct SummaryMetric {
    mean: f64,
    ci_half_width: Option<f64>,
}

#[derive(Serialize)]
struct SummaryPoint {
    sweep_value: Option<f64>,
    runs: usize,
    metrics: Vec<(String, SummaryMetric)>,
}

#[derive(Serialize)]
struct Summary<'a> {
    parameter: Option<&'a str>,
    warmup: u64,
    points: Vec<SummaryPoint>,
}

/// JSON summary: per-point means and 95% confidence half-widths.
pub fn summary_json(parameter: Option<&str>, points: &[ExperimentResult]) -> String {
    let summary = Summary {
        parameter,
        warmup: points.first().map(|p| p.warmup).unwrap_or(0),
        points: points
            .iter()
            .map(|p| SummaryPoint {
                sweep_value: p.sweep_value,
                runs: p.runs.len(),
                metrics: p
                    .metrics
                    .iter()
                    .map(|(name, agg)| {
                        (
                            (*name).to_string(),
                            SummaryMetric { mean: agg.mean, ci_half_width: agg.ci_half_width },
                        )
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    text
}

/// Per-step trajectories for every run:
/// `sweep_value,run,step,mean_download_cost,completed,custodian_hits,budget_fallbacks,nonce_fallbacks,diversity`.
/// The diversity column is empty unless the run recorded it.
pub fn timeseries_csv(points: &[(Option<f64>, Vec<MetricsSeries>)]) -> String {
    let mut out = String::from(
        "sweep_value,run,step,mean_download_cost,completed,custodian_hits,budget_fallbacks,nonce_fallbacks,diversity\n",
    );
    for (sweep_value, runs) in points {
        let sv = sweep_value_field(*sweep_value);
        for (run_idx, metrics) in runs.iter().enumerate() {
            for (step, m) in metrics.per_step.iter().enumerate() {
                let cost = m.mean_cost().map(|c| c.to_string()).unwrap_or_default();
                let diversity = metrics
                    .diversity
                    .get(step)
                    .map(|d| d.to_string())
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{sv},{run_idx},{step},{cost},{},{},{},{},{diversity}\n",
                    m.completed, m.custodian_hits, m.budget_fallbacks, m.nonce_fallbacks
                ));
            }
        }
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliFailure> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliFailure::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, contents)
        .map_err(|e| CliFailure::Io(format!("cannot write {}: {e}", path.display())))
}
