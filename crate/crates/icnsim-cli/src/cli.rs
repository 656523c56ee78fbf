//! The `icnsim` command line: single experiments, parameter sweeps, and
//! synthetic trace generation.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use icnsim_core::experiment::{aggregate, apply_sweep_value, ExperimentResult};
use icnsim_core::metrics::MetricsSeries;
use icnsim_core::simulator::{SimConfig, Simulation};
use icnsim_core::{derive_seed, run};

use crate::config::{apply_overrides, FileConfig, Resolved};
use crate::formats::{cache_dump_csv, qtables_csv, save_trace};
use crate::output::{metrics_csv, summary_json, timeseries_csv, write_file};
use crate::tracegen::{generate_trace, TraceGenConfig};
use crate::CliFailure;

#[derive(Parser)]
#[command(name = "icnsim", version, about = "Cache-router network simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment and write metrics to the output dir.
    Run(RunArgs),
    /// Run the experiment once per parameter value.
    Sweep(SweepArgs),
    /// Generate a synthetic non-stationary trace CSV.
    GenTrace(GenTraceArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Config file (TOML); defaults to the reference setup.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for result files.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Base seed, overriding the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Parallel run workers (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Config override, `key=value` or `section.key=value`; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Dump per-step cache contents per run (caches_p<point>_r<run>.csv).
    #[arg(long)]
    pub dump_caches: bool,
    /// Dump final live Q-tables per run (qtables_p<point>_r<run>.csv).
    #[arg(long)]
    pub dump_qtables: bool,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Config field to sweep (e.g. exploration_rate, custodian_cost,
    /// cache_capacity, tree_depth, zipf_beta).
    pub parameter: String,
    /// Comma-separated values, e.g. `0,0.025,0.05,0.1,0.2,0.4`.
    pub values: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GenTraceArgs {
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 31)]
    pub contents: usize,
    #[arg(long, default_value_t = 365)]
    pub epochs: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Popularity offset (weight = base + scale·e^(−decay·rank)).
    #[arg(long, default_value_t = 1473.0)]
    pub base: f64,
    #[arg(long, default_value_t = 108947.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 0.4707)]
    pub decay: f64,
    #[arg(long, default_value_t = 0.3)]
    pub weekly_amplitude: f64,
    #[arg(long, default_value_t = 1.0)]
    pub yearly_growth: f64,
    #[arg(long, default_value_t = 2000.0)]
    pub daily_requests: f64,
}

pub fn cli_main() -> i32 {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::GenTrace(args) => cmd_gen_trace(&args),
    };
    match outcome {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}

fn load_resolved(common: &CommonArgs) -> Result<Resolved, CliFailure> {
    let (text, base_dir) = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliFailure::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
            (text, base)
        }
        None => (String::new(), PathBuf::from(".")),
    };
    let file_config = if common.overrides.is_empty() {
        FileConfig::parse(&text)?
    } else {
        apply_overrides(&text, &common.overrides)?
    };
    let mut resolved = file_config.resolve(&base_dir)?;
    if let Some(seed) = common.seed {
        resolved.config.seed = seed;
    }
    Ok(resolved)
}

/// One sweep point (or the single point of a plain run).
struct Point {
    sweep_value: Option<f64>,
    config: SimConfig,
}

struct RunOutput {
    metrics: MetricsSeries,
    cache_dump: Option<String>,
    qtable_dump: Option<String>,
}

fn execute_one(config: &SimConfig, dump_caches: bool, dump_qtables: bool) -> Result<RunOutput, CliFailure> {
    if !dump_caches && !dump_qtables {
        let metrics = run(config).map_err(|e| CliFailure::Config(e.to_string()))?;
        return Ok(RunOutput { metrics, cache_dump: None, qtable_dump: None });
    }
    let mut sim = Simulation::new(config.clone()).map_err(|e| CliFailure::Config(e.to_string()))?;
    let mut rows: Vec<(u64, usize, usize)> = Vec::new();
    for _ in 0..config.steps {
        sim.step();
        if dump_caches {
            let step = sim.current_step() - 1;
            for (node, cache) in sim.caches().iter().enumerate() {
                for content in cache.stored() {
                    rows.push((step, node, content));
                }
            }
        }
    }
    let qtable_dump = dump_qtables.then(|| qtables_csv(sim.qtables()));
    let cache_dump = dump_caches.then(|| cache_dump_csv(&rows));
    Ok(RunOutput { metrics: sim.into_metrics(), cache_dump, qtable_dump })
}

/// Runs every (point, run) pair, in parallel when allowed, and writes the
/// result files. Seeds derive from (base seed, point index, run index).
fn execute_points(
    points: Vec<Point>,
    runs: u64,
    warmup: Option<u64>,
    parameter: Option<&str>,
    common: &CommonArgs,
) -> Result<(), CliFailure> {
    let mut tasks: Vec<(usize, u64, SimConfig)> = Vec::new();
    for (pi, point) in points.iter().enumerate() {
        for ri in 0..runs {
            let mut cfg = point.config.clone();
            cfg.seed = derive_seed(point.config.seed, pi as u64, ri);
            tasks.push((pi, ri, cfg));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliFailure::Config(format!("cannot build worker pool: {e}")))?;
    let outputs: Result<Vec<RunOutput>, CliFailure> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(_, _, cfg)| execute_one(cfg, common.dump_caches, common.dump_qtables))
            .collect()
    });
    let outputs = outputs?;

    // Regroup by point, preserving run order.
    let mut per_point: Vec<Vec<MetricsSeries>> = (0..points.len()).map(|_| Vec::new()).collect();
    for ((pi, _, _), output) in tasks.iter().zip(&outputs) {
        per_point[*pi].push(output.metrics.clone());
    }
    let mut results: Vec<ExperimentResult> = Vec::with_capacity(points.len());
    for (pi, series) in per_point.iter().enumerate() {
        let effective_warmup = warmup.unwrap_or(points[pi].config.steps / 2);
        let mut result =
            aggregate(series, effective_warmup).map_err(|e| CliFailure::Config(e.to_string()))?;
        result.sweep_value = points[pi].sweep_value;
        results.push(result);
    }

    let out = &common.out;
    write_file(&out.join("metrics.csv"), &metrics_csv(&results))?;
    write_file(&out.join("summary.json"), &summary_json(parameter, &results))?;
    let ts: Vec<(Option<f64>, Vec<MetricsSeries>)> = points
        .iter()
        .enumerate()
        .map(|(pi, p)| (p.sweep_value, per_point[pi].clone()))
        .collect();
    write_file(&out.join("timeseries.csv"), &timeseries_csv(&ts))?;
    for ((pi, ri, _), output) in tasks.iter().zip(&outputs) {
        if let Some(dump) = &output.cache_dump {
            write_file(&out.join(format!("caches_p{pi}_r{ri}.csv")), dump)?;
        }
        if let Some(dump) = &output.qtable_dump {
            write_file(&out.join(format!("qtables_p{pi}_r{ri}.csv")), dump)?;
        }
    }
    Ok(())
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliFailure> {
    let resolved = load_resolved(&args.common)?;
    let point = Point { sweep_value: None, config: resolved.config };
    execute_points(vec![point], resolved.runs, resolved.warmup, None, &args.common)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliFailure> {
    let resolved = load_resolved(&args.common)?;
    let values: Vec<f64> = args
        .values
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliFailure::Config(format!("bad sweep value '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(CliFailure::Config("sweep needs at least one value".into()));
    }
    let points = values
        .iter()
        .map(|&v| {
            apply_sweep_value(&resolved.config, &args.parameter, v)
                .map(|config| Point { sweep_value: Some(v), config })
                .map_err(|e| CliFailure::Config(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    execute_points(points, resolved.runs, resolved.warmup, Some(&args.parameter), &args.common)
}

pub fn cmd_gen_trace(args: &GenTraceArgs) -> Result<(), CliFailure> {
    let config = TraceGenConfig {
        contents: args.contents,
        epochs: args.epochs,
        seed: args.seed,
        base: args.base,
        scale: args.scale,
        decay: args.decay,
        weekly_amplitude: args.weekly_amplitude,
        yearly_growth: args.yearly_growth,
        daily_requests: args.daily_requests,
    };
    let epochs = generate_trace(&config)?;
    save_trace(&args.out, &epochs)
}
