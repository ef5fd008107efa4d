//! `hashadjust` command line: run one benchmark or a parameter sweep.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Parser;
use hash_adjust_bench::{run_benchmark, run_sweep, Algorithm, BenchConfig, Sweep};

#[derive(Debug, Parser)]
#[command(name = "hashadjust", version, about = "Consistent hashing placement benchmark")]
struct Cli {
    /// Placement algorithm: hna, wbl or trad.
    #[arg(long)]
    algorithm: Option<Algorithm>,
    /// Size of the item universe.
    #[arg(long)]
    items: Option<usize>,
    /// Initial number of servers.
    #[arg(long)]
    servers: Option<usize>,
    /// Number of generated requests.
    #[arg(long)]
    requests: Option<usize>,
    /// Probability of repeating the previous target, in [0, 1).
    #[arg(long)]
    locality: Option<f64>,
    /// Additive capacity slack of H&A.
    #[arg(long)]
    alpha: Option<usize>,
    /// Capacity factor of WBL.
    #[arg(long)]
    wbl_factor: Option<f64>,
    /// Cost of one item move relative to one search hop.
    #[arg(long)]
    omega: Option<f64>,
    /// Random seed; the HASHADJUST_SEED environment variable takes precedence.
    #[arg(long)]
    seed: Option<u64>,
    /// Seconds after insertion at which items expire (`inf` disables).
    #[arg(long)]
    stale_time: Option<String>,
    /// Mean seconds between server insertions and between deletions (`inf` disables).
    #[arg(long)]
    churn_mean: Option<String>,
    /// Replay a `timestamp,op,id` trace instead of generating a workload.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Directory for `summary` and `requests.csv` (or `sweep.csv`).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Sweep one parameter, e.g. `locality=0.1:0.9:0.1`.
    #[arg(long)]
    sweep: Option<Sweep>,
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn config_from(cli: &Cli) -> Result<BenchConfig> {
    let mut config = BenchConfig::default();
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    let w = &mut config.workload;
    if let Some(v) = cli.items {
        w.num_items = v;
    }
    if let Some(v) = cli.servers {
        w.num_servers = v;
    }
    if let Some(v) = cli.requests {
        w.num_requests = v;
    }
    if let Some(v) = cli.locality {
        w.locality = v;
    }
    if let Some(v) = cli.seed {
        w.seed = v;
    }
    if let Some(v) = &cli.stale_time {
        config.set("stale_time", v)?;
    }
    if let Some(v) = &cli.churn_mean {
        config.set("churn_mean_interval", v)?;
    }
    if let Some(v) = cli.algorithm {
        config.algorithm = v;
    }
    if let Some(v) = cli.alpha {
        config.alpha = v;
    }
    if let Some(v) = cli.wbl_factor {
        config.wbl_factor = v;
    }
    if let Some(v) = cli.omega {
        config.omega = v;
    }
    if let Some(v) = &cli.trace {
        config.trace = Some(v.clone());
    }
    config.apply_env()?;
    config.validate()?;
    Ok(config)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let config = config_from(&cli)?;
    if let Some(sweep) = &cli.sweep {
        let out: Box<dyn Write> = match &cli.output {
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                Box::new(BufWriter::new(File::create(dir.join("sweep.csv"))?))
            }
            None => Box::new(io::stdout().lock()),
        };
        run_sweep(&config, sweep, out)?;
        return Ok(());
    }
    let run = run_benchmark(&config)?;
    match &cli.output {
        Some(dir) => run.write_to(dir)?,
        None => print!("{}", run.report.summary()),
    }
    Ok(())
}
