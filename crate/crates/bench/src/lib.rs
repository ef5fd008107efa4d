//! Benchmark harness: builds a ring, replays a generated or recorded
//! workload through one placement algorithm and collects cost, load and
//! invariant statistics.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use hash_adjust::analysis::{check_search, mscfs_lengths, utilization, verify_invariants, OrderSnapshot};
use hash_adjust::baselines::{Traditional, WblConfig, WblDeletion, Wbl};
use hash_adjust::workload::{check_well_behaved, gen_workload, parse_key_values, parse_trace, server_name, StaleTracker};
use hash_adjust::{
    CapacityRule, CostLedger, EventKind, HashAndAdjust, HashBackend, HnaConfig, LedgerKind, Placement, RequestEvent,
    WorkloadConfig,
};

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "HASHADJUST_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Hna,
    Wbl,
    Trad,
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hna" => Ok(Algorithm::Hna),
            "wbl" => Ok(Algorithm::Wbl),
            "trad" => Ok(Algorithm::Trad),
            other => Err(format!("unknown algorithm {other:?} (expected hna, wbl or trad)")),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Hna => "hna",
            Algorithm::Wbl => "wbl",
            Algorithm::Trad => "trad",
        })
    }
}

/// Everything a single run needs: the workload plus algorithm parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub workload: WorkloadConfig,
    pub algorithm: Algorithm,
    /// Additive capacity slack of H&A.
    pub alpha: usize,
    /// Capacity factor of WBL.
    pub wbl_factor: f64,
    pub wbl_deletion: WblDeletion,
    pub omega: f64,
    /// Re-check invariants every this many requests; 0 disables.
    pub verify_interval: usize,
    /// Record load statistics every this many requests.
    pub sample_interval: usize,
    /// Replay this trace instead of generating a workload.
    pub trace: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            workload: WorkloadConfig::default(),
            algorithm: Algorithm::Hna,
            alpha: 4,
            wbl_factor: 1.25,
            wbl_deletion: WblDeletion::Backfill,
            omega: 1.0,
            verify_interval: 1000,
            sample_interval: 1000,
            trace: None,
        }
    }
}

impl BenchConfig {
    /// Sets one field by its config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let ctx = || format!("bad value {value:?} for {key}");
        match key {
            "algorithm" => self.algorithm = value.parse().map_err(anyhow::Error::msg)?,
            "alpha" => self.alpha = value.parse().with_context(ctx)?,
            "wbl_factor" => self.wbl_factor = value.parse().with_context(ctx)?,
            "wbl_deletion" => {
                self.wbl_deletion = match value {
                    "backfill" => WblDeletion::Backfill,
                    "tombstone" => WblDeletion::Tombstone,
                    _ => bail!("{}", ctx()),
                }
            }
            "omega" => self.omega = value.parse().with_context(ctx)?,
            "verify_interval" => self.verify_interval = value.parse().with_context(ctx)?,
            "sample_interval" => self.sample_interval = value.parse().with_context(ctx)?,
            "trace" => self.trace = Some(PathBuf::from(value)),
            _ => {
                if !self.workload.set(key, value)? {
                    bail!("unknown config key {key:?}");
                }
            }
        }
        Ok(())
    }

    /// Reads a flat `key = value` file on top of `self`.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        for (line, key, value) in parse_key_values(&text)? {
            self.set(&key, &value).with_context(|| format!("{}:{line}", path.display()))?;
        }
        Ok(())
    }

    /// Applies the seed override from the environment, if set.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(seed) = std::env::var(SEED_ENV) {
            self.workload.seed = seed.parse().with_context(|| format!("{SEED_ENV}={seed:?}"))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.workload.validate()?;
        ensure!(self.alpha >= 1, "alpha must be at least 1");
        ensure!(self.omega >= 1.0 && self.omega.is_finite(), "omega must be at least 1");
        ensure!(self.wbl_factor > 1.0 && self.wbl_factor.is_finite(), "wbl_factor must exceed 1");
        ensure!(self.sample_interval > 0, "sample_interval must be positive");
        Ok(())
    }

    /// Echo of the configuration as `key = value` lines.
    pub fn to_text(&self) -> String {
        let deletion = match self.wbl_deletion {
            WblDeletion::Backfill => "backfill",
            WblDeletion::Tombstone => "tombstone",
        };
        let mut out = self.workload.to_text();
        out += &format!(
            "algorithm = {}\nalpha = {}\nwbl_factor = {}\nwbl_deletion = {deletion}\nomega = {}\n\
             verify_interval = {}\nsample_interval = {}\n",
            self.algorithm, self.alpha, self.wbl_factor, self.omega, self.verify_interval, self.sample_interval
        );
        if let Some(trace) = &self.trace {
            out += &format!("trace = {}\n", trace.display());
        }
        out
    }
}

/// Summary of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub omega: f64,
    /// Ledger rows: requests plus expiry deletions.
    pub rows: usize,
    pub total_hops: u64,
    pub total_moves: u64,
    pub total_cost: f64,
    pub accesses: usize,
    pub access_cost: f64,
    pub num_items: usize,
    pub final_items: usize,
    pub final_servers: usize,
    pub max_load: usize,
    pub utilization: f64,
    pub mean_utilization: f64,
    pub mean_lmax: f64,
    pub peak_lmax: usize,
    pub invariant_checks: usize,
    pub well_behaved: bool,
    pub wall_seconds: f64,
}

impl RunReport {
    /// Total cost over ledger rows.
    pub fn avg_cost(&self) -> f64 {
        if self.rows == 0 {
            0.0
        } else {
            self.total_cost / self.rows as f64
        }
    }

    pub fn avg_search(&self) -> f64 {
        if self.rows == 0 {
            0.0
        } else {
            self.total_hops as f64 / self.rows as f64
        }
    }

    pub fn avg_reconfiguration(&self) -> f64 {
        if self.rows == 0 {
            0.0
        } else {
            self.omega * self.total_moves as f64 / self.rows as f64
        }
    }

    pub fn avg_access_cost(&self) -> f64 {
        if self.accesses == 0 {
            0.0
        } else {
            self.access_cost / self.accesses as f64
        }
    }

    /// Flat `key=value` summary.
    pub fn summary(&self) -> String {
        let fields: Vec<(&str, String)> = vec![
            ("algorithm", self.algorithm.to_string()),
            ("seed", self.seed.to_string()),
            ("omega", self.omega.to_string()),
            ("rows", self.rows.to_string()),
            ("accesses", self.accesses.to_string()),
            ("total_search", self.total_hops.to_string()),
            ("total_moves", self.total_moves.to_string()),
            ("total_cost", self.total_cost.to_string()),
            ("avg_search", self.avg_search().to_string()),
            ("avg_reconfiguration", self.avg_reconfiguration().to_string()),
            ("avg_cost", self.avg_cost().to_string()),
            ("avg_access_cost", self.avg_access_cost().to_string()),
            ("total_cost_per_item", (self.total_cost / self.num_items as f64).to_string()),
            ("final_items", self.final_items.to_string()),
            ("final_servers", self.final_servers.to_string()),
            ("max_load", self.max_load.to_string()),
            ("utilization", self.utilization.to_string()),
            ("mean_utilization", self.mean_utilization.to_string()),
            ("mean_lmax", self.mean_lmax.to_string()),
            ("peak_lmax", self.peak_lmax.to_string()),
            ("invariant_checks", self.invariant_checks.to_string()),
            ("well_behaved", self.well_behaved.to_string()),
            ("wall_seconds", format!("{:.3}", self.wall_seconds)),
        ];
        fields.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

/// A finished run: its summary and per-row cost ledger.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub ledger: CostLedger,
}

impl RunOutput {
    pub fn requests_csv(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.ledger.write_csv(&mut buf).expect("writing to memory");
        buf
    }

    /// Writes `summary` and `requests.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("summary"), self.report.summary())?;
        let file = File::create(dir.join("requests.csv"))?;
        let mut out = BufWriter::new(file);
        self.ledger.write_csv(&mut out)?;
        out.flush()?;
        Ok(())
    }
}

fn build(config: &BenchConfig) -> Result<Box<dyn Placement>> {
    let servers: Vec<String> = (0..config.workload.num_servers).map(server_name).collect();
    Ok(match config.algorithm {
        Algorithm::Hna => {
            let hna_config = HnaConfig { capacity: CapacityRule::Additive { alpha: config.alpha }, omega: config.omega };
            let mut h = HashAndAdjust::new(hna_config, HashBackend::Sha512)?;
            for s in &servers {
                h.insert_server(s)?;
            }
            Box::new(h)
        }
        Algorithm::Wbl => {
            let wbl_config =
                WblConfig { load_factor: config.wbl_factor, deletion: config.wbl_deletion, omega: config.omega };
            let mut w = Wbl::new(wbl_config, HashBackend::Sha512)?;
            for s in &servers {
                w.insert_server(s)?;
            }
            Box::new(w)
        }
        Algorithm::Trad => {
            let mut t = Traditional::new(HashBackend::Sha512, config.omega);
            for s in &servers {
                t.insert_server(s)?;
            }
            Box::new(t)
        }
    })
}

fn verify(algorithm: Algorithm, engine: &dyn Placement, before: Option<&OrderSnapshot>, at: &RequestEvent) -> Result<()> {
    let violation = match algorithm {
        Algorithm::Hna => verify_invariants(engine.ring(), before),
        Algorithm::Wbl => check_search(engine.ring()),
        Algorithm::Trad => None,
    };
    match violation {
        Some(v) => bail!("invariant violated after {:?} {} at t={}: {v}", at.kind, at.target, at.timestamp),
        None => Ok(()),
    }
}

/// Runs one benchmark. Fails on invalid configuration, unreadable traces,
/// algorithm errors and invariant violations.
pub fn run_benchmark(config: &BenchConfig) -> Result<RunOutput> {
    config.validate()?;
    let started = Instant::now();
    let events = match &config.trace {
        Some(path) => parse_trace(path).with_context(|| format!("reading trace {}", path.display()))?,
        None => gen_workload(&config.workload)?,
    };
    let mut engine = build(config)?;
    let mut ledger = CostLedger::new(config.omega);
    let mut stale = StaleTracker::new(config.workload.stale_time);
    let (mut accesses, mut access_cost) = (0usize, 0.0);
    let mut utilizations = Vec::new();
    let mut lmaxes = Vec::new();
    let mut checks = 0;

    for (i, event) in events.iter().enumerate() {
        for id in stale.expire(event.timestamp) {
            let expiry = RequestEvent::new(event.timestamp, EventKind::DeleteItem, id);
            let out = engine.apply(&expiry)?;
            ledger.record(event.timestamp, LedgerKind::Expiry, &expiry.target, &out);
        }
        let check = config.verify_interval > 0 && (i + 1) % config.verify_interval == 0;
        let before = (check && matches!(event.kind, EventKind::InsertItem | EventKind::DeleteItem))
            .then(|| OrderSnapshot::of(engine.ring()));
        let out = engine.apply(event).with_context(|| format!("request {i} ({:?} {})", event.kind, event.target))?;
        ledger.record(event.timestamp, LedgerKind::Request(event.kind), &event.target, &out);
        match event.kind {
            EventKind::Access => {
                accesses += 1;
                access_cost += out.cost;
            }
            EventKind::InsertItem if !out.found => stale.on_insert(&event.target, event.timestamp),
            EventKind::DeleteItem => stale.on_delete(&event.target),
            _ => {}
        }
        if check {
            verify(config.algorithm, engine.as_ref(), before.as_ref(), event)?;
            checks += 1;
        }
        if (i + 1) % config.sample_interval == 0 {
            let ring = engine.ring();
            utilizations.push(utilization(ring.max_load(), ring.item_count(), ring.server_count())?);
            lmaxes.push(mscfs_lengths(ring).l_max);
        }
    }

    let ring = engine.ring();
    let mean = |xs: &[f64]| if xs.is_empty() { 0.0 } else { xs.iter().sum::<f64>() / xs.len() as f64 };
    let well = check_well_behaved(&events, config.alpha, config.workload.num_items, config.workload.num_servers);
    let lmax_f: Vec<f64> = lmaxes.iter().map(|&l| l as f64).collect();
    let report = RunReport {
        algorithm: config.algorithm,
        seed: config.workload.seed,
        omega: config.omega,
        rows: ledger.len(),
        total_hops: ledger.total_hops(),
        total_moves: ledger.total_moves(),
        total_cost: ledger.total_cost(),
        accesses,
        access_cost,
        num_items: config.workload.num_items,
        final_items: ring.item_count(),
        final_servers: ring.server_count(),
        max_load: ring.max_load(),
        utilization: utilization(ring.max_load(), ring.item_count(), ring.server_count())?,
        mean_utilization: mean(&utilizations),
        mean_lmax: mean(&lmax_f),
        peak_lmax: lmaxes.iter().copied().max().unwrap_or(0),
        invariant_checks: checks,
        well_behaved: well.quadratic_ok,
        wall_seconds: started.elapsed().as_secs_f64(),
    };
    Ok(RunOutput { report, ledger })
}

/// A swept parameter and its grid of values.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub key: String,
    pub values: Vec<f64>,
}

impl FromStr for Sweep {
    type Err = anyhow::Error;

    /// Parses `param=lo:hi:step`, inclusive of `hi` up to rounding.
    fn from_str(s: &str) -> Result<Self> {
        let (key, range) = s.split_once('=').context("sweep must look like param=lo:hi:step")?;
        let parts: Vec<f64> = range
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("bad sweep range {range:?}"))?;
        let [lo, hi, step] = parts[..] else {
            bail!("sweep range must be lo:hi:step, got {range:?}");
        };
        ensure!(step > 0.0 && hi >= lo, "sweep needs step > 0 and hi >= lo");
        let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
        // Round away float noise such as 0.30000000000000004.
        let values = (0..count).map(|k| ((lo + step * k as f64) * 1e9).round() / 1e9).collect();
        Ok(Sweep { key: key.trim().to_string(), values })
    }
}

fn sweep_key(key: &str) -> &str {
    match key {
        "items" => "num_items",
        "servers" => "num_servers",
        "requests" => "num_requests",
        "stale-time" => "stale_time",
        "churn-mean" => "churn_mean_interval",
        "wbl-factor" => "wbl_factor",
        other => other,
    }
}

fn format_value(key: &str, value: f64) -> String {
    match key {
        "num_items" | "num_servers" | "num_requests" | "alpha" | "seed" => format!("{}", value.round() as u64),
        _ => format!("{value}"),
    }
}

/// Header of the sweep table.
pub const SWEEP_HEADER: &str =
    "param,value,seed,algorithm,rows,total_cost,avg_cost,avg_access_cost,utilization,mean_lmax,max_load";

fn sweep_row(key: &str, value: &str, r: &RunReport) -> String {
    format!(
        "{key},{value},{},{},{},{},{},{},{},{},{}",
        r.seed,
        r.algorithm,
        r.rows,
        r.total_cost,
        r.avg_cost(),
        r.avg_access_cost(),
        r.utilization,
        r.mean_lmax,
        r.max_load
    )
}

/// One run per grid point with seed `base + index`. Each finished row is
/// written to `out` immediately, so a failing point leaves earlier rows.
pub fn run_sweep<W: Write>(base: &BenchConfig, sweep: &Sweep, mut out: W) -> Result<Vec<RunReport>> {
    ensure!(!sweep.values.is_empty(), "empty sweep grid");
    let key = sweep_key(&sweep.key);
    writeln!(out, "{SWEEP_HEADER}")?;
    let mut reports = Vec::with_capacity(sweep.values.len());
    for (index, &value) in sweep.values.iter().enumerate() {
        let mut config = base.clone();
        let text = format_value(key, value);
        config.set(key, &text)?;
        config.workload.seed = base.workload.seed + index as u64;
        let run = run_benchmark(&config).with_context(|| format!("sweep point {key}={text}"))?;
        writeln!(out, "{}", sweep_row(key, &text, &run.report))?;
        out.flush()?;
        reports.push(run.report);
    }
    Ok(reports)
}
