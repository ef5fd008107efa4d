//! Acceptance suite. Runs every criterion in turn on the calling thread and
//! prints one PASS/FAIL line per criterion; exits non-zero if any fails.

use std::collections::HashSet;
use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use hash_adjust::analysis::{run_length_trials, verify_invariants, OptSolver, OrderSnapshot};
use hash_adjust::workload::{gen_mixed, server_name, MixedConfig};
use hash_adjust::{CapacityRule, EventKind, HashAndAdjust, HashBackend, HnaConfig, LedgerKind, Placement, Ring};
use hash_adjust_bench::{run_benchmark, run_sweep, Algorithm, BenchConfig, RunReport, Sweep};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

// ---- 1: competitive ratio against the exhaustive optimum ----

struct RatioSearch {
    omega: f64,
    instances: u64,
    worst: f64,
    worst_case: String,
}

fn ratio_dfs(
    search: &mut RatioSearch,
    solver: &OptSolver,
    h: &HashAndAdjust,
    ids: &[String],
    cost: f64,
    frontier: &hash_adjust::analysis::Frontier,
    sequence: &mut Vec<usize>,
) -> Result<(), String> {
    if sequence.len() == 5 {
        return Ok(());
    }
    for item in 0..ids.len() {
        let mut next = h.clone();
        let out = next.access(&ids[item]).map_err(|e| e.to_string())?;
        let served = solver.serve(frontier, item);
        let total = cost + out.cost;
        let opt = served.best();
        sequence.push(item);
        search.instances += 1;
        let ratio = total / opt;
        if ratio > search.worst {
            search.worst = ratio;
            search.worst_case = format!("ids {ids:?} sequence {sequence:?}: {total} vs {opt}");
        }
        ratio_dfs(search, solver, &next, ids, total, &served, sequence)?;
        sequence.pop();
    }
    Ok(())
}

/// Every head assignment (the first item's head fixed to server 0, which
/// loses nothing by rotation), initial placement by insertion in index
/// order, and every access sequence of length 1 to 5.
fn competitive_ratio() -> Verdict {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut total_instances = 0;
    let mut worst_overall: f64 = 0.0;
    for omega in [1.0, 2.0] {
        let mut search = RatioSearch { omega, instances: 0, worst: 0.0, worst_case: String::new() };
        for n in [2usize, 3] {
            for c in [2usize, 3] {
                let servers: Vec<String> = (0..n).map(|k| format!("s{k}@{:.4}", (k + 1) as f64 / 4.0)).collect();
                let refs: Vec<&str> = servers.iter().map(String::as_str).collect();
                for m in 1..=5usize.min(n * c) {
                    for code in 0..n.pow(m as u32 - 1) {
                        let heads: Vec<usize> =
                            std::iter::once(0).chain((0..m - 1).map(|i| (code / n.pow(i as u32)) % n)).collect();
                        let ids: Vec<String> = heads
                            .iter()
                            .enumerate()
                            .map(|(j, &hd)| format!("v{j}@{:.4}", (hd + 1) as f64 / 4.0 - 0.01 * (j + 1) as f64))
                            .collect();
                        let ring = Ring::with_servers(HashBackend::Fixture, &refs, c).unwrap();
                        let config = HnaConfig { capacity: CapacityRule::Fixed(c), omega };
                        let mut h = HashAndAdjust::from_ring(ring, config).unwrap();
                        for id in &ids {
                            h.insert_item(id, 0.0).unwrap();
                        }
                        let points = h.ring().server_points();
                        let initial: Vec<usize> = ids
                            .iter()
                            .map(|id| points.binary_search(&h.ring().host_of(id).unwrap()).unwrap())
                            .collect();
                        let solver = OptSolver::new(n, c, heads, omega).unwrap();
                        let frontier = solver.start(&initial).unwrap();
                        if let Err(e) = ratio_dfs(&mut search, &solver, &h, &ids, 0.0, &frontier, &mut Vec::new()) {
                            failures.push(format!("n={n} c={c} m={m}: {e}"));
                        }
                    }
                }
            }
        }
        let limit = 2.0 * (1.0 + search.omega);
        if search.worst > limit {
            failures.push(format!("omega={omega}: ratio {:.4} > {limit} ({})", search.worst, search.worst_case));
        }
        total_instances += search.instances;
        worst_overall = worst_overall.max(search.worst / limit);
    }
    let elapsed = started.elapsed();
    let pass = failures.is_empty() && within(elapsed, 300);
    verdict(
        pass,
        format!(
            "{total_instances} instances, worst ratio {:.3} of the 2(1+w) bound, {:.1}s{}",
            worst_overall,
            elapsed.as_secs_f64(),
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

// ---- 2: invariant suite ----

fn replay(seed: u64) -> Result<usize, String> {
    let events = gen_mixed(&MixedConfig { num_requests: 100_000, seed, ..MixedConfig::default() });
    let config = HnaConfig { capacity: CapacityRule::Additive { alpha: 1 }, omega: 1.0 };
    let mut h = HashAndAdjust::new(config, HashBackend::Sha512).map_err(|e| e.to_string())?;
    for k in 0..MixedConfig::default().num_servers {
        h.insert_server(&server_name(k)).map_err(|e| e.to_string())?;
    }
    let mut shadow: HashSet<String> = HashSet::new();
    let mut checks = 0;
    for (i, e) in events.iter().enumerate() {
        let item_op = matches!(e.kind, EventKind::InsertItem | EventKind::DeleteItem);
        let before = item_op.then(|| OrderSnapshot::of(h.ring()));
        let out = h.apply(e).map_err(|err| format!("seed {seed} request {i}: {err}"))?;
        match e.kind {
            EventKind::Access if out.found != shadow.contains(&e.target) => {
                return Err(format!("seed {seed} request {i}: lookup of {} disagrees with the shadow index", e.target));
            }
            EventKind::InsertItem => {
                shadow.insert(e.target.clone());
            }
            EventKind::DeleteItem => {
                shadow.remove(&e.target);
            }
            _ => {}
        }
        if let Some(v) = verify_invariants(h.ring(), before.as_ref()) {
            return Err(format!("seed {seed} request {i} ({:?} {}): {v}", e.kind, e.target));
        }
        checks += 1;
    }
    Ok(checks)
}

fn invariant_suite() -> Verdict {
    let started = Instant::now();
    let mut checks = 0;
    let mut errors = Vec::new();
    for seed in 0..20 {
        match replay(seed) {
            Ok(c) => checks += c,
            Err(e) => errors.push(e),
        }
    }
    let elapsed = started.elapsed();
    verdict(
        errors.is_empty() && within(elapsed, 120),
        format!(
            "20 seeds, {checks} checked requests, {} violations, {:.1}s{}",
            errors.len(),
            elapsed.as_secs_f64(),
            errors.first().map_or(String::new(), |e| format!("; first: {e}"))
        ),
    )
}

// ---- 3: Monte Carlo check of the run-length bounds ----

fn monte_carlo() -> Verdict {
    let started = Instant::now();
    let report = run_length_trials(10_000, 20, 4, 1000, 2024);
    let elapsed = started.elapsed();
    let breaches: Vec<usize> = report.tail.iter().filter(|r| !r.within(3.0)).map(|r| r.l).collect();
    let pass = breaches.is_empty() && report.mean_lmax <= report.lmax_bound && within(elapsed, 120);
    verdict(
        pass,
        format!(
            "{} runs over {} placements, tail breaches at l={breaches:?}, mean l_max {:.3} vs bound {:.4}, {:.1}s",
            report.runs_observed,
            report.trials,
            report.mean_lmax,
            report.lmax_bound,
            elapsed.as_secs_f64()
        ),
    )
}

// ---- 4: cost and utilization against the baselines ----

fn headline_config(algorithm: Algorithm) -> BenchConfig {
    let mut config = BenchConfig { algorithm, alpha: 4, wbl_factor: 1.25, ..BenchConfig::default() };
    config.workload.locality = 0.75;
    config.workload.num_items = 10_000;
    config.workload.num_servers = 20;
    config.workload.num_requests = 100_000;
    config
}

fn baseline_comparison() -> Verdict {
    let started = Instant::now();
    let run = |a| run_benchmark(&headline_config(a)).map(|r| r.report);
    let (hna, wbl, trad) = match (run(Algorithm::Hna), run(Algorithm::Wbl), run(Algorithm::Trad)) {
        (Ok(h), Ok(w), Ok(t)) => (h, w, t),
        (h, w, t) => {
            let err = [h.err(), w.err(), t.err()].into_iter().flatten().next().unwrap();
            return verdict(false, format!("run failed: {err:#}"));
        }
    };
    let elapsed = started.elapsed();
    let improvement = 1.0 - hna.avg_access_cost() / wbl.avg_access_cost();
    let pass = improvement >= 0.30 && hna.utilization >= 0.85 && trad.utilization <= 0.60 && within(elapsed, 180);
    verdict(
        pass,
        format!(
            "access cost hna {:.3} wbl {:.3} trad {:.3} (hna saves {:.1}% over wbl, need 30%), utilization hna \
             {:.3} wbl {:.3} trad {:.3}, {:.1}s",
            hna.avg_access_cost(),
            wbl.avg_access_cost(),
            trad.avg_access_cost(),
            100.0 * improvement,
            hna.utilization,
            wbl.utilization,
            trad.utilization,
            elapsed.as_secs_f64()
        ),
    )
}

// ---- 5: cost falls with locality ----

/// Average ranks, ties sharing the mean of their positions.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

fn locality_trend() -> Verdict {
    let started = Instant::now();
    let sweep: Sweep = "locality=0.1:0.9:0.1".parse().unwrap();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for s in 0..5u64 {
        let mut base = headline_config(Algorithm::Hna);
        base.workload.seed = 1000 * s;
        match run_sweep(&base, &sweep, std::io::sink()) {
            Ok(reports) => {
                for (x, r) in sweep.values.iter().zip(&reports) {
                    xs.push(*x);
                    ys.push(r.avg_cost());
                }
            }
            Err(e) => return verdict(false, format!("sweep failed: {e:#}")),
        }
    }
    let rho = spearman(&xs, &ys);
    verdict(
        rho <= -0.8,
        format!("Spearman {rho:.3} over {} runs (need <= -0.8), {:.1}s", xs.len(), started.elapsed().as_secs_f64()),
    )
}

// ---- 6: more servers at a fixed item count ----

fn server_count_effect() -> Verdict {
    let started = Instant::now();
    let mean = |n: usize| -> Result<(f64, f64), String> {
        let mut cost = 0.0;
        let mut lmax = 0.0;
        for seed in 0..3 {
            let mut config = headline_config(Algorithm::Hna);
            config.workload.locality = 0.7;
            config.workload.num_items = 1029;
            config.workload.num_servers = n;
            config.workload.seed = seed;
            let r: RunReport = run_benchmark(&config).map_err(|e| format!("{e:#}"))?.report;
            cost += r.avg_cost() / 3.0;
            lmax += r.mean_lmax / 3.0;
        }
        Ok((cost, lmax))
    };
    let (small, large) = match (mean(20), mean(40)) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => return verdict(false, format!("run failed: {}", a.err().or(b.err()).unwrap())),
    };
    verdict(
        large.0 < small.0 && large.1 < small.1,
        format!(
            "avg cost n=20 {:.3} -> n=40 {:.3}, mean l_max {:.2} -> {:.2}, {:.1}s",
            small.0,
            large.0,
            small.1,
            large.1,
            started.elapsed().as_secs_f64()
        ),
    )
}

// ---- 7: baseline sanity ----

fn baseline_sanity() -> Verdict {
    let mut notes = Vec::new();
    let mut pass = true;
    for locality in [0.1, 0.5, 0.9] {
        let mut config = headline_config(Algorithm::Trad);
        config.workload.locality = locality;
        config.workload.churn_mean_interval = f64::INFINITY;
        config.workload.stale_time = f64::INFINITY;
        let report = run_benchmark(&config).expect("traditional run").report;
        pass &= report.avg_cost() == 1.0 && report.avg_access_cost() == 1.0;
        notes.push(format!("trad avg {} at locality {locality}", report.avg_cost()));
    }
    let run = run_benchmark(&headline_config(Algorithm::Wbl)).expect("wbl run");
    let access_moves: u64 = run
        .ledger
        .entries()
        .iter()
        .filter(|e| e.kind == LedgerKind::Request(EventKind::Access))
        .map(|e| e.moves)
        .sum();
    pass &= access_moves == 0;
    notes.push(format!("wbl moves on access {access_moves}"));
    verdict(pass, notes.join(", "))
}

// ---- 8: determinism of the CLI output ----

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().expect("temp dir");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hashadjust"))
            .args(["--algorithm", "hna", "--requests", "20000", "--seed", "9", "--output"])
            .arg(&out)
            .env_remove("HASHADJUST_SEED")
            .status()
            .expect("spawn hashadjust");
        assert!(status.success());
        fs::read(out.join("requests.csv")).expect("requests.csv")
    };
    let (a, b) = (run("first"), run("second"));
    verdict(a == b && !a.is_empty(), format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("competitive ratio", competitive_ratio),
        ("invariant suite", invariant_suite),
        ("run-length bounds", monte_carlo),
        ("cost and utilization vs baselines", baseline_comparison),
        ("locality monotonicity", locality_trend),
        ("server count effect", server_count_effect),
        ("baseline sanity", baseline_sanity),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let v = check();
        println!("acceptance {} {name}: {} ({})", k + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
