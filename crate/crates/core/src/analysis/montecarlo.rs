use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bounds::{lmax_expectation_bound, mscfs_tail_bound};
use super::mscfs::mscfs_from_pattern;

/// Final fullness pattern when items with the given per-server head counts
/// are placed by linear probing at capacity `capacity`. The outcome does not
/// depend on insertion order.
pub fn carry_placement(heads_per_server: &[usize], capacity: usize) -> Vec<bool> {
    let n = heads_per_server.len();
    let mut loads = vec![0usize; n];
    let mut carry = 0usize;
    for step in 0..2 * n {
        let s = step % n;
        let arriving = if step < n { heads_per_server[s] } else { 0 };
        let total = loads[s] + arriving + carry;
        loads[s] = total.min(capacity);
        carry = total - loads[s];
    }
    assert_eq!(carry, 0, "items exceed the total capacity");
    loads.iter().map(|&l| l >= capacity).collect()
}

/// Empirical tail frequency of full-run lengths against the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct TailRow {
    pub l: usize,
    /// Fraction of all observed runs (pooled over trials) with length >= l.
    pub frequency: f64,
    pub bound: f64,
    /// Binomial standard deviation of the frequency under the bound.
    pub sigma: f64,
}

impl TailRow {
    pub fn within(&self, sigmas: f64) -> bool {
        self.frequency <= self.bound + sigmas * self.sigma
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunLengthReport {
    pub trials: usize,
    pub runs_observed: usize,
    pub tail: Vec<TailRow>,
    pub mean_lmax: f64,
    pub lmax_bound: f64,
}

/// Hashes `m` items onto `n` equally likely heads, places them by linear
/// probing at capacity `ceil(m/n) + alpha`, and collects full-run
/// statistics over `trials` independent placements.
pub fn run_length_trials(m: usize, n: usize, alpha: usize, trials: usize, seed: u64) -> RunLengthReport {
    let capacity = m.div_ceil(n) + alpha;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run_counts = vec![0usize; n + 1];
    let mut runs = 0;
    let mut lmax_sum = 0usize;
    let mut counts = vec![0usize; n];
    for _ in 0..trials {
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..m {
            counts[rng.random_range(0..n)] += 1;
        }
        let stats = mscfs_from_pattern(&carry_placement(&counts, capacity));
        for &len in &stats.lengths {
            run_counts[len] += 1;
        }
        runs += stats.lengths.len();
        lmax_sum += stats.l_max;
    }
    let tail = (1..n)
        .map(|l| {
            let at_least: usize = run_counts[l..].iter().sum();
            let frequency = if runs == 0 { 0.0 } else { at_least as f64 / runs as f64 };
            let bound = mscfs_tail_bound(alpha, m, l);
            let sigma = (bound * (1.0 - bound) / runs.max(1) as f64).sqrt();
            TailRow { l, frequency, bound, sigma }
        })
        .collect();
    RunLengthReport {
        trials,
        runs_observed: runs,
        tail,
        mean_lmax: lmax_sum as f64 / trials.max(1) as f64,
        lmax_bound: lmax_expectation_bound(alpha, m, n),
    }
}
