use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const MAX_SERVERS: usize = 4;
const MAX_CAPACITY: usize = 3;
const MAX_ITEMS: usize = 6;
const MAX_LENGTH: usize = 6;

/// Cheapest known cost of ending in each configuration after a prefix of
/// the request sequence. Unreachable configurations hold infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Frontier(Vec<f64>);

impl Frontier {
    pub fn best(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Exhaustive offline optimum for access sequences on tiny rings.
///
/// A configuration assigns every item to one of `n` servers (indices in
/// clockwise order) without exceeding the capacity. Between requests the
/// offline algorithm may move any item to an adjacent server with room at
/// cost `omega`. Serving an access costs `1 + hops(head, host)` and is only
/// allowed when every server from the head up to the host is full, so the
/// shared probing search reaches the item.
#[derive(Debug, Clone)]
pub struct OptSolver {
    servers: usize,
    capacity: usize,
    omega: f64,
    heads: Vec<usize>,
    /// `hosts[x]` is the assignment encoded by configuration `x`, or `None`
    /// when it exceeds the capacity somewhere.
    hosts: Vec<Option<Vec<u8>>>,
    loads: Vec<Vec<u8>>,
}

impl OptSolver {
    pub fn new(servers: usize, capacity: usize, heads: Vec<usize>, omega: f64) -> Result<Self> {
        let m = heads.len();
        if servers == 0 || servers > MAX_SERVERS || capacity > MAX_CAPACITY || m > MAX_ITEMS {
            return Err(Error::TooLarge(format!(
                "n = {servers}, c = {capacity}, m = {m} (limits {MAX_SERVERS}, {MAX_CAPACITY}, {MAX_ITEMS})"
            )));
        }
        if let Some(h) = heads.iter().find(|&&h| h >= servers) {
            return Err(Error::InvalidConfig(format!("head index {h} out of range")));
        }
        let total = servers.pow(m as u32);
        let mut hosts = Vec::with_capacity(total);
        let mut loads = Vec::with_capacity(total);
        for x in 0..total {
            let assignment: Vec<u8> = (0..m).map(|i| ((x / servers.pow(i as u32)) % servers) as u8).collect();
            let mut load = vec![0u8; servers];
            for &s in &assignment {
                load[s as usize] += 1;
            }
            let fits = load.iter().all(|&l| (l as usize) <= capacity);
            hosts.push(fits.then_some(assignment));
            loads.push(load);
        }
        Ok(OptSolver { servers, capacity, omega, heads, hosts, loads })
    }

    fn encode(&self, assignment: &[usize]) -> usize {
        assignment.iter().rev().fold(0, |acc, &s| acc * self.servers + s)
    }

    fn hops(&self, from: usize, to: usize) -> usize {
        (to + self.servers - from) % self.servers
    }

    /// Single adjacent moves out of configuration `x`.
    fn neighbors(&self, x: usize) -> Vec<usize> {
        let Some(assignment) = &self.hosts[x] else {
            return Vec::new();
        };
        let n = self.servers;
        let mut out = Vec::new();
        for (i, &s) in assignment.iter().enumerate() {
            let s = s as usize;
            let mut targets = vec![(s + 1) % n, (s + n - 1) % n];
            targets.dedup();
            for t in targets {
                if t != s && (self.loads[x][t] as usize) < self.capacity {
                    let unit = n.pow(i as u32);
                    out.push(x - s * unit + t * unit);
                }
            }
        }
        out
    }

    /// Relaxes every frontier entry along reconfiguration moves.
    fn close(&self, mut dist: Vec<f64>) -> Frontier {
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> = dist
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_finite())
            .map(|(x, d)| Reverse((d.to_bits(), x)))
            .collect();
        while let Some(Reverse((bits, x))) = heap.pop() {
            let d = f64::from_bits(bits);
            if d > dist[x] {
                continue;
            }
            for y in self.neighbors(x) {
                let nd = d + self.omega;
                if nd < dist[y] {
                    dist[y] = nd;
                    heap.push(Reverse((nd.to_bits(), y)));
                }
            }
        }
        Frontier(dist)
    }

    /// Frontier before the first request, starting from `initial` hosts.
    pub fn start(&self, initial: &[usize]) -> Result<Frontier> {
        if initial.len() != self.heads.len() || initial.iter().any(|&s| s >= self.servers) {
            return Err(Error::InvalidConfig("initial configuration does not match the instance".into()));
        }
        let x = self.encode(initial);
        if self.hosts[x].is_none() {
            return Err(Error::InvalidConfig("initial configuration exceeds the capacity".into()));
        }
        let mut dist = vec![f64::INFINITY; self.hosts.len()];
        dist[x] = 0.0;
        Ok(self.close(dist))
    }

    /// Serves an access to `item` from every configuration that can serve
    /// it, then allows reconfiguration again.
    pub fn serve(&self, frontier: &Frontier, item: usize) -> Frontier {
        let head = self.heads[item];
        let dist = frontier
            .0
            .iter()
            .enumerate()
            .map(|(x, &d)| {
                let Some(assignment) = self.hosts[x].as_ref().filter(|_| d.is_finite()) else {
                    return f64::INFINITY;
                };
                let hops = self.hops(head, assignment[item] as usize);
                let reachable = (0..hops).all(|k| self.loads[x][(head + k) % self.servers] as usize == self.capacity);
                if reachable {
                    d + 1.0 + hops as f64
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        self.close(dist)
    }
}

/// Minimum total cost of serving `sequence` (item indices) from `initial`
/// (host index per item) under the model of [`OptSolver`].
pub fn opt_cost(
    servers: usize,
    capacity: usize,
    heads: &[usize],
    initial: &[usize],
    sequence: &[usize],
    omega: f64,
) -> Result<f64> {
    if sequence.len() > MAX_LENGTH {
        return Err(Error::TooLarge(format!("sequence length {} exceeds {MAX_LENGTH}", sequence.len())));
    }
    if let Some(i) = sequence.iter().find(|&&i| i >= heads.len()) {
        return Err(Error::UnknownItem(format!("item index {i}")));
    }
    let solver = OptSolver::new(servers, capacity, heads.to_vec(), omega)?;
    let mut frontier = solver.start(initial)?;
    for &item in sequence {
        frontier = solver.serve(&frontier, item);
    }
    Ok(frontier.best())
}
