//! Per-request cost accounting: search hops plus `omega` times item moves.

use std::io::{self, Write};

use crate::placement::OpOutcome;
use crate::workload::EventKind;

/// What a ledger row was charged for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LedgerKind {
    Request(EventKind),
    /// Deletion triggered by the stale-time expiry, not by the trace.
    Expiry,
}

impl LedgerKind {
    pub fn code(self) -> &'static str {
        match self {
            LedgerKind::Request(kind) => kind.code(),
            LedgerKind::Expiry => "E",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub timestamp: f64,
    pub kind: LedgerKind,
    pub target: String,
    pub hops: u64,
    pub moves: u64,
    pub cost: f64,
}

/// Running record of every charged operation.
#[derive(Debug, Clone)]
pub struct CostLedger {
    omega: f64,
    entries: Vec<LedgerEntry>,
    hops: u64,
    moves: u64,
}

impl CostLedger {
    pub fn new(omega: f64) -> Self {
        CostLedger { omega, entries: Vec::new(), hops: 0, moves: 0 }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn record(&mut self, timestamp: f64, kind: LedgerKind, target: &str, outcome: &OpOutcome) {
        self.hops += outcome.search_hops;
        self.moves += outcome.moves;
        self.entries.push(LedgerEntry {
            timestamp,
            kind,
            target: target.to_string(),
            hops: outcome.search_hops,
            moves: outcome.moves,
            cost: outcome.search_hops as f64 + self.omega * outcome.moves as f64,
        });
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_hops(&self) -> u64 {
        self.hops
    }

    pub fn total_moves(&self) -> u64 {
        self.moves
    }

    /// Search cost plus weighted reconfiguration cost over all rows.
    pub fn total_cost(&self) -> f64 {
        self.hops as f64 + self.omega * self.moves as f64
    }

    /// Total cost divided by the number of rows (0 when empty).
    pub fn average_cost(&self) -> f64 {
        if self.entries.is_empty() {
            0.0
        } else {
            self.total_cost() / self.entries.len() as f64
        }
    }

    /// `(count, total cost)` over rows of the given kind.
    pub fn cost_of(&self, kind: LedgerKind) -> (usize, f64) {
        self.entries
            .iter()
            .filter(|e| e.kind == kind)
            .fold((0, 0.0), |(n, c), e| (n + 1, c + e.cost))
    }

    /// Writes `t,kind,target,hops,moves,cost` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,kind,target,hops,moves,cost")?;
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                e.timestamp,
                e.kind.code(),
                e.target,
                e.hops,
                e.moves,
                e.cost
            )?;
        }
        Ok(())
    }
}
