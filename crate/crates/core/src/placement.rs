//! Common interface of the placement algorithms driven by the benchmark.

use crate::error::Result;
use crate::ring::Ring;
use crate::workload::RequestEvent;

/// Cost breakdown of one served request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpOutcome {
    pub found: bool,
    /// Servers visited, including the head.
    pub search_hops: u64,
    /// Item moves between adjacent servers.
    pub moves: u64,
    /// `search_hops + omega * moves`.
    pub cost: f64,
}

/// Outcome of an access request.
pub type AccessOutcome = OpOutcome;

impl OpOutcome {
    pub fn new(found: bool, search_hops: u64, moves: u64, omega: f64) -> Self {
        OpOutcome {
            found,
            search_hops,
            moves,
            cost: search_hops as f64 + omega * moves as f64,
        }
    }

    /// Pure reconfiguration (server churn, expiry-triggered phase changes).
    pub fn moves_only(moves: u64, omega: f64) -> Self {
        OpOutcome::new(true, 0, moves, omega)
    }
}

/// A consistent-hashing placement algorithm that serves request events.
pub trait Placement {
    fn name(&self) -> &'static str;

    fn ring(&self) -> &Ring;

    /// Weight of one item move relative to one search hop.
    fn omega(&self) -> f64;

    fn apply(&mut self, event: &RequestEvent) -> Result<OpOutcome>;
}
