//! Demand-aware consistent hashing with bounded loads.
//!
//! The crate provides the ring substrate, the Hash & Adjust placement
//! algorithm, the traditional and bounded-load baselines, workload
//! generators and trace IO, and analysis instrumentation (server lists,
//! full-run statistics, inversion counting and a brute-force offline
//! optimum for small instances).

pub mod analysis;
pub mod baselines;
pub mod cost;
pub mod error;
pub mod hna;
pub mod placement;
mod probe;
pub mod ring;
pub mod workload;

pub use cost::{CostLedger, LedgerEntry, LedgerKind};
pub use error::{Error, Result};
pub use hna::{CapacityRule, HashAndAdjust, HnaConfig, PhaseState};
pub use placement::{AccessOutcome, OpOutcome, Placement};
pub use ring::{hash_point, HashBackend, HashPoint, Recency, Ring};
pub use workload::{EventKind, RequestEvent, WorkloadConfig};
