//! Measurement tools for the placement algorithms: server-list
//! decomposition, full-run statistics and their probabilistic bounds,
//! position and inversion accounting, invariant checks, storage
//! utilization and an exhaustive offline optimum for tiny instances.

mod bounds;
mod invariants;
mod montecarlo;
mod mscfs;
mod opt;
mod position;
mod serverlist;
mod utilization;

pub use bounds::{lmax_expectation_bound, lmax_expectation_bound_linear, mscfs_tail_bound, mscfs_tail_bound_linear};
pub use invariants::{
    check_order, check_recency, check_search, verify_invariants, OrderSnapshot, Violation,
};
pub use montecarlo::{carry_placement, run_length_trials, RunLengthReport, TailRow};
pub use mscfs::{mscfs_from_pattern, mscfs_lengths, MscfsStats};
pub use opt::{opt_cost, Frontier, OptSolver};
pub use position::{headed_relative_position, inversion_count, inversions, potential, Snapshot};
pub use serverlist::{decompose_serverlists, ServerListView};
pub use utilization::utilization;
