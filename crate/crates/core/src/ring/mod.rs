//! The hashing substrate: identifiers on the unit ring, server topology,
//! head resolution and neighbor lookup.

mod point;
mod topology;

pub use point::{hash_point, HashBackend, HashPoint};
pub use topology::{Direction, ItemRecord, Recency, Ring, ServerNode};
