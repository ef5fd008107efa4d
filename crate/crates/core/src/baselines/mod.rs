//! Reference algorithms: traditional consistent hashing with unbounded
//! loads, and consistent hashing with bounded loads (linear probing).

mod traditional;
mod wbl;

pub use traditional::Traditional;
pub use wbl::{Wbl, WblConfig, WblDeletion};
