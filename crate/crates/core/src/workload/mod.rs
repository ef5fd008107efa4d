//! Request sequences: synthetic temporal-locality streams, Poisson server
//! churn, stale-time expiry and the CSV trace format.

mod churn;
mod config;
mod event;
mod mixed;
mod stale;
mod temporal;
mod trace;
mod well_behaved;

pub use churn::{gen_churn, merge_streams, server_name};
pub use config::{parse_key_values, WorkloadConfig};
pub use event::{EventKind, RequestEvent};
pub use mixed::{gen_mixed, MixedConfig};
pub use stale::StaleTracker;
pub use temporal::{gen_temporal, gen_workload, item_name};
pub use trace::{parse_trace, parse_trace_str, serialize_trace, write_trace};
pub use well_behaved::{check_well_behaved, WellBehavedReport};
