use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Access,
    InsertItem,
    DeleteItem,
    InsertServer,
    DeleteServer,
}

impl EventKind {
    /// Op code used in traces and in `requests.csv`.
    pub fn code(self) -> &'static str {
        match self {
            EventKind::Access => "A",
            EventKind::InsertItem => "I",
            EventKind::DeleteItem => "D",
            EventKind::InsertServer => "SI",
            EventKind::DeleteServer => "SD",
        }
    }

    pub fn is_churn(self) -> bool {
        matches!(self, EventKind::InsertServer | EventKind::DeleteServer)
    }
}

impl FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "A" => EventKind::Access,
            "I" => EventKind::InsertItem,
            "D" => EventKind::DeleteItem,
            "SI" => EventKind::InsertServer,
            "SD" => EventKind::DeleteServer,
            other => return Err(Error::InvalidConfig(format!("unknown op code {other:?}"))),
        })
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One timestamped request. `target` is an item id for item operations and
/// a server id for churn.
#[derive(Debug, Clone, PartialEq)]
pub struct RequestEvent {
    /// Seconds since the start of the trace.
    pub timestamp: f64,
    pub kind: EventKind,
    pub target: String,
}

impl RequestEvent {
    pub fn new(timestamp: f64, kind: EventKind, target: impl Into<String>) -> Self {
        RequestEvent { timestamp, kind, target: target.into() }
    }
}
