use thiserror::Error;

/// Errors produced by the ring, the placement algorithms and the analysis tools.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid identifier {0:?}")]
    InvalidId(String),
    #[error("ring has no servers")]
    NoServers,
    #[error("unknown server {0:?}")]
    UnknownServer(String),
    #[error("unknown item {0:?}")]
    UnknownItem(String),
    #[error("hash point of {id:?} collides with server {existing:?}")]
    PointCollision { id: String, existing: String },
    #[error("inconsistent ring state: {0}")]
    InconsistentState(String),
    #[error("items {0:?} and {1:?} are not hosted on adjacent servers")]
    NotAdjacent(String, String),
    #[error("no non-full server left to place {0:?}")]
    CapacityExhausted(String),
    #[error("item {item:?} is not ahead of head {head:?}")]
    NotAhead { item: String, head: String },
    #[error("snapshots are not comparable: {0}")]
    IncomparableSnapshots(String),
    #[error("every server is full")]
    AllFull,
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
