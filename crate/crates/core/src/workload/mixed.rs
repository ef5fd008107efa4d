use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::churn::server_name;
use super::event::{EventKind, RequestEvent};
use super::temporal::item_name;

/// Parameters of a randomized stress stream mixing every request kind.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedConfig {
    pub num_items: usize,
    pub num_servers: usize,
    pub num_requests: usize,
    /// Relative weights of access, insertion and deletion.
    pub weights: [f64; 3],
    /// Probability that a step is a server event instead of an item request.
    pub churn_probability: f64,
    /// Probability that an access repeats the previous access target.
    pub locality: f64,
    pub seed: u64,
}

impl Default for MixedConfig {
    fn default() -> Self {
        MixedConfig {
            num_items: 120,
            num_servers: 8,
            num_requests: 100_000,
            weights: [0.6, 0.2, 0.2],
            churn_probability: 0.002,
            locality: 0.3,
            seed: 0,
        }
    }
}

/// Random access/insert/delete stream over a small universe, interleaved
/// with server insertions and deletions. Requests may target absent items.
pub fn gen_mixed(config: &MixedConfig) -> Vec<RequestEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let total: f64 = config.weights.iter().sum();
    let mut live: Vec<String> = (0..config.num_servers).map(server_name).collect();
    let mut next_server = config.num_servers;
    let mut prev: Option<usize> = None;
    let mut events = Vec::with_capacity(config.num_requests);
    for i in 0..config.num_requests {
        let t = i as f64;
        if rng.random_bool(config.churn_probability) {
            if live.len() > 1 && rng.random_bool(0.5) {
                let victim = live.remove(rng.random_range(0..live.len()));
                events.push(RequestEvent::new(t, EventKind::DeleteServer, victim));
            } else {
                let id = server_name(next_server);
                next_server += 1;
                live.push(id.clone());
                events.push(RequestEvent::new(t, EventKind::InsertServer, id));
            }
            continue;
        }
        let x = rng.random_range(0.0..total);
        let kind = if x < config.weights[0] {
            EventKind::Access
        } else if x < config.weights[0] + config.weights[1] {
            EventKind::InsertItem
        } else {
            EventKind::DeleteItem
        };
        let target = match prev {
            Some(p) if kind == EventKind::Access && rng.random_bool(config.locality) => p,
            _ => rng.random_range(0..config.num_items),
        };
        if kind == EventKind::Access {
            prev = Some(target);
        }
        events.push(RequestEvent::new(t, kind, item_name(target)));
    }
    events
}
