use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp;

use super::config::WorkloadConfig;
use super::event::{EventKind, RequestEvent};

/// Id of the `k`-th server ever created; the initial ring uses `0..n`.
pub fn server_name(k: usize) -> String {
    format!("server{k}")
}

fn arrivals(rng: &mut ChaCha8Rng, mean: f64, horizon: f64) -> Vec<f64> {
    let exp = Exp::new(1.0 / mean).expect("positive rate");
    let mut out = Vec::new();
    let mut t = 0.0;
    loop {
        t += exp.sample(rng);
        if t >= horizon {
            return out;
        }
        out.push(t);
    }
}

/// Server insertions and deletions from two independent Poisson processes
/// with mean inter-arrival `churn_mean_interval`, over `[0, horizon)`.
///
/// Deletions target a uniformly random live server and are dropped when
/// only one server is left. New servers are named after the initial ones.
pub fn gen_churn(config: &WorkloadConfig, horizon: f64) -> Vec<RequestEvent> {
    if !config.churn_mean_interval.is_finite() {
        return Vec::new();
    }
    let mut insert_rng = ChaCha8Rng::seed_from_u64(config.seed);
    insert_rng.set_stream(1);
    let mut delete_rng = ChaCha8Rng::seed_from_u64(config.seed);
    delete_rng.set_stream(2);
    let inserts = arrivals(&mut insert_rng, config.churn_mean_interval, horizon);
    let deletes = arrivals(&mut delete_rng, config.churn_mean_interval, horizon);

    let mut live: Vec<String> = (0..config.num_servers).map(server_name).collect();
    let mut next_id = config.num_servers;
    let mut events = Vec::with_capacity(inserts.len() + deletes.len());
    let (mut i, mut d) = (0, 0);
    while i < inserts.len() || d < deletes.len() {
        let take_insert = d >= deletes.len() || (i < inserts.len() && inserts[i] <= deletes[d]);
        if take_insert {
            let id = server_name(next_id);
            next_id += 1;
            live.push(id.clone());
            events.push(RequestEvent::new(inserts[i], EventKind::InsertServer, id));
            i += 1;
        } else {
            if live.len() > 1 {
                let victim = live.remove(delete_rng.random_range(0..live.len()));
                events.push(RequestEvent::new(deletes[d], EventKind::DeleteServer, victim));
            }
            d += 1;
        }
    }
    events
}

/// Stable merge by timestamp; on ties events from `first` come first.
pub fn merge_streams(first: Vec<RequestEvent>, second: Vec<RequestEvent>) -> Vec<RequestEvent> {
    let mut out = Vec::with_capacity(first.len() + second.len());
    let mut b = second.into_iter().peekable();
    for event in first {
        while let Some(next) = b.peek() {
            if next.timestamp < event.timestamp {
                out.push(b.next().expect("peeked"));
            } else {
                break;
            }
        }
        out.push(event);
    }
    out.extend(b);
    out
}
