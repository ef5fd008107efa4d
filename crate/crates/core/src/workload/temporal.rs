use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Zipf;

use super::churn::{gen_churn, merge_streams};
use super::config::WorkloadConfig;
use super::event::{EventKind, RequestEvent};
use crate::error::{Error, Result};

pub fn item_name(k: usize) -> String {
    format!("item{k}")
}

/// Access stream with temporal locality: each request repeats the previous
/// target with probability `locality`, otherwise it draws a fresh target.
///
/// An `InsertItem` with the same timestamp precedes the first reference to
/// an item and every reference made after the item's stale time elapsed.
/// Request `i` happens at second `i`.
pub fn gen_temporal(config: &WorkloadConfig) -> Result<Vec<RequestEvent>> {
    config.validate()?;
    let m = config.num_items;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let zipf = match config.zipf_exponent {
        Some(s) => Some(Zipf::new(m as f64, s).map_err(|e| Error::InvalidConfig(format!("zipf: {e}")))?),
        None => None,
    };
    let mut inserted_at: Vec<Option<f64>> = vec![None; m];
    let mut events = Vec::with_capacity(config.num_requests * 2);
    let mut prev: Option<usize> = None;
    for i in 0..config.num_requests {
        let t = i as f64;
        let target = match prev {
            Some(p) if rng.random_bool(config.locality) => p,
            _ => match &zipf {
                Some(z) => (z.sample(&mut rng) as usize).clamp(1, m) - 1,
                None => rng.random_range(0..m),
            },
        };
        let live = inserted_at[target].is_some_and(|at| at + config.stale_time > t);
        if !live {
            inserted_at[target] = Some(t);
            events.push(RequestEvent::new(t, EventKind::InsertItem, item_name(target)));
        }
        events.push(RequestEvent::new(t, EventKind::Access, item_name(target)));
        prev = Some(target);
    }
    Ok(events)
}

/// Temporal stream merged with server churn over the same time span.
pub fn gen_workload(config: &WorkloadConfig) -> Result<Vec<RequestEvent>> {
    let items = gen_temporal(config)?;
    let churn = gen_churn(config, config.num_requests as f64);
    Ok(merge_streams(items, churn))
}
