use std::fmt;

use rustc_hash::FxHashMap as HashMap;

use crate::ring::{HashPoint, Ring};

/// A broken invariant with the witnesses that break it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A non-full `server` lies between the item's head and its host.
    Search { item: String, server: String },
    /// `newer` was accessed more recently than `older` (same head) but is
    /// stored farther from the head.
    Recency { newer: String, older: String },
    /// Two items with a shared head swapped their server order across an
    /// insertion, deletion or server change.
    Order { first: String, second: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Search { item, server } => {
                write!(f, "non-full server {server} lies on the search path of {item}")
            }
            Violation::Recency { newer, older } => {
                write!(f, "{newer} is more recent than {older} but stored farther from their head")
            }
            Violation::Order { first, second } => {
                write!(f, "{first} and {second} changed order relative to their head")
            }
        }
    }
}

/// Every server from an item's head up to its host must be full.
pub fn check_search(ring: &Ring) -> Option<Violation> {
    let mut ids: Vec<&String> = ring.items().map(|(id, _)| id).collect();
    ids.sort();
    let full: HashMap<HashPoint, bool> = ring.server_points().into_iter().map(|p| (p, ring.is_full(p))).collect();
    for id in ids {
        let record = ring.item(id).expect("listed");
        let mut at = record.head;
        while at != record.host {
            if !full[&at] {
                return Some(Violation::Search {
                    item: id.clone(),
                    server: ring.server_at(at).expect("server").id().to_string(),
                });
            }
            at = ring.next(at);
        }
    }
    None
}

fn groups(ring: &Ring) -> Vec<Vec<(&String, u64)>> {
    let rank: HashMap<HashPoint, usize> = ring.server_points().into_iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = rank.len();
    let mut by_head: HashMap<HashPoint, Vec<(&String, u64)>> = HashMap::default();
    for (id, r) in ring.items() {
        let d = (rank[&r.host] + n - rank[&r.head]) % n;
        by_head.entry(r.head).or_default().push((id, d as u64));
    }
    let mut out: Vec<_> = by_head.into_values().collect();
    for g in &mut out {
        g.sort();
    }
    out.sort();
    out
}

/// Among items with the same head, a more recently used item is never
/// stored on a server farther from the head.
///
/// A pair is only compared once one of its items was touched after the
/// last server change that re-headed either of them; until then the pair
/// keeps whatever order the merge of two server lists produced.
pub fn check_recency(ring: &Ring) -> Option<Violation> {
    for group in groups(ring) {
        for &(u, du) in &group {
            let ru = ring.item(u).expect("listed");
            for &(v, dv) in &group {
                if du <= dv {
                    continue;
                }
                let rv = ring.item(v).expect("listed");
                let newer = (ru.recency, u) > (rv.recency, v);
                let established = ru.touched.max(rv.touched) > ru.head_epoch.max(rv.head_epoch);
                if newer && established {
                    return Some(Violation::Recency { newer: u.clone(), older: v.clone() });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    head: HashPoint,
    distance: u64,
    touched: u64,
    head_epoch: u64,
}

/// Head and server distance of every item, recorded before a mutation.
#[derive(Debug, Clone, Default)]
pub struct OrderSnapshot {
    items: HashMap<String, Entry>,
}

impl OrderSnapshot {
    pub fn of(ring: &Ring) -> Self {
        let rank: HashMap<HashPoint, usize> =
            ring.server_points().into_iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = rank.len();
        let items = ring
            .items()
            .map(|(id, r)| {
                let entry = Entry {
                    head: r.head,
                    distance: ((rank[&r.host] + n - rank[&r.head]) % n) as u64,
                    touched: r.touched,
                    head_epoch: r.head_epoch,
                };
                (id.clone(), entry)
            })
            .collect();
        OrderSnapshot { items }
    }
}

/// Items that share a head before and after a mutation keep their relative
/// server order (ties may break, strict orders may not flip).
///
/// Only pairs that were established before the mutation, in the sense of
/// [`check_recency`], are compared.
pub fn check_order(before: &OrderSnapshot, ring: &Ring) -> Option<Violation> {
    let after = OrderSnapshot::of(ring);
    let mut by_head: HashMap<(HashPoint, HashPoint), Vec<(u64, u64, &String, Entry)>> = HashMap::default();
    for (id, b) in &before.items {
        if let Some(a) = after.items.get(id) {
            by_head.entry((b.head, a.head)).or_default().push((b.distance, a.distance, id, *b));
        }
    }
    let mut keys: Vec<_> = by_head.keys().copied().collect();
    keys.sort();
    for key in keys {
        let mut group = by_head.remove(&key).expect("key listed");
        group.sort_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)));
        for (i, &(db_u, da_u, u, eu)) in group.iter().enumerate() {
            for &(db_v, da_v, v, ev) in &group[i + 1..] {
                if db_u < db_v && da_u > da_v && eu.touched.max(ev.touched) > eu.head_epoch.max(ev.head_epoch) {
                    return Some(Violation::Order { first: u.clone(), second: v.clone() });
                }
            }
        }
    }
    None
}

/// Checks the search and recency invariants, and the order invariant when
/// a pre-mutation snapshot is given. Returns the first violation.
pub fn verify_invariants(ring: &Ring, before: Option<&OrderSnapshot>) -> Option<Violation> {
    check_search(ring)
        .or_else(|| check_recency(ring))
        .or_else(|| before.and_then(|b| check_order(b, ring)))
}
