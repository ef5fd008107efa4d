//! Linear probing over servers with bounded capacity: the search, hole
//! filling and overflow machinery shared by H&A and WBL.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::ring::{HashPoint, Ring};

pub(crate) enum SearchEnd {
    /// Item found at this server.
    Found(HashPoint),
    /// Search stopped at this non-full server without finding the item.
    Absent(HashPoint),
    /// Every server was visited and all were full.
    Exhausted,
}

pub(crate) struct Search {
    pub head: HashPoint,
    pub hops: u64,
    pub end: SearchEnd,
}

/// Walks clockwise from the head of `point` while the current server is
/// full and does not hold `id`.
pub(crate) fn search(ring: &Ring, id: &str, point: HashPoint) -> Result<Search> {
    let head = ring.head_point(point)?;
    let host = ring.host_of(id);
    let n = ring.server_count() as u64;
    let mut at = head;
    let mut hops = 1;
    loop {
        if host == Some(at) {
            return Ok(Search { head, hops, end: SearchEnd::Found(at) });
        }
        if !ring.is_full(at) {
            return Ok(Search { head, hops, end: SearchEnd::Absent(at) });
        }
        if hops >= n {
            return Ok(Search { head, hops, end: SearchEnd::Exhausted });
        }
        at = ring.next(at);
        hops += 1;
    }
}

/// Which item a reconfiguration step picks from a server.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pick {
    /// Minimal `(recency, id)`.
    LeastRecent,
    /// Maximal `(recency, id)`.
    MostRecent,
    /// Front of the arrival order.
    OldestArrival,
    /// Back of the arrival order.
    NewestArrival,
}

impl Pick {
    pub(crate) fn choose<'a>(self, ring: &Ring, mut ids: impl Iterator<Item = &'a String>) -> Option<String> {
        let key = |id: &&'a String| (ring.item(id).expect("listed item exists").recency, *id);
        let chosen = match self {
            Pick::LeastRecent => ids.min_by_key(key),
            Pick::MostRecent => ids.max_by_key(key),
            Pick::OldestArrival => ids.next(),
            Pick::NewestArrival => ids.last(),
        };
        chosen.cloned()
    }
}

/// True when the item's search path (head to host) passes through `s`
/// before reaching its host, so the item may be pulled back into `s`.
pub(crate) fn passes_over(ring: &Ring, id: &str, s: HashPoint) -> bool {
    let record = ring.item(id).expect("item exists");
    record.head.cw_distance(s) < record.head.cw_distance(record.host)
}

/// Fills spare capacity at `start` with valid items pulled back from the
/// nearest server that holds one. A server that gives up an item is filled
/// in turn, so the hole travels forward until no item passes over it.
///
/// The scan for valid items stops at the first non-full server. Right after
/// a capacity increase every server has room, so with `through_flagged` the
/// scan also walks through servers flagged as full before the change.
/// Returns the number of single-hop moves.
pub(crate) fn fill(ring: &mut Ring, start: HashPoint, pick: Pick, through_flagged: bool) -> u64 {
    let mut moves = 0;
    let mut work = VecDeque::from([start]);
    while let Some(s) = work.pop_front() {
        while ring.has_spare(s) {
            let Some((from, id)) = nearest_valid(ring, s, pick, through_flagged) else {
                break;
            };
            moves += ring.hops(s, from) as u64;
            ring.move_item(&id, s);
            work.push_back(from);
        }
    }
    moves
}

fn nearest_valid(ring: &Ring, s: HashPoint, pick: Pick, through_flagged: bool) -> Option<(HashPoint, String)> {
    let mut at = ring.next(s);
    while at != s {
        let candidates = ring.items_at(at).iter().filter(|id| passes_over(ring, id, s));
        if let Some(id) = pick.choose(ring, candidates) {
            return Some((at, id));
        }
        let passable = ring.is_full(at)
            || (through_flagged && ring.server_at(at).is_some_and(|n| n.was_full_prev_phase));
        if !passable {
            return None;
        }
        at = ring.next(at);
    }
    None
}

/// Pushes items out of over-capacity servers to their clockwise neighbor,
/// sweeping from server 0 until no server exceeds capacity.
///
/// Items headed at the neighbor would wrap around the whole ring back onto
/// their head. When nothing else is left to push, the server is relieved by
/// filling the first server with room on that path with `refill` instead,
/// so the hole travels forward to the overfull server.
pub(crate) fn push_overflow(ring: &mut Ring, pick: Pick, refill: Pick) -> Result<u64> {
    let points = ring.server_points();
    let total = points.len().saturating_mul(ring.capacity());
    if ring.item_count() > total {
        return Err(Error::InconsistentState(format!(
            "{} items exceed total capacity {total}",
            ring.item_count()
        )));
    }
    let mut moves = 0;
    loop {
        let mut changed = false;
        for &s in &points {
            while ring.load(s) > ring.capacity() {
                let to = ring.next(s);
                let staying = ring.items_at(s).iter().filter(|id| ring.item(id).expect("listed").head != to);
                if let Some(id) = pick.choose(ring, staying) {
                    ring.move_item(&id, to);
                    moves += 1;
                } else {
                    let load = ring.load(s);
                    let mut at = to;
                    while at != s && !ring.has_spare(at) {
                        at = ring.next(at);
                    }
                    if at != s {
                        moves += fill(ring, at, refill, false);
                    }
                    if ring.load(s) >= load {
                        let id = pick.choose(ring, ring.items_at(s).iter()).expect("overfull server has items");
                        ring.move_item(&id, to);
                        moves += 1;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            return Ok(moves);
        }
    }
}
