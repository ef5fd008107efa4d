use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Placed {
    head: usize,
    host: usize,
    inside: usize,
}

/// Frozen view of a configuration: server order, fullness and each item's
/// head, host and inside position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    capacity: usize,
    servers: Vec<String>,
    full: Vec<bool>,
    items: BTreeMap<String, Placed>,
}

impl Snapshot {
    pub fn of(ring: &Ring) -> Self {
        let points = ring.server_points();
        let index = |p| points.binary_search(&p).expect("known server");
        let mut items = BTreeMap::new();
        for (s, node) in ring.servers().enumerate() {
            for (inside, id) in node.items().iter().enumerate() {
                let head = index(ring.item(id).expect("listed item").head);
                items.insert(id.clone(), Placed { head, host: s, inside });
            }
        }
        Snapshot {
            capacity: ring.capacity(),
            servers: ring.servers().map(|s| s.id().to_string()).collect(),
            full: points.iter().map(|&p| ring.is_full(p)).collect(),
            items,
        }
    }

    /// Snapshot from explicit server contents, in clockwise order, and a
    /// head index per item.
    pub fn from_parts(capacity: usize, servers: &[(&str, &[&str])], heads: &[(&str, usize)]) -> Result<Self> {
        let heads: BTreeMap<&str, usize> = heads.iter().copied().collect();
        let mut items = BTreeMap::new();
        for (s, (_, content)) in servers.iter().enumerate() {
            for (inside, id) in content.iter().enumerate() {
                let head = *heads.get(id).ok_or_else(|| Error::UnknownItem(id.to_string()))?;
                items.insert(id.to_string(), Placed { head, host: s, inside });
            }
        }
        Ok(Snapshot {
            capacity,
            servers: servers.iter().map(|(id, _)| id.to_string()).collect(),
            full: servers.iter().map(|(_, c)| c.len() >= capacity).collect(),
            items,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    fn hops(&self, from: usize, to: usize) -> usize {
        let n = self.servers.len();
        (to + n - from) % n
    }

    /// True when every server from `head` up to (excluding) the item's host
    /// is full, so a search from `head` can reach the item.
    fn ahead(&self, item: &Placed, head: usize) -> bool {
        let n = self.servers.len();
        (0..self.hops(head, item.host)).all(|k| self.full[(head + k) % n])
    }

    fn position(&self, item: &Placed, head: usize) -> Option<usize> {
        self.ahead(item, head)
            .then(|| item.inside + self.capacity * self.hops(head, item.host))
    }

    fn server_index(&self, id: &str) -> Result<usize> {
        self.servers
            .iter()
            .position(|s| s == id)
            .ok_or_else(|| Error::UnknownServer(id.to_string()))
    }
}

/// Inside position of `item` plus `c` times the number of server hops from
/// `head` to its host.
pub fn headed_relative_position(snapshot: &Snapshot, item: &str, head: &str) -> Result<usize> {
    let h = snapshot.server_index(head)?;
    let placed = snapshot.items.get(item).ok_or_else(|| Error::UnknownItem(item.to_string()))?;
    snapshot.position(placed, h).ok_or_else(|| Error::NotAhead {
        item: item.to_string(),
        head: head.to_string(),
    })
}

/// Ordered pairs `(u, v)` with both items ahead of `head(u)` in both
/// configurations, `v` before `u` in `b` but behind `u` in `a`.
pub fn inversions(a: &Snapshot, b: &Snapshot) -> Result<Vec<(String, String)>> {
    if a.servers != b.servers || a.capacity != b.capacity {
        return Err(Error::IncomparableSnapshots("server sets or capacities differ".into()));
    }
    if a.items.len() != b.items.len() || a.items.iter().zip(&b.items).any(|((x, p), (y, q))| x != y || p.head != q.head) {
        return Err(Error::IncomparableSnapshots("item sets or heads differ".into()));
    }
    let mut out = Vec::new();
    for ((u, ua), ub) in a.items.iter().zip(b.items.values()) {
        let h = ua.head;
        let (Some(pa_u), Some(pb_u)) = (a.position(ua, h), b.position(ub, h)) else {
            continue;
        };
        for ((v, va), vb) in a.items.iter().zip(b.items.values()) {
            if u == v {
                continue;
            }
            let (Some(pa_v), Some(pb_v)) = (a.position(va, h), b.position(vb, h)) else {
                continue;
            };
            if pb_v < pb_u && pa_v > pa_u {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    Ok(out)
}

pub fn inversion_count(a: &Snapshot, b: &Snapshot) -> Result<usize> {
    inversions(a, b).map(|v| v.len())
}

/// `(1 + omega) / c` times the inversion count of `a` relative to `b`.
pub fn potential(a: &Snapshot, b: &Snapshot, omega: f64) -> Result<f64> {
    Ok((1.0 + omega) / a.capacity as f64 * inversion_count(a, b)? as f64)
}
