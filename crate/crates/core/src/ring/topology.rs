use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use rustc_hash::FxHashMap;

use super::point::{HashBackend, HashPoint};
use crate::error::{Error, Result};

/// Position of an item in the recency order. Larger is more recent.
///
/// Accesses stamp the (positive) logical clock; insertions stamp a
/// decreasing negative sequence so a freshly inserted item ranks below every
/// accessed item and below every earlier insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Recency(pub i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Clockwise,
    CounterClockwise,
}

/// Bookkeeping for one stored item.
#[derive(Debug, Clone)]
pub struct ItemRecord {
    pub point: HashPoint,
    /// Point of the head server; refreshed whenever the server set changes.
    pub head: HashPoint,
    pub host: HashPoint,
    pub recency: Recency,
    /// Trace time (seconds) at which the item entered the system.
    pub inserted_at: f64,
    /// Logical clock of the last insertion or access.
    pub touched: u64,
    /// Logical clock at which the head last changed because of server churn.
    pub head_epoch: u64,
}

/// One server on the ring with its arrival-ordered items (front = oldest).
#[derive(Debug, Clone)]
pub struct ServerNode {
    id: String,
    point: HashPoint,
    items: Vec<String>,
    pub(crate) tombstones: usize,
    pub(crate) was_full_prev_phase: bool,
}

impl ServerNode {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn point(&self) -> HashPoint {
        self.point
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn tombstones(&self) -> usize {
        self.tombstones
    }

    pub fn was_full_prev_phase(&self) -> bool {
        self.was_full_prev_phase
    }
}

/// The ring topology: servers in hash order, every stored item, and the
/// common per-server capacity.
#[derive(Debug, Clone)]
pub struct Ring {
    backend: HashBackend,
    servers: BTreeMap<HashPoint, ServerNode>,
    server_ids: FxHashMap<String, HashPoint>,
    items: FxHashMap<String, ItemRecord>,
    capacity: usize,
}

impl Ring {
    pub fn new(backend: HashBackend) -> Self {
        Ring {
            backend,
            servers: BTreeMap::new(),
            server_ids: FxHashMap::default(),
            items: FxHashMap::default(),
            capacity: usize::MAX,
        }
    }

    /// Ring with the given servers and a fixed capacity, for fixtures.
    pub fn with_servers(backend: HashBackend, ids: &[&str], capacity: usize) -> Result<Self> {
        let mut ring = Ring::new(backend);
        ring.capacity = capacity;
        for id in ids {
            ring.add_server_node(id)?;
        }
        Ok(ring)
    }

    pub fn backend(&self) -> HashBackend {
        self.backend
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn set_capacity(&mut self, capacity: usize) {
        self.capacity = capacity;
    }

    pub fn server_count(&self) -> usize {
        self.servers.len()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn point_of(&self, id: &str) -> Result<HashPoint> {
        self.backend.point(id)
    }

    /// Servers in clockwise order starting from the smallest hash point.
    pub fn servers(&self) -> impl Iterator<Item = &ServerNode> {
        self.servers.values()
    }

    pub fn server(&self, id: &str) -> Option<&ServerNode> {
        self.server_ids.get(id).and_then(|p| self.servers.get(p))
    }

    pub fn server_at(&self, point: HashPoint) -> Option<&ServerNode> {
        self.servers.get(&point)
    }

    pub fn server_point(&self, id: &str) -> Result<HashPoint> {
        self.server_ids
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownServer(id.to_string()))
    }

    pub(crate) fn server_id(&self, point: HashPoint) -> &str {
        &self.servers[&point].id
    }

    /// The server with the smallest hash point ("server 0").
    pub fn first_server(&self) -> Option<HashPoint> {
        self.servers.keys().next().copied()
    }

    /// Clockwise successor of a ring position (a server's own point excluded).
    pub(crate) fn next(&self, point: HashPoint) -> HashPoint {
        self.servers
            .range((Excluded(point), Unbounded))
            .next()
            .or_else(|| self.servers.iter().next())
            .map(|(p, _)| *p)
            .expect("ring has servers")
    }

    pub(crate) fn prev(&self, point: HashPoint) -> HashPoint {
        self.servers
            .range(..point)
            .next_back()
            .or_else(|| self.servers.iter().next_back())
            .map(|(p, _)| *p)
            .expect("ring has servers")
    }

    /// Point of the server at or clockwise after `point`.
    pub fn head_point(&self, point: HashPoint) -> Result<HashPoint> {
        self.servers
            .range(point..)
            .next()
            .or_else(|| self.servers.iter().next())
            .map(|(p, _)| *p)
            .ok_or(Error::NoServers)
    }

    /// Id of the server minimizing the clockwise distance from `item_point`.
    pub fn head_of(&self, item_point: HashPoint) -> Result<&str> {
        let head = self.head_point(item_point)?;
        Ok(self.server_id(head))
    }

    pub fn neighbor(&self, server_id: &str, direction: Direction) -> Result<&str> {
        let point = self.server_point(server_id)?;
        let other = match direction {
            Direction::Clockwise => self.next(point),
            Direction::CounterClockwise => self.prev(point),
        };
        Ok(self.server_id(other))
    }

    /// Number of clockwise steps from server `from` to server `to`.
    pub fn hops(&self, from: HashPoint, to: HashPoint) -> usize {
        let n = self.servers.len();
        let rank = |p: HashPoint| self.servers.range(..p).count();
        (rank(to) + n - rank(from)) % n
    }

    /// Inserts an empty server and re-resolves the heads of affected items.
    /// Returns the ids of items whose head moved to the new server.
    pub fn add_server_node(&mut self, id: &str) -> Result<Vec<String>> {
        let point = self.backend.point(id)?;
        if let Some(existing) = self.servers.get(&point) {
            return Err(Error::PointCollision {
                id: id.to_string(),
                existing: existing.id.clone(),
            });
        }
        if self.server_ids.contains_key(id) {
            return Err(Error::PointCollision {
                id: id.to_string(),
                existing: id.to_string(),
            });
        }
        self.servers.insert(
            point,
            ServerNode {
                id: id.to_string(),
                point,
                items: Vec::new(),
                tombstones: 0,
                was_full_prev_phase: false,
            },
        );
        self.server_ids.insert(id.to_string(), point);
        let successor = self.next(point);
        let mut moved = Vec::new();
        for (item_id, record) in self.items.iter_mut() {
            if record.head == successor
                && record.point.cw_distance(point) < record.point.cw_distance(successor)
            {
                record.head = point;
                moved.push(item_id.clone());
            }
        }
        moved.sort();
        Ok(moved)
    }

    /// Detaches a server. Its items leave the ring and are returned in
    /// arrival order; items headed at it are re-headed to its successor.
    pub fn remove_server_node(&mut self, id: &str) -> Result<Vec<(String, ItemRecord)>> {
        let point = self.server_point(id)?;
        let node = self.servers.remove(&point).expect("indexed server exists");
        self.server_ids.remove(id);
        let evicted: Vec<(String, ItemRecord)> = node
            .items
            .into_iter()
            .map(|item| {
                let record = self.items.remove(&item).expect("hosted item has a record");
                (item, record)
            })
            .collect();
        if !self.servers.is_empty() {
            let successor = self.head_point(point)?;
            for record in self.items.values_mut() {
                if record.head == point {
                    record.head = successor;
                }
            }
        } else if !self.items.is_empty() {
            return Err(Error::InconsistentState(
                "items left on a ring without servers".into(),
            ));
        }
        Ok(evicted)
    }

    pub fn item(&self, id: &str) -> Option<&ItemRecord> {
        self.items.get(id)
    }

    pub fn items(&self) -> impl Iterator<Item = (&String, &ItemRecord)> {
        self.items.iter()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.items.contains_key(id)
    }

    pub fn host_of(&self, id: &str) -> Option<HashPoint> {
        self.items.get(id).map(|r| r.host)
    }

    pub(crate) fn items_at(&self, point: HashPoint) -> &[String] {
        &self.servers[&point].items
    }

    /// Places a new item at the back of `host`.
    pub(crate) fn place(&mut self, id: &str, host: HashPoint, recency: Recency, inserted_at: f64, clock: u64) -> Result<()> {
        let point = self.backend.point(id)?;
        let head = self.head_point(point)?;
        let node = self
            .servers
            .get_mut(&host)
            .ok_or_else(|| Error::InconsistentState(format!("no server at {host}")))?;
        node.items.push(id.to_string());
        self.items.insert(
            id.to_string(),
            ItemRecord {
                point,
                head,
                host,
                recency,
                inserted_at,
                touched: clock,
                head_epoch: 0,
            },
        );
        Ok(())
    }

    /// Fixture helper: places `id` at the back of server `server_id`
    /// without any capacity or invariant checks.
    pub fn place_at(&mut self, id: &str, server_id: &str, recency: Recency) -> Result<()> {
        if self.contains(id) {
            return Err(Error::InvalidId(format!("{id} already stored")));
        }
        let host = self.server_point(server_id)?;
        self.place(id, host, recency, 0.0, 0)
    }

    pub(crate) fn take(&mut self, id: &str) -> Option<ItemRecord> {
        let record = self.items.remove(id)?;
        let node = self.servers.get_mut(&record.host).expect("host exists");
        let idx = node.items.iter().position(|x| x == id).expect("item listed at host");
        node.items.remove(idx);
        Some(record)
    }

    /// Moves an item to the back of server `to`.
    pub(crate) fn move_item(&mut self, id: &str, to: HashPoint) {
        let record = self.items.get_mut(id).expect("moved item exists");
        let from = record.host;
        record.host = to;
        let node = self.servers.get_mut(&from).expect("host exists");
        let idx = node.items.iter().position(|x| x == id).expect("item listed at host");
        let name = node.items.remove(idx);
        self.servers.get_mut(&to).expect("target exists").items.push(name);
    }

    pub(crate) fn touch(&mut self, id: &str, recency: Recency, clock: u64) {
        if let Some(record) = self.items.get_mut(id) {
            record.recency = recency;
            record.touched = clock;
        }
    }

    pub(crate) fn mark_head_epoch(&mut self, ids: &[String], clock: u64) {
        for id in ids {
            if let Some(record) = self.items.get_mut(id) {
                record.head_epoch = clock;
            }
        }
    }

    pub(crate) fn node_mut(&mut self, point: HashPoint) -> &mut ServerNode {
        self.servers.get_mut(&point).expect("server exists")
    }

    pub fn load(&self, point: HashPoint) -> usize {
        self.servers.get(&point).map_or(0, |s| s.items.len())
    }

    /// Full for probing purposes: live items plus tombstones reach capacity.
    pub fn is_full(&self, point: HashPoint) -> bool {
        let node = &self.servers[&point];
        node.items.len() + node.tombstones >= self.capacity
    }

    pub fn has_spare(&self, point: HashPoint) -> bool {
        self.servers[&point].items.len() < self.capacity
    }

    pub fn max_load(&self) -> usize {
        self.servers.values().map(|s| s.items.len()).max().unwrap_or(0)
    }

    pub fn server_points(&self) -> Vec<HashPoint> {
        self.servers.keys().copied().collect()
    }
}
