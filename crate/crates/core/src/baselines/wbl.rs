use crate::error::{Error, Result};
use crate::placement::{AccessOutcome, OpOutcome, Placement};
use crate::probe::{self, Pick, SearchEnd};
use crate::ring::{HashBackend, HashPoint, Recency, Ring};
use crate::workload::{EventKind, RequestEvent};

/// How a deletion restores the probing invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WblDeletion {
    /// Pull the nearest valid item back into the hole, cascading forward.
    #[default]
    Backfill,
    /// Leave a tombstone that keeps the server full for probing until the
    /// next phase boundary or a later insertion reuses the slot.
    Tombstone,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WblConfig {
    pub load_factor: f64,
    pub deletion: WblDeletion,
    pub omega: f64,
}

impl Default for WblConfig {
    fn default() -> Self {
        WblConfig { load_factor: 1.25, deletion: WblDeletion::Backfill, omega: 1.0 }
    }
}

impl WblConfig {
    /// `ceil(load_factor * m / n)`, but never below `ceil(m / n) + 1` so
    /// that a non-full server always exists.
    pub fn capacity(&self, items: usize, servers: usize) -> usize {
        let n = servers.max(1);
        let scaled = (self.load_factor * items as f64 / n as f64).ceil() as usize;
        scaled.max(items.div_ceil(n) + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.load_factor > 1.0) || !self.load_factor.is_finite() {
            return Err(Error::InvalidConfig(format!("load factor must exceed 1, got {}", self.load_factor)));
        }
        if !(self.omega >= 1.0) || !self.omega.is_finite() {
            return Err(Error::InvalidConfig(format!("omega must be >= 1, got {}", self.omega)));
        }
        Ok(())
    }
}

/// Consistent hashing with bounded loads: linear probing from the head with
/// no self-adjustment. Capacities are recomputed at the same phase
/// boundaries as Hash & Adjust.
#[derive(Debug, Clone)]
pub struct Wbl {
    ring: Ring,
    config: WblConfig,
    delta: i64,
    phases: u64,
}

impl Wbl {
    pub fn new(config: WblConfig, backend: HashBackend) -> Result<Self> {
        config.validate()?;
        let mut ring = Ring::new(backend);
        ring.set_capacity(config.capacity(0, 1));
        Ok(Wbl { ring, config, delta: 0, phases: 0 })
    }

    /// Starts from an existing ring; its capacity is kept until the next
    /// phase boundary.
    pub fn from_ring(ring: Ring, config: WblConfig) -> Result<Self> {
        config.validate()?;
        Ok(Wbl { ring, config, delta: 0, phases: 0 })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn config(&self) -> &WblConfig {
        &self.config
    }

    pub fn phases(&self) -> u64 {
        self.phases
    }

    fn outcome(&self, found: bool, hops: u64, moves: u64) -> OpOutcome {
        OpOutcome::new(found, hops, moves, self.config.omega)
    }

    pub fn access(&self, id: &str) -> Result<AccessOutcome> {
        let search = probe::search(&self.ring, id, self.ring.point_of(id)?)?;
        match search.end {
            SearchEnd::Found(_) => Ok(self.outcome(true, search.hops, 0)),
            SearchEnd::Absent(_) => Ok(self.outcome(false, search.hops, 0)),
            SearchEnd::Exhausted => Err(Error::InconsistentState(format!(
                "probe for {id} visited every server without reaching a non-full one"
            ))),
        }
    }

    /// First server on the probe path of `head` that holds a tombstone.
    fn tombstone_on_path(&self, head: HashPoint, hops: u64) -> Option<HashPoint> {
        let mut at = head;
        for _ in 0..hops {
            if self.ring.server_at(at).is_some_and(|s| s.tombstones > 0) {
                return Some(at);
            }
            at = self.ring.next(at);
        }
        None
    }

    pub fn insert_item(&mut self, id: &str, now: f64) -> Result<OpOutcome> {
        let search = probe::search(&self.ring, id, self.ring.point_of(id)?)?;
        let target = match search.end {
            SearchEnd::Found(_) => return Ok(self.outcome(true, search.hops, 0)),
            SearchEnd::Absent(at) => self.tombstone_on_path(search.head, search.hops).unwrap_or(at),
            SearchEnd::Exhausted => self
                .tombstone_on_path(search.head, search.hops)
                .ok_or_else(|| Error::CapacityExhausted(id.to_string()))?,
        };
        let node = self.ring.node_mut(target);
        node.tombstones = node.tombstones.saturating_sub(1);
        self.ring.place(id, target, Recency(0), now, 0)?;
        self.delta += 1;
        let mut moves = 0;
        if self.delta >= self.ring.server_count() as i64 {
            moves = self.change_capacities()?;
        }
        Ok(self.outcome(false, search.hops, moves))
    }

    pub fn delete_item(&mut self, id: &str) -> Result<OpOutcome> {
        let search = probe::search(&self.ring, id, self.ring.point_of(id)?)?;
        let host = match search.end {
            SearchEnd::Found(at) => at,
            SearchEnd::Absent(_) => return Ok(self.outcome(false, search.hops, 0)),
            SearchEnd::Exhausted => {
                return Err(Error::InconsistentState(format!(
                    "probe for {id} visited every server without reaching a non-full one"
                )))
            }
        };
        self.ring.take(id);
        let mut moves = match self.config.deletion {
            WblDeletion::Backfill => probe::fill(&mut self.ring, host, Pick::OldestArrival, false),
            WblDeletion::Tombstone => {
                self.ring.node_mut(host).tombstones += 1;
                0
            }
        };
        self.delta -= 1;
        if self.delta <= -(self.ring.server_count() as i64) {
            moves += self.change_capacities()?;
        }
        Ok(self.outcome(true, search.hops, moves))
    }

    /// Recomputes the capacity, clears tombstones, pushes the newest
    /// arrivals out of over-capacity servers and backfills every server
    /// with room.
    pub fn change_capacities(&mut self) -> Result<u64> {
        let n = self.ring.server_count();
        if n == 0 {
            return Ok(0);
        }
        for p in self.ring.server_points() {
            let full = self.ring.is_full(p);
            let node = self.ring.node_mut(p);
            node.was_full_prev_phase = full;
            node.tombstones = 0;
        }
        self.ring.set_capacity(self.config.capacity(self.ring.item_count(), n));
        self.delta = 0;
        self.phases += 1;
        let mut moves = probe::push_overflow(&mut self.ring, Pick::NewestArrival, Pick::OldestArrival)?;
        for p in self.ring.server_points() {
            let full = self.ring.is_full(p);
            self.ring.node_mut(p).was_full_prev_phase |= full;
        }
        for p in self.ring.server_points() {
            if self.ring.has_spare(p) {
                moves += probe::fill(&mut self.ring, p, Pick::OldestArrival, true);
            }
        }
        for p in self.ring.server_points() {
            self.ring.node_mut(p).was_full_prev_phase = false;
        }
        Ok(moves)
    }

    pub fn insert_server(&mut self, id: &str) -> Result<u64> {
        self.ring.add_server_node(id)?;
        self.change_capacities()
    }

    pub fn delete_server(&mut self, id: &str) -> Result<u64> {
        let point = self.ring.server_point(id)?;
        let items = self.ring.items_at(point).to_vec();
        if self.ring.server_count() == 1 && !items.is_empty() {
            return Err(Error::NoServers);
        }
        let mut moves = 0;
        if !items.is_empty() {
            let successor = self.ring.next(point);
            for item in &items {
                self.ring.move_item(item, successor);
                moves += 1;
            }
        }
        self.ring.remove_server_node(id)?;
        Ok(moves + self.change_capacities()?)
    }
}

impl Placement for Wbl {
    fn name(&self) -> &'static str {
        "wbl"
    }

    fn ring(&self) -> &Ring {
        &self.ring
    }

    fn omega(&self) -> f64 {
        self.config.omega
    }

    fn apply(&mut self, event: &RequestEvent) -> Result<OpOutcome> {
        let omega = self.config.omega;
        match event.kind {
            EventKind::Access => self.access(&event.target),
            EventKind::InsertItem => self.insert_item(&event.target, event.timestamp),
            EventKind::DeleteItem => self.delete_item(&event.target),
            EventKind::InsertServer => Ok(OpOutcome::moves_only(self.insert_server(&event.target)?, omega)),
            EventKind::DeleteServer => Ok(OpOutcome::moves_only(self.delete_server(&event.target)?, omega)),
        }
    }
}
