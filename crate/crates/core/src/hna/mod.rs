//! Hash & Adjust: consistent hashing with additive extra capacity and
//! self-adjusting placement.
//!
//! An access walks clockwise from the item's head while servers are full
//! and, once the item is found, swaps it back one server at a time with the
//! least recently accessed item of the preceding server until it sits at its
//! head. Item insertions and deletions keep a signed counter `delta`; when
//! `|delta|` reaches the server count, or a server joins or leaves, every
//! capacity is recomputed as `ceil(m / n) + alpha` and items are pulled back
//! or pushed forward so that no non-full server ever sits on an item's
//! search path.

use crate::error::{Error, Result};
use crate::placement::{AccessOutcome, OpOutcome, Placement};
use crate::probe::{self, Pick, SearchEnd};
use crate::ring::{HashBackend, HashPoint, Recency, Ring};
use crate::workload::{EventKind, RequestEvent};

/// How the per-server capacity is derived at each phase boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityRule {
    /// `ceil(m / n) + alpha`.
    Additive { alpha: usize },
    /// The same capacity in every phase.
    Fixed(usize),
}

impl CapacityRule {
    pub fn capacity(self, items: usize, servers: usize) -> usize {
        match self {
            CapacityRule::Additive { alpha } => items.div_ceil(servers.max(1)) + alpha,
            CapacityRule::Fixed(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HnaConfig {
    pub capacity: CapacityRule,
    pub omega: f64,
}

impl Default for HnaConfig {
    fn default() -> Self {
        HnaConfig {
            capacity: CapacityRule::Additive { alpha: 4 },
            omega: 1.0,
        }
    }
}

impl HnaConfig {
    pub fn validate(&self) -> Result<()> {
        match self.capacity {
            CapacityRule::Additive { alpha } if alpha < 1 => {
                return Err(Error::InvalidConfig("alpha must be at least 1".into()))
            }
            CapacityRule::Fixed(0) => return Err(Error::InvalidConfig("fixed capacity must be positive".into())),
            _ => {}
        }
        if !(self.omega >= 1.0) || !self.omega.is_finite() {
            return Err(Error::InvalidConfig(format!("omega must be >= 1, got {}", self.omega)));
        }
        Ok(())
    }
}

/// Phase bookkeeping between two capacity changes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhaseState {
    /// Item insertions minus deletions since the phase started.
    pub delta: i64,
    /// Requests served since the phase started.
    pub phase_length: u64,
    /// Number of completed phases.
    pub phases: u64,
}

#[derive(Debug, Clone)]
pub struct HashAndAdjust {
    ring: Ring,
    config: HnaConfig,
    phase: PhaseState,
    clock: u64,
    insert_seq: i64,
}

impl HashAndAdjust {
    pub fn new(config: HnaConfig, backend: HashBackend) -> Result<Self> {
        config.validate()?;
        let mut ring = Ring::new(backend);
        ring.set_capacity(config.capacity.capacity(0, 1));
        Ok(HashAndAdjust {
            ring,
            config,
            phase: PhaseState::default(),
            clock: 0,
            insert_seq: 0,
        })
    }

    /// Starts from an existing ring (fixtures). The ring's capacity is kept
    /// until the next phase boundary.
    pub fn from_ring(ring: Ring, config: HnaConfig) -> Result<Self> {
        config.validate()?;
        let clock = ring
            .items()
            .map(|(_, r)| r.recency.0.max(0) as u64)
            .max()
            .unwrap_or(0);
        Ok(HashAndAdjust {
            ring,
            config,
            phase: PhaseState::default(),
            clock,
            insert_seq: 0,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn config(&self) -> &HnaConfig {
        &self.config
    }

    pub fn phase(&self) -> &PhaseState {
        &self.phase
    }

    pub fn clock(&self) -> u64 {
        self.clock
    }

    fn tick(&mut self) {
        self.clock += 1;
        self.phase.phase_length += 1;
    }

    fn outcome(&self, found: bool, hops: u64, moves: u64) -> OpOutcome {
        OpOutcome::new(found, hops, moves, self.config.omega)
    }

    /// Looks up `id` and, if it is stored away from its head, swaps it back
    /// toward the head one server at a time.
    pub fn access(&mut self, id: &str) -> Result<AccessOutcome> {
        self.tick();
        let point = self.ring.point_of(id)?;
        let search = probe::search(&self.ring, id, point)?;
        let mut at = match search.end {
            SearchEnd::Found(at) => at,
            SearchEnd::Absent(_) => return Ok(self.outcome(false, search.hops, 0)),
            SearchEnd::Exhausted => {
                return Err(Error::InconsistentState(format!(
                    "search for {id} visited every server without reaching a non-full one"
                )))
            }
        };
        let mut moves = 0;
        while at != search.head {
            let prev = self.ring.prev(at);
            let other = Pick::LeastRecent
                .choose(&self.ring, self.ring.items_at(prev).iter())
                .ok_or_else(|| Error::InconsistentState(format!("empty full server before {id}")))?;
            self.exchange(id, &other);
            moves += 1;
            at = prev;
        }
        self.ring.touch(id, Recency(self.clock as i64), self.clock);
        Ok(self.outcome(true, search.hops, moves))
    }

    fn exchange(&mut self, v: &str, u: &str) {
        let v_host = self.ring.host_of(v).expect("v stored");
        let u_host = self.ring.host_of(u).expect("u stored");
        self.ring.move_item(v, u_host);
        self.ring.move_item(u, v_host);
    }

    /// Exchanges `v` with `u`, where `v` is hosted on the clockwise neighbor
    /// of `u`'s host. Both land at the back of their new server.
    pub fn swap_adjacent(&mut self, v: &str, u: &str) -> Result<()> {
        let v_host = self.ring.host_of(v).ok_or_else(|| Error::UnknownItem(v.into()))?;
        let u_host = self.ring.host_of(u).ok_or_else(|| Error::UnknownItem(u.into()))?;
        if v_host == u_host || self.ring.next(u_host) != v_host {
            return Err(Error::NotAdjacent(v.into(), u.into()));
        }
        self.exchange(v, u);
        Ok(())
    }

    /// Inserts `id` at the first non-full server from its head. Inserting a
    /// stored item is a no-op that only pays for the search.
    pub fn insert_item(&mut self, id: &str, now: f64) -> Result<OpOutcome> {
        self.tick();
        let point = self.ring.point_of(id)?;
        let search = probe::search(&self.ring, id, point)?;
        let target = match search.end {
            SearchEnd::Found(_) => return Ok(self.outcome(true, search.hops, 0)),
            SearchEnd::Absent(at) => at,
            SearchEnd::Exhausted => return Err(Error::CapacityExhausted(id.to_string())),
        };
        self.insert_seq += 1;
        self.ring.place(id, target, Recency(-self.insert_seq), now, self.clock)?;
        self.phase.delta += 1;
        let mut moves = 0;
        if self.phase.delta >= self.ring.server_count() as i64 {
            moves = self.change_capacities()?;
        }
        Ok(self.outcome(false, search.hops, moves))
    }

    /// Removes `id` and refills the hole with the newest valid items from
    /// the back of its host.
    pub fn delete_item(&mut self, id: &str) -> Result<OpOutcome> {
        self.tick();
        let point = self.ring.point_of(id)?;
        let search = probe::search(&self.ring, id, point)?;
        let host = match search.end {
            SearchEnd::Found(at) => at,
            SearchEnd::Absent(_) => return Ok(self.outcome(false, search.hops, 0)),
            SearchEnd::Exhausted => {
                return Err(Error::InconsistentState(format!(
                    "search for {id} visited every server without reaching a non-full one"
                )))
            }
        };
        self.ring.take(id);
        let mut moves = probe::fill(&mut self.ring, host, Pick::MostRecent, false);
        self.phase.delta -= 1;
        if self.phase.delta <= -(self.ring.server_count() as i64) {
            moves += self.change_capacities()?;
        }
        Ok(self.outcome(true, search.hops, moves))
    }

    /// Ends the phase: recomputes capacities, pushes least recently accessed
    /// items out of over-capacity servers, then pulls the newest valid items
    /// back into servers that were full before and now have room.
    pub fn change_capacities(&mut self) -> Result<u64> {
        let n = self.ring.server_count();
        if n == 0 {
            return Ok(0);
        }
        for p in self.ring.server_points() {
            let full = self.ring.is_full(p);
            let node = self.ring.node_mut(p);
            node.was_full_prev_phase |= full;
        }
        let capacity = self.config.capacity.capacity(self.ring.item_count(), n);
        self.ring.set_capacity(capacity);
        self.phase.delta = 0;
        self.phase.phase_length = 0;
        self.phase.phases += 1;

        let mut moves = probe::push_overflow(&mut self.ring, Pick::LeastRecent, Pick::MostRecent)?;
        // Servers filled up by the pushes are part of search paths too.
        for p in self.ring.server_points() {
            let full = self.ring.is_full(p);
            self.ring.node_mut(p).was_full_prev_phase |= full;
        }
        for p in self.ring.server_points() {
            if self.ring.server_at(p).is_some_and(|s| s.was_full_prev_phase) && self.ring.has_spare(p) {
                moves += probe::fill(&mut self.ring, p, Pick::MostRecent, true);
            }
        }
        for p in self.ring.server_points() {
            self.ring.node_mut(p).was_full_prev_phase = false;
        }
        Ok(moves)
    }

    /// Adds a server, tags it as previously full and ends the phase so valid
    /// items are pulled back onto it.
    pub fn insert_server(&mut self, id: &str) -> Result<u64> {
        self.tick();
        let reheaded = self.ring.add_server_node(id)?;
        self.ring.mark_head_epoch(&reheaded, self.clock);
        let point = self.ring.server_point(id)?;
        self.ring.node_mut(point).was_full_prev_phase = true;
        self.change_capacities()
    }

    /// Hands all items of a server to its clockwise neighbor, removes it and
    /// ends the phase.
    pub fn delete_server(&mut self, id: &str) -> Result<u64> {
        self.tick();
        let point = self.ring.server_point(id)?;
        if self.ring.server_count() == 1 {
            if self.ring.item_count() > 0 {
                return Err(Error::NoServers);
            }
            self.ring.remove_server_node(id)?;
            return Ok(0);
        }
        let successor = self.ring.next(point);
        let predecessor = self.ring.prev(point);
        let mut moves = 0;
        for item in self.ring.items_at(point).to_vec() {
            // Items headed at the successor already went round the whole
            // ring; they stay at the far end of their path instead.
            let to = if self.ring.item(&item).expect("listed").head == successor { predecessor } else { successor };
            self.ring.move_item(&item, to);
            moves += 1;
        }
        let reheaded: Vec<String> = self
            .ring
            .items()
            .filter(|(_, r)| r.head == point)
            .map(|(id, _)| id.clone())
            .collect();
        self.ring.remove_server_node(id)?;
        self.ring.mark_head_epoch(&reheaded, self.clock);
        moves += self.change_capacities()?;
        Ok(moves)
    }

    /// An item is valid for server `s` when its head is `s` or one of the
    /// full servers directly counterclockwise of `s`, i.e. its search path
    /// may run over `s`.
    pub fn is_valid_for(&self, item: &str, server: &str) -> Result<bool> {
        is_valid_for(&self.ring, item, server)
    }
}

/// Validity of `item` for `server` on an arbitrary ring.
pub fn is_valid_for(ring: &Ring, item: &str, server: &str) -> Result<bool> {
    let s = ring.server_point(server)?;
    let head = match ring.item(item) {
        Some(record) => record.head,
        None => ring.head_point(ring.point_of(item)?)?,
    };
    let mut at: HashPoint = s;
    for _ in 0..ring.server_count() {
        if at == head {
            return Ok(true);
        }
        at = ring.prev(at);
        if !ring.is_full(at) {
            return Ok(false);
        }
    }
    Ok(false)
}

impl Placement for HashAndAdjust {
    fn name(&self) -> &'static str {
        "hna"
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

#[cfg(test)]
mod tests;
