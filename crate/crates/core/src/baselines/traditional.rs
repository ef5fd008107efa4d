use crate::error::{Error, Result};
use crate::placement::{OpOutcome, Placement};
use crate::ring::{HashBackend, Recency, Ring};
use crate::workload::{EventKind, RequestEvent};

/// Classic consistent hashing: every item lives at its head and servers
/// have no capacity limit. Every item request visits exactly one server.
#[derive(Debug, Clone)]
pub struct Traditional {
    ring: Ring,
    omega: f64,
}

impl Traditional {
    pub fn new(backend: HashBackend, omega: f64) -> Self {
        Traditional { ring: Ring::new(backend), omega }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn access(&self, id: &str) -> OpOutcome {
        OpOutcome::new(self.ring.contains(id), 1, 0, self.omega)
    }

    pub fn insert_item(&mut self, id: &str, now: f64) -> Result<OpOutcome> {
        if self.ring.contains(id) {
            return Ok(OpOutcome::new(true, 1, 0, self.omega));
        }
        let head = self.ring.head_point(self.ring.point_of(id)?)?;
        self.ring.place(id, head, Recency(0), now, 0)?;
        Ok(OpOutcome::new(false, 1, 0, self.omega))
    }

    pub fn delete_item(&mut self, id: &str) -> OpOutcome {
        let found = self.ring.take(id).is_some();
        OpOutcome::new(found, 1, 0, self.omega)
    }

    /// Items whose head becomes the new server move onto it.
    pub fn insert_server(&mut self, id: &str) -> Result<u64> {
        let reheaded = self.ring.add_server_node(id)?;
        let point = self.ring.server_point(id)?;
        for item in &reheaded {
            self.ring.move_item(item, point);
        }
        Ok(reheaded.len() as u64)
    }

    /// Items of the removed server move to its clockwise neighbor.
    pub fn delete_server(&mut self, id: &str) -> Result<u64> {
        let point = self.ring.server_point(id)?;
        let items = self.ring.items_at(point).to_vec();
        if self.ring.server_count() == 1 && !items.is_empty() {
            return Err(Error::NoServers);
        }
        if !items.is_empty() {
            let successor = self.ring.next(point);
            for item in &items {
                self.ring.move_item(item, successor);
            }
        }
        self.ring.remove_server_node(id)?;
        Ok(items.len() as u64)
    }
}

impl Placement for Traditional {
    fn name(&self) -> &'static str {
        "trad"
    }

    fn ring(&self) -> &Ring {
        &self.ring
    }

    fn omega(&self) -> f64 {
        self.omega
    }

    fn apply(&mut self, event: &RequestEvent) -> Result<OpOutcome> {
        match event.kind {
            EventKind::Access => Ok(self.access(&event.target)),
            EventKind::InsertItem => self.insert_item(&event.target, event.timestamp),
            EventKind::DeleteItem => Ok(self.delete_item(&event.target)),
            EventKind::InsertServer => Ok(OpOutcome::moves_only(self.insert_server(&event.target)?, self.omega)),
            EventKind::DeleteServer => Ok(OpOutcome::moves_only(self.delete_server(&event.target)?, self.omega)),
        }
    }
}
