use std::collections::{HashMap, VecDeque};

/// Tracks insertion times so items can be expired a fixed time after they
/// entered the system. Re-inserting an item restarts its lifetime.
#[derive(Debug, Clone)]
pub struct StaleTracker {
    stale_time: f64,
    queue: VecDeque<(f64, String)>,
    live: HashMap<String, f64>,
}

impl StaleTracker {
    pub fn new(stale_time: f64) -> Self {
        StaleTracker { stale_time, queue: VecDeque::new(), live: HashMap::new() }
    }

    pub fn enabled(&self) -> bool {
        self.stale_time.is_finite()
    }

    pub fn on_insert(&mut self, id: &str, now: f64) {
        if !self.enabled() {
            return;
        }
        self.live.insert(id.to_string(), now);
        self.queue.push_back((now, id.to_string()));
    }

    pub fn on_delete(&mut self, id: &str) {
        self.live.remove(id);
    }

    /// Items whose lifetime ended at or before `now`, ordered by insertion
    /// time and then id. They are forgotten by the tracker.
    pub fn expire(&mut self, now: f64) -> Vec<String> {
        let mut due = Vec::new();
        while let Some((at, _)) = self.queue.front() {
            if at + self.stale_time > now {
                break;
            }
            let (at, id) = self.queue.pop_front().expect("front exists");
            if self.live.get(&id) == Some(&at) {
                self.live.remove(&id);
                due.push((at, id));
            }
        }
        due.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        due.into_iter().map(|(_, id)| id).collect()
    }
}
