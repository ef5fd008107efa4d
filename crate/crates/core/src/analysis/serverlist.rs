use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// A run of servers that are all full except the last one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerListView {
    /// Server ids in clockwise order.
    pub servers: Vec<String>,
    /// Servers of the list that are the head of at least one stored item.
    pub heads: Vec<String>,
}

/// Splits the ring into server lists, each ending at a non-full server.
/// The first list starts right after the last non-full server in hash
/// order, so lists come out in clockwise order from there.
pub fn decompose_serverlists(ring: &Ring) -> Result<Vec<ServerListView>> {
    let points = ring.server_points();
    let n = points.len();
    let last_open = points.iter().rposition(|&p| !ring.is_full(p)).ok_or(Error::AllFull)?;
    let heads: BTreeSet<_> = ring.items().map(|(_, r)| r.head).collect();
    let mut lists = Vec::new();
    let mut current = ServerListView { servers: Vec::new(), heads: Vec::new() };
    for k in 1..=n {
        let p = points[(last_open + k) % n];
        let id = ring.server_at(p).expect("listed point").id().to_string();
        if heads.contains(&p) {
            current.heads.push(id.clone());
        }
        current.servers.push(id);
        if !ring.is_full(p) {
            lists.push(std::mem::replace(&mut current, ServerListView { servers: Vec::new(), heads: Vec::new() }));
        }
    }
    Ok(lists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{HashBackend, Recency};

    fn ring_with_pattern(full: &[bool]) -> Ring {
        let ids: Vec<String> = (0..full.len()).map(|i| format!("s{}@0.{}", i + 1, i + 1)).collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let mut ring = Ring::with_servers(HashBackend::Fixture, &refs, 1).unwrap();
        for (i, f) in full.iter().enumerate() {
            if *f {
                ring.place_at(&format!("x{i}@0.{}", i + 1), &ids[i], Recency(0)).unwrap();
            }
        }
        ring
    }

    fn names(lists: &[ServerListView]) -> Vec<Vec<String>> {
        lists.iter().map(|l| l.servers.iter().map(|s| s[..2].to_string()).collect()).collect()
    }

    #[test]
    fn splits_at_non_full_servers() {
        let lists = decompose_serverlists(&ring_with_pattern(&[true, true, false, true, false])).unwrap();
        assert_eq!(names(&lists), [vec!["s1", "s2", "s3"], vec!["s4", "s5"]]);
        assert_eq!(lists[0].heads.len(), 2);
        let lists = decompose_serverlists(&ring_with_pattern(&[false, false, false])).unwrap();
        assert_eq!(lists.len(), 3);
        assert!(matches!(decompose_serverlists(&ring_with_pattern(&[true, true])), Err(Error::AllFull)));
    }

    #[test]
    fn wraps_around_server_zero() {
        let lists = decompose_serverlists(&ring_with_pattern(&[true, false, true])).unwrap();
        assert_eq!(names(&lists), [vec!["s3", "s1", "s2"]]);
    }
}
