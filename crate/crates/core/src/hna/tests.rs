use super::*;

fn ring(capacity: usize, placed: &[(&str, &str, i64)]) -> Ring {
    let mut ring = Ring::with_servers(HashBackend::Fixture, &["A@0.1", "B@0.5", "C@0.8"], capacity).unwrap();
    for (item, server, stamp) in placed {
        ring.place_at(item, server, Recency(*stamp)).unwrap();
    }
    ring
}

fn hna(ring: Ring, alpha: usize, omega: f64) -> HashAndAdjust {
    let config = HnaConfig { capacity: CapacityRule::Additive { alpha }, omega };
    HashAndAdjust::from_ring(ring, config).unwrap()
}

fn items_of<'a>(h: &'a HashAndAdjust, server: &str) -> Vec<&'a str> {
    h.ring().server(server).unwrap().items().iter().map(String::as_str).collect()
}

/// A=[w,q], B=[x,r], C=[y,z] with z headed at A.
fn swap_fixture(omega: f64) -> HashAndAdjust {
    let r = ring(
        2,
        &[
            ("w@0.05", "A@0.1", 1),
            ("q@0.06", "A@0.1", 2),
            ("x@0.3", "B@0.5", 3),
            ("r@0.4", "B@0.5", 4),
            ("y@0.6", "C@0.8", 5),
            ("z@0.07", "C@0.8", 6),
        ],
    );
    hna(r, 1, omega)
}

#[test]
fn access_at_head_costs_one() {
    let mut h = swap_fixture(2.0);
    let out = h.access("x@0.3").unwrap();
    assert!(out.found);
    assert_eq!((out.search_hops, out.moves, out.cost), (1, 0, 1.0));
}

#[test]
fn access_swaps_item_back_to_head() {
    let mut h = swap_fixture(2.0);
    let out = h.access("z@0.07").unwrap();
    assert!(out.found);
    assert_eq!(out.search_hops, 3);
    assert_eq!(out.moves, 2);
    assert_eq!(out.cost, 3.0 + 2.0 * 2.0);
    assert_eq!(items_of(&h, "A@0.1"), ["q@0.06", "z@0.07"]);
    assert_eq!(items_of(&h, "B@0.5"), ["r@0.4", "w@0.05"]);
    assert_eq!(items_of(&h, "C@0.8"), ["y@0.6", "x@0.3"]);
    assert!(h.ring().item("z@0.07").unwrap().recency > h.ring().item("y@0.6").unwrap().recency);
}

#[test]
fn access_misses_at_non_full_head() {
    let mut h = hna(ring(2, &[("x@0.3", "B@0.5", 1)]), 1, 1.0);
    let out = h.access("u@0.2").unwrap();
    assert!(!out.found);
    assert_eq!((out.search_hops, out.cost), (1, 1.0));
}

#[test]
fn broken_fullness_is_reported() {
    let mut h = hna(ring(1, &[("a@0.05", "A@0.1", 1), ("b@0.3", "B@0.5", 2), ("c@0.6", "C@0.8", 3)]), 1, 1.0);
    assert!(matches!(h.access("u@0.2"), Err(Error::InconsistentState(_))));
}

#[test]
fn swap_adjacent_exchanges_hosts() {
    let mut h = hna(ring(2, &[("u@0.05", "A@0.1", 1), ("v@0.06", "B@0.5", 2), ("t@0.07", "A@0.1", 3)]), 1, 1.0);
    h.swap_adjacent("v@0.06", "u@0.05").unwrap();
    assert_eq!(items_of(&h, "A@0.1"), ["t@0.07", "v@0.06"]);
    assert_eq!(items_of(&h, "B@0.5"), ["u@0.05"]);
    h.swap_adjacent("u@0.05", "v@0.06").unwrap();
    assert_eq!(items_of(&h, "A@0.1"), ["t@0.07", "u@0.05"]);
    assert_eq!(items_of(&h, "B@0.5"), ["v@0.06"]);
    assert!(matches!(h.swap_adjacent("t@0.07", "u@0.05"), Err(Error::NotAdjacent(..))));
    assert_eq!(h.ring().item("u@0.05").unwrap().recency, Recency(1));
}

#[test]
fn insert_goes_to_first_non_full_server() {
    let mut h = hna(ring(1, &[]), 1, 1.0);
    let out = h.insert_item("a@0.05", 0.0).unwrap();
    assert_eq!((out.found, out.search_hops, out.moves), (false, 1, 0));
    assert_eq!(items_of(&h, "A@0.1"), ["a@0.05"]);
    let out = h.insert_item("b@0.06", 0.0).unwrap();
    assert_eq!(out.search_hops, 2);
    assert_eq!(items_of(&h, "B@0.5"), ["b@0.06"]);
    assert_eq!(h.phase().delta, 2);
    let out = h.insert_item("b@0.06", 1.0).unwrap();
    assert!(out.found);
    assert_eq!(h.phase().delta, 2);
    assert_eq!(h.ring().item_count(), 2);
}

#[test]
fn insertion_ends_phase_at_n() {
    let mut h = hna(ring(1, &[]), 1, 1.0);
    for id in ["a@0.05", "b@0.3", "c@0.6"] {
        h.insert_item(id, 0.0).unwrap();
    }
    assert_eq!(h.phase().delta, 0);
    assert_eq!(h.phase().phases, 1);
    assert_eq!(h.ring().capacity(), 2);
}

#[test]
fn fresh_insertions_rank_below_accessed_items() {
    let mut h = hna(ring(3, &[]), 1, 1.0);
    h.insert_item("a@0.05", 0.0).unwrap();
    h.access("a@0.05").unwrap();
    h.insert_item("b@0.06", 0.0).unwrap();
    let rec = |id: &str| h.ring().item(id).unwrap().recency;
    assert!(rec("b@0.06") < rec("a@0.05"));
}

#[test]
fn delete_leaves_hole_when_nothing_is_behind() {
    let mut h = hna(ring(2, &[("a@0.05", "A@0.1", 1)]), 1, 1.0);
    let out = h.delete_item("a@0.05").unwrap();
    assert!(out.found);
    assert_eq!((out.search_hops, out.moves), (1, 0));
    assert!(items_of(&h, "A@0.1").is_empty());
    assert_eq!(h.phase().delta, -1);
}

#[test]
fn delete_pulls_displaced_item_back() {
    let mut h = hna(ring(1, &[("a@0.05", "A@0.1", 1), ("b@0.06", "B@0.5", 2)]), 1, 2.0);
    let out = h.delete_item("a@0.05").unwrap();
    assert_eq!((out.search_hops, out.moves), (1, 1));
    assert_eq!(out.cost, 1.0 + 2.0);
    assert_eq!(items_of(&h, "A@0.1"), ["b@0.06"]);
}

#[test]
fn delete_absent_item_is_a_no_op() {
    let mut h = hna(ring(2, &[("a@0.05", "A@0.1", 1)]), 1, 1.0);
    let out = h.delete_item("q@0.3").unwrap();
    assert!(!out.found);
    assert_eq!(out.cost, 1.0);
    assert_eq!(h.ring().item_count(), 1);
    assert_eq!(h.phase().delta, 0);
}

#[test]
fn unchanged_capacity_is_a_fixed_point() {
    // m = 3, n = 3, alpha = 1 keeps the capacity at 2.
    let mut h = hna(ring(2, &[("a@0.05", "A@0.1", 1), ("b@0.06", "A@0.1", 2), ("c@0.3", "B@0.5", 3)]), 1, 1.0);
    assert_eq!(h.change_capacities().unwrap(), 0);
    assert_eq!(h.ring().capacity(), 2);
    assert_eq!(items_of(&h, "A@0.1"), ["a@0.05", "b@0.06"]);
}

#[test]
fn capacity_decrease_pushes_least_recent_item() {
    let mut h = hna(ring(3, &[("a@0.05", "A@0.1", 2), ("b@0.06", "A@0.1", 1), ("c@0.07", "A@0.1", 3)]), 1, 2.0);
    assert_eq!(h.change_capacities().unwrap(), 1);
    assert_eq!(h.ring().capacity(), 2);
    assert_eq!(items_of(&h, "B@0.5"), ["b@0.06"]);
}

#[test]
fn capacity_increase_pulls_valid_item_back() {
    let mut h = hna(ring(1, &[("a@0.05", "A@0.1", 1), ("b@0.06", "B@0.5", 2)]), 1, 1.0);
    assert_eq!(h.change_capacities().unwrap(), 1);
    assert_eq!(h.ring().capacity(), 2);
    assert_eq!(items_of(&h, "A@0.1"), ["a@0.05", "b@0.06"]);
    assert!(h.ring().servers().all(|s| !s.was_full_prev_phase()));
}

#[test]
fn server_in_empty_region_moves_nothing() {
    let mut h = hna(ring(2, &[("a@0.05", "A@0.1", 1)]), 1, 1.0);
    assert_eq!(h.insert_server("D@0.3").unwrap(), 0);
    assert_eq!(h.ring().server_count(), 4);
}

#[test]
fn new_server_pulls_back_its_items() {
    let mut h = hna(ring(2, &[("p@0.2", "B@0.5", 1), ("q@0.25", "B@0.5", 2)]), 1, 1.0);
    assert_eq!(h.insert_server("D@0.3").unwrap(), 2);
    assert_eq!(items_of(&h, "D@0.3"), ["q@0.25", "p@0.2"]);
    assert!(items_of(&h, "B@0.5").is_empty());
    assert!(matches!(h.insert_server("E@0.3"), Err(Error::PointCollision { .. })));
}

#[test]
fn deleting_empty_server_moves_nothing() {
    let mut h = hna(ring(2, &[("a@0.05", "A@0.1", 1)]), 1, 1.0);
    assert_eq!(h.delete_server("B@0.5").unwrap(), 0);
    assert_eq!(h.ring().server_count(), 2);
}

#[test]
fn deleted_server_hands_items_to_successor() {
    // m = 2, n = 2 after the deletion: capacity 1 + 2 = 3 leaves room on C.
    let mut h = hna(ring(2, &[("x@0.3", "B@0.5", 1), ("y@0.4", "B@0.5", 2)]), 2, 1.0);
    assert_eq!(h.delete_server("B@0.5").unwrap(), 2);
    assert_eq!(items_of(&h, "C@0.8"), ["x@0.3", "y@0.4"]);
    assert_eq!(h.ring().item("x@0.3").unwrap().head, h.ring().server_point("C@0.8").unwrap());
}

#[test]
fn merge_overflow_pushes_least_recent_forward() {
    // B=[x,y], C=[u,v] with capacity 2; after deleting B the capacity
    // becomes ceil(4/2) + 1 = 3, so C overflows by one.
    let mut h = hna(
        ring(2, &[("x@0.3", "B@0.5", 4), ("y@0.4", "B@0.5", 1), ("u@0.6", "C@0.8", 3), ("v@0.7", "C@0.8", 2)]),
        1,
        1.0,
    );
    assert_eq!(h.delete_server("B@0.5").unwrap(), 2 + 1);
    assert_eq!(items_of(&h, "C@0.8"), ["u@0.6", "v@0.7", "x@0.3"]);
    assert_eq!(items_of(&h, "A@0.1"), ["y@0.4"]);
}

#[test]
fn last_server_with_items_cannot_leave() {
    let r = Ring::with_servers(HashBackend::Fixture, &["A@0.1"], 2).unwrap();
    let mut h = hna(r, 1, 1.0);
    h.insert_item("a@0.05", 0.0).unwrap();
    assert!(matches!(h.delete_server("A@0.1"), Err(Error::NoServers)));
}

#[test]
fn validity_follows_the_search_path() {
    // A full, B full, C non-full.
    let h = hna(ring(1, &[("a@0.05", "A@0.1", 1), ("b@0.3", "B@0.5", 2)]), 1, 1.0);
    assert!(h.is_valid_for("a@0.05", "A@0.1").unwrap());
    assert!(h.is_valid_for("a@0.05", "B@0.5").unwrap());
    assert!(h.is_valid_for("a@0.05", "C@0.8").unwrap());
    // Heads behind the non-full C never reach A.
    assert!(!h.is_valid_for("c@0.6", "A@0.1").unwrap());
    assert!(!h.is_valid_for("b@0.3", "A@0.1").unwrap());
}

#[test]
fn rejects_bad_config() {
    let bad = HnaConfig { capacity: CapacityRule::Additive { alpha: 0 }, omega: 1.0 };
    assert!(HashAndAdjust::new(bad, HashBackend::Fixture).is_err());
    let bad = HnaConfig { capacity: CapacityRule::Additive { alpha: 1 }, omega: 0.5 };
    assert!(HashAndAdjust::new(bad, HashBackend::Fixture).is_err());
}
