use std::collections::BTreeMap;

use super::*;
use crate::graph::Graph;

fn strata(entries: &[(&[usize], &str)]) -> BTreeMap<Vec<usize>, String> {
    entries.iter().map(|(k, v)| (k.to_vec(), v.to_string())).collect()
}

/// Lines, planes: l, P1, P2 in C^3 where l meets each plane in the point p
/// and the planes meet in a line through p.
fn plane_plane_line() -> BTreeMap<Vec<usize>, String> {
    strata(&[
        (&[], "C3"),
        (&[0], "l"),
        (&[1], "P1"),
        (&[2], "P2"),
        (&[1, 2], "l12"),
        (&[0, 1], "p"),
        (&[0, 2], "p"),
        (&[0, 1, 2], "p"),
    ])
}

#[test]
fn boolean_queries() {
    let b2 = GradedPoset::boolean(2);
    assert!(!b2.leq_ids("{0}", "{1}").unwrap());
    assert!(b2.leq_ids("{}", "{0,1}").unwrap());
    assert!(b2.leq_ids("{1}", "{1}").unwrap());
    assert!(matches!(b2.leq_ids("{7}", "{1}"), Err(Error::UnknownElement(_))));
    let b3 = GradedPoset::boolean(3);
    assert_eq!(b3.min_upper_bounds_ids(&["{0}", "{1}"]).unwrap(), vec!["{0,1}"]);
    assert_eq!(b3.min_upper_bounds_ids(&[]).unwrap(), vec!["{}"]);
    assert_eq!(b3.min_upper_bounds_ids(&["{0,2}"]).unwrap(), vec!["{0,2}"]);
    assert_eq!(b3.moebius_id("{0,1,2}").unwrap(), -1);
    assert_eq!(b3.moebius_id("{}").unwrap(), 1);
    assert!(b3.is_locally_geometric());
}

#[test]
fn triangle_partition_lattice() {
    let p = partition_lattice(&Graph::complete(3));
    assert_eq!(p.len(), 5);
    let ranks: Vec<usize> = (0..5).map(|x| p.rank(x)).collect();
    assert_eq!(ranks, vec![0, 1, 1, 1, 2]);
    assert_eq!(p.moebius_id("{0,1,2}").unwrap(), 2);
    assert!(p.is_locally_geometric());
}

#[test]
fn path_partition_lattice_drops_disconnected_block() {
    let p = partition_lattice(&Graph::path(3));
    let mut ids: Vec<&str> = p.ids().iter().map(|s| s.as_str()).collect();
    ids.sort();
    assert_eq!(ids, vec!["{0,1,2}", "{0,1}{2}", "{0}{1,2}", "{0}{1}{2}"]);
    assert_eq!(partition_lattice(&Graph::edgeless(3)).len(), 1);
}

#[test]
fn lines_through_a_point() {
    for n in 2..6 {
        let mut s = BTreeMap::new();
        s.insert(vec![], "P2".to_string());
        for mask in 1u32..1 << n {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let label = if members.len() == 1 { format!("L{}", members[0]) } else { "p".to_string() };
            s.insert(members, label);
        }
        let p = intersection_poset(n, &s).unwrap();
        assert_eq!(p.len(), n + 2);
        assert_eq!(p.atoms().len(), n);
        assert_eq!(p.max_rank(), 2);
        assert_eq!(p.maximal_elements().len(), 1);
        assert_eq!(p.moebius_id("p").unwrap(), n as i64 - 1);
    }
}

#[test]
fn plane_plane_line_has_no_grading() {
    assert!(matches!(intersection_poset(3, &plane_plane_line()), Err(Error::NotGradable(_))));
}

#[test]
fn duplicated_point_variant_is_not_geometric() {
    let ids = ["0", "l", "P1", "P2", "p'", "l12", "p"].map(String::from).to_vec();
    let covers: Vec<(String, String)> = [
        ("0", "l"),
        ("0", "P1"),
        ("0", "P2"),
        ("l", "p'"),
        ("P1", "p'"),
        ("P1", "l12"),
        ("P2", "l12"),
        ("p'", "p"),
        ("l12", "p"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    let p = GradedPoset::from_covers(ids, &covers).unwrap();
    assert_eq!(p.rank(p.index_of("p").unwrap()), 3);
    assert!(!p.is_locally_geometric());
}

#[test]
fn cubical_lattices() {
    let pi3 = partition_lattice(&Graph::complete(3));
    let q = cubical_lattice(&pi3).unwrap();
    assert_eq!(q.poset.len(), 8);
    let ranks: Vec<usize> = (0..8).map(|x| q.poset.rank(x)).collect();
    assert_eq!(ranks, vec![0, 1, 1, 1, 2, 2, 2, 3]);
    assert_eq!(q.poset.moebius(7), -1);
    assert!(q.poset.is_locally_geometric());
    let top = pi3.index_of("{0,1,2}").unwrap();
    assert_eq!(q.vertex[7], top);

    let b3 = GradedPoset::boolean(3);
    let qb = cubical_lattice(&b3).unwrap();
    assert_eq!(qb.poset.len(), 8);
    assert_eq!(qb.poset.covers().len(), b3.covers().len());

    let chain = GradedPoset::boolean(1);
    assert_eq!(cubical_lattice(&chain).unwrap().poset.len(), 2);
}

#[test]
fn non_atomic_poset_is_rejected() {
    // 0 < a < b: b sits above a single atom but is not its join
    let ids = ["0", "a", "b"].map(String::from).to_vec();
    let covers = vec![("0".to_string(), "a".to_string()), ("a".to_string(), "b".to_string())];
    let p = GradedPoset::from_covers(ids, &covers).unwrap();
    assert!(matches!(cubical_lattice(&p), Err(Error::NotAtomic(_))));
}

#[test]
fn json_round_trip_and_validation() {
    let p = partition_lattice(&Graph::complete(3));
    let text = p.to_json();
    assert_eq!(GradedPoset::from_json(&text).unwrap(), p);
    let bad = text.replace("\"rank\": 2", "\"rank\": 3");
    assert!(matches!(GradedPoset::from_json(&bad), Err(Error::Schema(_))));
    assert!(matches!(GradedPoset::from_json("{"), Err(Error::Schema(_))));
}

#[test]
fn complete_graph_lattice_sizes() {
    for n in 2..=5 {
        let p = partition_lattice(&Graph::complete(n));
        assert_eq!(p.max_rank(), n - 1);
        assert_eq!(p.atoms().len(), n * (n - 1) / 2);
    }
    assert_eq!(partition_lattice(&Graph::complete(4)).len(), 15);
}
