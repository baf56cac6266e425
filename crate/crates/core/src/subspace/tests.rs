use super::*;
use crate::exactla::q;
use crate::graph::Graph;
use crate::mvss::poincare_polynomial;
use crate::poset::partition_lattice;

fn point(c: &[i64]) -> Vec<Q> {
    c.iter().map(|x| q(*x)).collect()
}

/// The line `a·x + b·y = c` in the plane.
fn line(a: i64, b: i64, c: i64) -> AffineSubspace {
    let p = if b != 0 { vec![q(0), Q::new(c.into(), b.into())] } else { vec![Q::new(c.into(), a.into()), q(0)] };
    AffineSubspace { basis_point: p, directions: vec![vec![q(-b), q(a)]] }
}

/// Regions of a real line arrangement from its planar graph: each line is cut
/// into one more edge than it has distinct crossing points, and with a vertex
/// at infinity Euler's formula gives `F = E - V + 1`.
fn euler_regions(lines: &[(i64, i64, i64)]) -> usize {
    let mut vertices: Vec<(Q, Q)> = Vec::new();
    let mut on_line: Vec<Vec<(Q, Q)>> = vec![Vec::new(); lines.len()];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = lines[i];
            let (a2, b2, c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det == 0 {
                continue;
            }
            let x = Q::new((c1 * b2 - c2 * b1).into(), det.into());
            let y = Q::new((a1 * c2 - a2 * c1).into(), det.into());
            let v = (x, y);
            if !vertices.contains(&v) {
                vertices.push(v.clone());
            }
            for k in [i, j] {
                if !on_line[k].contains(&v) {
                    on_line[k].push(v.clone());
                }
            }
        }
    }
    let edges: usize = on_line.iter().map(|v| v.len() + 1).sum();
    edges - vertices.len() + 1
}

fn regions_of(lines: &[(i64, i64, i64)]) -> u64 {
    let subs: Vec<AffineSubspace> = lines.iter().map(|(a, b, c)| line(*a, *b, *c)).collect();
    zaslavsky_regions(&from_coordinates(2, &subs).unwrap().poset).unwrap()
}

#[test]
fn one_hyperplane_has_two_sides() {
    let h = AffineSubspace { basis_point: point(&[0]), directions: vec![] };
    assert_eq!(zaslavsky_regions(&from_coordinates(1, &[h]).unwrap().poset).unwrap(), 2);
}

#[test]
fn line_arrangements_match_the_planar_count() {
    let cases: Vec<Vec<(i64, i64, i64)>> = vec![
        vec![(1, 0, 0), (0, 1, 0)],
        vec![(1, 0, 0), (0, 1, 0), (1, 1, 1)],
        vec![(1, 0, 0), (0, 1, 0), (1, 1, 0)],
        vec![(1, 0, 0), (1, 0, 1), (0, 1, 0), (1, 1, 3)],
        vec![(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, -1, 2), (2, 1, 5)],
        vec![(1, 2, 3), (3, -1, 1), (1, 1, -2), (2, 5, 1), (4, 1, 7)],
    ];
    assert_eq!(regions_of(&cases[0]), 4);
    assert_eq!(regions_of(&cases[1]), 7);
    for c in &cases {
        assert_eq!(regions_of(c) as usize, euler_regions(c), "{c:?}");
    }
}

#[test]
fn braid_arrangement_model() {
    let arr = SubspaceArrangement::from_poset(3, partition_lattice(&Graph::complete(3))).unwrap();
    let e1 = formality_model(&arr).unwrap();
    for c in e1.verify() {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    let h = cohomology(&e1).unwrap();
    // (1+t)(1+2t)
    assert_eq!(poincare_polynomial(&h), vec![1, 3, 2]);
    assert_eq!(poincare_polynomial(&complex_hyperplane_ring(&arr).unwrap()), vec![1, 3, 2]);
}

#[test]
fn single_hyperplane_is_a_circle() {
    let arr = SubspaceArrangement::from_poset(1, GradedPoset::boolean(1)).unwrap();
    assert_eq!(poincare_polynomial(&cohomology(&formality_model(&arr).unwrap()).unwrap()), vec![1, 1]);
}

#[test]
fn boolean_rings_are_exterior_algebras() {
    for n in 1..=4 {
        let arr = SubspaceArrangement::from_poset(n, GradedPoset::boolean(n)).unwrap();
        let h = complex_hyperplane_ring(&arr).unwrap();
        let binom: Vec<i64> = (0..=n).map(|k| (0..k).fold(1, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)).collect();
        assert_eq!(poincare_polynomial(&h), binom);
    }
}

#[test]
fn lines_through_the_origin_of_c2() {
    for n in 2..=5 {
        let subs: Vec<AffineSubspace> =
            (0..n).map(|i| AffineSubspace { basis_point: point(&[0, 0]), directions: vec![point(&[1, i as i64])] }).collect();
        let arr = from_coordinates(2, &subs).unwrap();
        assert!(arr.is_hyperplane_arrangement());
        let h = complex_hyperplane_ring(&arr).unwrap();
        assert_eq!(poincare_polynomial(&h), vec![1, n as i64, n as i64 - 1]);
    }
}

#[test]
fn two_lines_in_c3() {
    // L1 ∪ L2 through 0: Alexander duality in S⁶ against S² ∨ S² ∨ S¹ gives
    // b3 = 2 and b4 = 1
    let subs = vec![
        AffineSubspace { basis_point: point(&[0, 0, 0]), directions: vec![point(&[1, 0, 0])] },
        AffineSubspace { basis_point: point(&[0, 0, 0]), directions: vec![point(&[0, 1, 0])] },
    ];
    let arr = from_coordinates(3, &subs).unwrap();
    assert_eq!(arr.codims.iter().copied().max(), Some(3));
    let e1 = formality_model(&arr).unwrap();
    for c in e1.verify() {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    assert_eq!(cohomology(&e1).unwrap().betti, vec![1, 0, 0, 2, 1]);
    assert!(matches!(complex_hyperplane_ring(&arr), Err(Error::AtomCodimViolation(_))));
}

#[test]
fn whitney_numbers_alternate() {
    for l in [GradedPoset::boolean(4), partition_lattice(&Graph::complete(4)), partition_lattice(&Graph::cycle(4))] {
        let w = whitney_numbers(&l);
        for (k, c) in w.iter().enumerate() {
            assert!(*c != 0 && (*c > 0) == (k % 2 == 0), "{w:?}");
        }
    }
}

#[test]
fn json_inputs() {
    let text = r#"{"ambient_dim": 2, "subspaces": [
        {"basis_point": ["0", "0"], "directions": [["1", "0"]]},
        {"basis_point": ["0", "1/2"], "directions": [["1", "0"]]},
        {"basis_point": ["0", "0"], "directions": [["0", "1"]]}]}"#;
    let arr = SubspaceArrangement::from_json(text).unwrap();
    // two parallel lines crossed by a third
    assert_eq!(arr.poset.len(), 6);
    assert_eq!(zaslavsky_regions(&arr.poset).unwrap(), 6);
    let poset: Value = serde_json::from_str(&arr.poset.to_json()).unwrap();
    let same = SubspaceArrangement::from_json(&serde_json::json!({"ambient_dim": 2, "poset": poset}).to_string()).unwrap();
    assert_eq!(same, arr);
    let dup = r#"{"ambient_dim": 1, "subspaces": [{"basis_point": ["0"]}, {"basis_point": ["0"]}]}"#;
    assert!(matches!(SubspaceArrangement::from_json(dup), Err(Error::Schema(_))));
}
