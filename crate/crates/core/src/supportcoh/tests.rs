use super::*;
use crate::exactla::{q, Q};

fn lines_through_point(n: usize) -> GradedPoset {
    let mut ids = vec!["P2".to_string(), "p".to_string()];
    let mut covers = Vec::new();
    for i in 0..n {
        ids.push(format!("L{i}"));
        covers.push(("P2".to_string(), format!("L{i}")));
        covers.push((format!("L{i}"), "p".to_string()));
    }
    GradedPoset::from_covers(ids, &covers).unwrap()
}

fn codims(l: &GradedPoset) -> Vec<usize> {
    (0..l.len()).map(|x| l.rank(x)).collect()
}

fn dims(s: &GradedSpace) -> Vec<(i32, usize)> {
    s.dims_by_degree().into_iter().collect()
}

#[test]
fn projective_spaces_have_expected_degrees() {
    let l = lines_through_point(3);
    let m = projective_support(2, &l, &codims(&l)).unwrap();
    assert_eq!(dims(m.space(0)), vec![(0, 1), (2, 1), (4, 1)]);
    let line = l.index_of("L0").unwrap();
    assert_eq!(dims(m.space(line)), vec![(2, 1), (4, 1)]);
    let p = l.index_of("p").unwrap();
    assert_eq!(dims(m.space(p)), vec![(4, 1)]);
    assert_eq!(m.weight_offset(p), 4);
    // inclusion of ideals t^2 Q ⊂ t Q[t]/t^3
    assert_eq!(m.cover_map(line, p).unwrap(), &RatMatrix::from_i64_rows(&[&[0], &[1]]));
}

#[test]
fn projective_codims_must_increase() {
    let l = lines_through_point(2);
    let mut c = codims(&l);
    c[l.index_of("p").unwrap()] = 1;
    assert!(matches!(projective_support(2, &l, &c), Err(Error::CodimMonotonicityViolation(_))));
}

#[test]
fn projective_products_multiply_powers() {
    let l = lines_through_point(2);
    let m = projective_support(2, &l, &codims(&l)).unwrap();
    let (a, b, p) = (l.index_of("L0").unwrap(), l.index_of("L1").unwrap(), l.index_of("p").unwrap());
    // t · t = t^2, the class of the point
    assert_eq!(m.multiply(a, &SparseVec::unit(0), b, &SparseVec::unit(0), p), SparseVec::unit(0));
    // t^2 · t = 0 in P^2
    assert!(m.multiply(a, &SparseVec::unit(1), b, &SparseVec::unit(0), p).is_zero());
}

#[test]
fn affine_thom_classes() {
    let l = lines_through_point(2);
    let m = affine_support(2, &l).unwrap();
    assert_eq!(dims(m.space(0)), vec![(0, 1)]);
    let (a, b, p) = (l.index_of("L0").unwrap(), l.index_of("L1").unwrap(), l.index_of("p").unwrap());
    assert_eq!(dims(m.space(a)), vec![(2, 1)]);
    assert_eq!(m.multiply(a, &SparseVec::unit(0), b, &SparseVec::unit(0), p), SparseVec::unit(0));
    assert!(m.cover_maps().values().all(|g| g.is_zero()));
}

#[test]
fn diagonal_of_p1_squared() {
    let m = diagonal_support(&GradedRing::projective(1), &Graph::complete(2)).unwrap();
    let l = m.poset();
    assert_eq!(l.len(), 2);
    assert_eq!(dims(m.space(0)), vec![(0, 1), (2, 2), (4, 1)]);
    assert_eq!(dims(m.space(1)), vec![(2, 1), (4, 1)]);
    // g(1) is the diagonal class 1⊗t + t⊗1
    let g = m.cover_map(0, 1).unwrap();
    let img = g.mul_vec(&SparseVec::unit(0));
    let labels = &m.space(0).labels;
    let got: Vec<(String, Q)> = img.iter().map(|(i, c)| (labels[*i].clone(), c.clone())).collect();
    assert_eq!(got, vec![("1⊗t^1".to_string(), q(1)), ("t^1⊗1".to_string(), q(1))]);
    // the point class of the diagonal goes to the point of P^1 x P^1
    let img = g.mul_vec(&SparseVec::unit(1));
    assert_eq!(img.iter().map(|(i, c)| (labels[*i].as_str(), c.clone())).collect::<Vec<_>>(), vec![("t^1⊗t^1", q(1))]);
}

#[test]
fn gysin_adjunction_for_elliptic_triangle() {
    let ring = GradedRing::elliptic();
    let g = Graph::complete(3);
    let m = diagonal_support(&ring, &g).unwrap();
    let geo = diagonal_geometry(&ring, &g).unwrap();
    for ((y, x), res) in &geo.restrictions {
        let gy = m.cover_map(*y, *x).unwrap();
        let (px, py) = (&geo.pairings[*x], &geo.pairings[*y]);
        for a in 0..gy.ncols() {
            for b in 0..gy.nrows() {
                let lhs = gy.column(a).dot(&py.mul_vec(&SparseVec::unit(b)));
                let rhs = SparseVec::unit(a).dot(&px.mul_vec(res.column(b)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn euler_characteristic_is_a_power() {
    for (ring, chi) in [(GradedRing::projective(1), 2), (GradedRing::projective(2), 3), (GradedRing::elliptic(), 0)] {
        let m = diagonal_support(&ring, &Graph::named("path3").unwrap()).unwrap();
        for x in 0..m.poset().len() {
            let k = partition_blocks(m.poset().id(x)).len() as u32;
            assert_eq!(m.euler_characteristic(x), i64::pow(chi, k));
        }
    }
}

#[test]
fn edgeless_graph_gives_one_space() {
    let m = diagonal_support(&GradedRing::projective(1), &Graph::edgeless(2)).unwrap();
    assert_eq!(m.poset().len(), 1);
    assert_eq!(m.space(0).dim(), 4);
    assert!(m.cover_maps().is_empty());
}

#[test]
fn rings_without_pairing_are_rejected() {
    let r = GradedRing::new("noPD", vec!["1".into(), "x".into()], vec![0, 2], 0, &[(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))], None)
        .unwrap();
    assert_eq!(diagonal_support(&r, &Graph::complete(2)).unwrap_err(), Error::NoPairing);
    let odd = GradedRing::new(
        "S1",
        vec!["1".into(), "x".into()],
        vec![0, 1],
        0,
        &[(0, 0, 0, q(1)), (0, 1, 1, q(1)), (1, 0, 1, q(1))],
        Some(1),
    )
    .unwrap();
    assert_eq!(diagonal_support(&odd, &Graph::complete(2)).unwrap_err(), Error::OddTopDegree);
}

#[test]
fn ring_json_round_trip() {
    let r = GradedRing::elliptic();
    assert_eq!(GradedRing::from_json(&r.to_json()).unwrap(), r);
}

#[test]
fn module_json_round_trip() {
    let l = lines_through_point(3);
    let m = projective_support(2, &l, &codims(&l)).unwrap();
    assert_eq!(custom_support(&m.to_json()).unwrap(), m);
    let d = diagonal_support(&GradedRing::elliptic(), &Graph::complete(3)).unwrap();
    assert_eq!(custom_support(&d.to_json()).unwrap(), d);
}

#[test]
fn degree_shifting_cover_map_is_rejected() {
    let l = lines_through_point(1);
    let m = projective_support(2, &l, &codims(&l)).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
    v["cover_maps"]["P2<:L0"] = serde_json::json!({"2->4": [["1"]], "4": [["1"]]});
    match custom_support(&v.to_string()) {
        Err(Error::InvariantViolation(msg)) => assert!(msg.contains("degree preservation"), "{msg}"),
        other => panic!("expected InvariantViolation, got {other:?}"),
    }
}

#[test]
fn broken_square_is_named() {
    let l = lines_through_point(2);
    let m = projective_support(2, &l, &codims(&l)).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&m.to_json()).unwrap();
    v["cover_maps"]["L1<:p"] = serde_json::json!({"4": [["2"]]});
    match custom_support(&v.to_string()) {
        Err(Error::InvariantViolation(msg)) => assert!(msg.contains("square commutation"), "{msg}"),
        other => panic!("expected InvariantViolation, got {other:?}"),
    }
}

#[test]
fn cubical_pullback_of_k2_diagonal() {
    let m = diagonal_support(&GradedRing::projective(1), &Graph::complete(2)).unwrap();
    let ql = crate::poset::cubical_lattice(m.poset()).unwrap();
    let c = m.pullback_to_cubical(&ql).unwrap();
    assert_eq!(c.poset().len(), 2);
    assert_eq!(c.cover_map(0, 1), m.cover_map(0, 1));
}
