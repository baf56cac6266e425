use super::*;
use crate::graph::Graph;
use crate::poset::{intersection_poset, partition_lattice};

fn lines_through_point(n: usize) -> GradedPoset {
    let mut s = BTreeMap::new();
    s.insert(vec![], "P2".to_string());
    for m in 1u32..1 << n {
        let mem: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
        let lab = if mem.len() == 1 { format!("L{}", mem[0]) } else { "p".into() };
        s.insert(mem, lab);
    }
    intersection_poset(n, &s).unwrap()
}

#[test]
fn koszul_signs() {
    assert!(koszul_partial(0).is_empty());
    assert_eq!(koszul_partial(0b1), vec![(0, 1)]);
    // dν_{12} -> dν_2 - dν_1
    assert_eq!(koszul_partial(0b11), vec![(0b10, 1), (0b01, -1)]);
    assert_eq!(wedge_sign(0b10, 0b01), Some(-1));
    assert_eq!(wedge_sign(0b01, 0b10), Some(1));
    assert_eq!(wedge_sign(0b11, 0b01), None);
}

#[test]
fn boolean_is_grassmann() {
    for n in 1..=4 {
        let b = GradedPoset::boolean(n);
        let os = os_algebra(&b).unwrap();
        assert!((0..b.len()).all(|x| os.dim(x) == 1));
        let direct = OSAlgebra::grassmann(&b).unwrap();
        assert_eq!(os.structure_maps(), direct.structure_maps());
        assert_eq!(os.products(), direct.products());
    }
    let b2 = GradedPoset::boolean(2);
    let ac = atomic_complex(&b2).unwrap();
    let top = b2.index_of("{0,1}").unwrap();
    assert_eq!(ac.pieces[top].monomials.values().map(|v| v.len()).sum::<usize>(), 1);
    assert!(ac.pieces[top].inner_differential(2).is_zero());
}

#[test]
fn braid_three_atomic_complex() {
    let pi3 = partition_lattice(&Graph::complete(3));
    let ac = atomic_complex(&pi3).unwrap();
    let top = pi3.index_of("{0,1,2}").unwrap();
    let piece = &ac.pieces[top];
    assert_eq!(piece.monomials[&2].len(), 3);
    assert_eq!(piece.monomials[&3].len(), 1);
    // the triple maps to the alternating sum of the pairs
    let d = piece.inner_differential(3);
    let col: Vec<i64> = d.to_dense_rows().iter().map(|r| crate::exactla::rational::q_to_i64(&r[0]).unwrap()).collect();
    assert_eq!(col, vec![1, -1, 1]);
    assert_eq!(piece.cohomology[&2], 2);
    assert_eq!(piece.cohomology[&3], 0);
}

#[test]
fn braid_three_os_and_arnold() {
    let pi3 = partition_lattice(&Graph::complete(3));
    let os = os_algebra(&pi3).unwrap();
    assert_eq!(os.dims_by_rank(), vec![1, 3, 2]);
    let top = pi3.index_of("{0,1,2}").unwrap();
    // atoms in order: e01, e02, e12.  Δ01Δ12 + Δ12Δ20 + Δ20Δ01 with Δ20 = Δ02
    let (a01, a02, a12) = (0usize, 1usize, 2usize);
    let mono = |x: usize, y: usize| -> (Mask, Q) { (1 << x | 1 << y, q(wedge_sign(1 << x, 1 << y).unwrap() as i64)) };
    let rel = vec![mono(a01, a12), mono(a12, a02), mono(a02, a01)];
    assert!(os.normal_form(top, &rel).unwrap().is_zero());
    for (k, m) in os.component(top).basis.iter().enumerate() {
        assert_eq!(os.normal_form(top, &[(*m, q(1))]).unwrap(), SparseVec::unit(k));
    }
    let atom = pi3.atoms()[0];
    assert!(matches!(os.normal_form(atom, &[(0b11, q(1))]), Err(Error::LabelMismatch(_))));
}

#[test]
fn lines_through_point_top_is_kernel_of_sum() {
    for n in 2..=6 {
        let l = lines_through_point(n);
        let os = os_algebra(&l).unwrap();
        let p = l.index_of("p").unwrap();
        assert_eq!(os.dim(p), n - 1);
        // ∂ : OS_p -> ⊕ OS_{L_i} is injective with image inside the kernel of the sum
        let mut image: Vec<SparseVec> = vec![SparseVec::new(); os.dim(p)];
        for (k, a) in l.atoms().iter().enumerate() {
            let m = os.structure_map(*a, p).unwrap();
            for (j, col) in m.columns().iter().enumerate() {
                image[j].add_scaled(&SparseVec::single(k, col.get(0)), &q(1));
            }
        }
        let sum: Vec<Q> = image.iter().map(|v| v.iter().fold(q(0), |acc, (_, c)| acc + c)).collect();
        assert!(sum.iter().all(|s| *s == q(0)));
        assert_eq!(crate::dga::span_rank(&image), n - 1);
    }
}

#[test]
fn verification_passes_and_detects_faults() {
    let cases = vec![
        GradedPoset::boolean(3),
        partition_lattice(&Graph::complete(3)),
        partition_lattice(&Graph::complete(4)),
        lines_through_point(4),
    ];
    for l in &cases {
        let os = os_algebra(l).unwrap();
        let rep = verify_chain_algebra(&os);
        assert!(rep.passed(), "{:?}", rep.checks);
    }
    let pi3 = partition_lattice(&Graph::complete(3));
    let mut os = os_algebra(&pi3).unwrap();
    let top = pi3.index_of("{0,1,2}").unwrap();
    let atom = pi3.atoms()[0];
    let m = os.structure_map_mut(atom, top).unwrap();
    *m = m.negated();
    let rep = verify_chain_algebra(&os);
    assert!(!rep.check("∂²=0").unwrap().passed);
}

#[test]
fn non_geometric_input_is_rejected() {
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
    assert!(matches!(os_algebra(&p), Err(Error::NotLocallyGeometric(_))));
}

#[test]
fn json_export_is_stable() {
    let os = os_algebra(&partition_lattice(&Graph::complete(3))).unwrap();
    let a = os.to_json();
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["elements"].as_array().unwrap().len(), 5);
    assert_eq!(a, os_algebra(&partition_lattice(&Graph::complete(3))).unwrap().to_json());
}
