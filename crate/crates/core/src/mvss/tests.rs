use super::*;
use crate::examples::{braid, lines_p2, quadric_p3};
use crate::exactla::{q, rank};
use crate::graph::Graph;
use crate::oscomplex::os_algebra;
use crate::poset::GradedPoset;
use crate::supportcoh::{diagonal_support, projective_support, GradedRing};

fn lattice_e1(s: &SupportModule) -> E1Algebra {
    build_e1_lattice(&os_algebra(s.poset()).unwrap(), s).unwrap()
}

fn nonzero(ring: &CohomologyRing) -> Vec<((i32, i32), usize)> {
    ring.nonzero_dims().into_iter().collect()
}

#[test]
fn trivial_poset_gives_ambient_cohomology() {
    let l = GradedPoset::boolean(0);
    let s = projective_support(2, &l, &[0]).unwrap();
    let e1 = lattice_e1(&s);
    assert_eq!(e1.dim(), 3);
    assert!((0..3).all(|i| e1.dga().d_basis(i).is_zero()));
    let h = cohomology(&e1).unwrap();
    assert_eq!(h.betti, vec![1, 0, 1, 0, 1]);
}

#[test]
fn lines_through_a_point() {
    for n in 2..=8 {
        let e1 = lattice_e1(&lines_p2(n).unwrap());
        assert_eq!(e1.dims()[&(-2, 4)], n - 1);
        assert_eq!(e1.dims()[&(-1, 2)], n);
        let h = cohomology(&e1).unwrap();
        assert_eq!(nonzero(&h), vec![((-1, 2), n - 1), ((0, 0), 1)]);
        assert_eq!(poincare_polynomial(&h), vec![1, n as i64 - 1]);
    }
}

#[test]
fn lines_e1_verifies_and_is_formal() {
    let e1 = lattice_e1(&lines_p2(4).unwrap());
    for c in e1.verify() {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    let h = cohomology(&e1).unwrap();
    assert!(h.check_section_independence(&e1, 0).passed);
    assert!(h.check_section_independence(&e1, 5).passed);
    assert_eq!(formality_report(&e1, &h).verdict, "formal by section");
}

#[test]
fn quadric_tangent_and_transversal_lines() {
    let s = quadric_p3().unwrap();
    let e1 = build_e1_cubical(&s).unwrap();
    let row: Vec<usize> = (-3..=0).map(|p| e1.dims()[&(p, 6)]).collect();
    assert_eq!(row, vec![1, 4, 3, 1]);
    for c in e1.verify() {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    let f = e1.d1_block(-2, 6);
    assert_eq!(rank(&f), 2);
    // columns (c, b_t, b_tau, a) in basis order; rows (Lt, Ltau, Q)
    let printed = [[0, -1, 1], [-1, 0, 1], [-1, 1, 0]];
    let cols = [3, 1, 0];
    for (k, col) in cols.iter().enumerate() {
        let got: Vec<_> = (0..3).map(|r| f.get(r, *col)).collect();
        let want: Vec<_> = printed[k].iter().map(|v| q(*v)).collect();
        assert_eq!(got, want, "column {col}");
    }
    let h = cohomology(&e1).unwrap();
    assert_eq!(nonzero(&h), vec![((-2, 6), 1), ((-1, 4), 3), ((0, 0), 1)]);
    assert_eq!(h.betti, vec![1, 0, 0, 3, 1]);
    assert_eq!(poincare_polynomial(&h), vec![1, 0, 0, 3, 1]);
    assert_eq!(formality_report(&e1, &h).verdict, "formal by section");
}

#[test]
fn braid_arrangement_poincare() {
    let e1 = lattice_e1(&braid(3).unwrap());
    let h = cohomology(&e1).unwrap();
    assert_eq!(poincare_polynomial(&h), vec![1, 3, 2]);
    assert!(formality_report(&e1, &h).formal_by_section);
    assert!(h.check_section_independence(&e1, 1).passed);
}

#[test]
fn cubical_and_lattice_routes_agree_for_k2() {
    let s = diagonal_support(&GradedRing::projective(1), &Graph::complete(2)).unwrap();
    let a = lattice_e1(&s);
    let b = build_e1_cubical(&s).unwrap();
    assert_eq!(a.dims(), b.dims());
    assert_eq!(cohomology(&a).unwrap().betti, cohomology(&b).unwrap().betti);
}

#[test]
fn euler_characteristic_survives() {
    for s in [lines_p2(3).unwrap(), quadric_p3().unwrap()] {
        let e1 = lattice_e1(&s);
        assert_eq!(e1.euler_characteristic(), cohomology(&e1).unwrap().euler_characteristic());
    }
}

#[test]
fn swapping_two_lines_acts_on_e1() {
    let s = lines_p2(3).unwrap();
    let e1 = lattice_e1(&s);
    let l = e1.poset();
    let atom_perm = vec![1, 0, 2];
    let elem_perm = l.map_from_atom_permutation(&atom_perm).unwrap();
    let maps: Vec<RatMatrix> = (0..l.len()).map(|x| RatMatrix::identity(s.space(x).dim())).collect();
    let a = e1.group_action(&elem_perm, &atom_perm, &maps).unwrap();
    assert_eq!(a.mul(&a), RatMatrix::identity(e1.dim()));
    let id: Vec<usize> = (0..l.len()).collect();
    let a0 = e1.group_action(&id, &[0, 1, 2], &maps).unwrap();
    assert_eq!(a0, RatMatrix::identity(e1.dim()));
    // scaling one support map by 2 breaks multiplicativity
    let mut bad = maps.clone();
    bad[0] = bad[0].scaled(&q(2));
    assert!(matches!(e1.group_action(&elem_perm, &atom_perm, &bad), Err(Error::NotAutomorphism(_))));
}

#[test]
fn injected_sign_error_breaks_the_page() {
    let mut e1 = lattice_e1(&lines_p2(3).unwrap());
    let i = (0..e1.dim()).find(|i| !e1.dga().d_basis(*i).is_zero()).unwrap();
    let v = e1.dga().d_basis(i).neg();
    e1.dga_mut().set_differential(i, v);
    let checks = e1.verify();
    assert!(!checks.iter().find(|c| c.name == "Leibniz").unwrap().passed);
}

#[test]
fn table_layout() {
    let empty = render_e_table(&BTreeMap::new());
    assert_eq!(empty, "--+\n0   p\\q\n");
    let page: BTreeMap<(i32, i32), usize> = [((0, 0), 1), ((-1, 2), 3)].into_iter().collect();
    let t = render_e_table(&page);
    assert_eq!(t, " 3   0 | 2\n 0   0 | 1\n 0   1 | 0\n-------+\n-1   0   p\\q\n");
}
