use proptest::prelude::*;

use arrkit::chromatic::{automorphism_action, chromatic_model, e1_dims_by_label, presentation_dims};
use arrkit::exactla::{image_basis, kernel_basis, pairing_adjoint, q, rank, RatMatrix, SparseVec};
use arrkit::graph::Graph;
use arrkit::mobius_inv::{hat, ideal_inclusion, truncated_polynomial, truncation, verify_hat, CubicalDiagram};
use arrkit::mvss::{cohomology, poincare_polynomial};
use arrkit::oscomplex::{os_algebra, verify_chain_algebra};
use arrkit::poset::{cubical_lattice, partition_lattice, GradedPoset};
use arrkit::subspace::{complex_hyperplane_ring, formality_model, from_coordinates, whitney_numbers, AffineSubspace};
use arrkit::supportcoh::{diagonal_geometry, diagonal_support, projective_support, GradedRing};

fn small_matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
            let rows: Vec<&[i64]> = v.chunks(c).collect();
            RatMatrix::from_i64_rows(&rows)
        })
    })
}

/// Graph on `n` vertices from a bitmask over the pairs `a < b`.
fn graph(min_vertices: usize, max_vertices: usize) -> impl Strategy<Value = Graph> {
    (min_vertices..=max_vertices).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (0u32..1 << m).prop_map(move |mask| {
            let edges: Vec<(usize, usize)> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn ring() -> impl Strategy<Value = GradedRing> {
    prop_oneof![Just(GradedRing::projective(1)), Just(GradedRing::projective(2)), Just(GradedRing::elliptic())]
}

fn nonzero_entry() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

fn column_space_contains(m: &RatMatrix, v: &SparseVec) -> bool {
    let mut cols = m.columns().to_vec();
    cols.push(v.clone());
    rank(&RatMatrix::from_columns(m.nrows(), cols)) == rank(m)
}

/// Binomial coefficients by Pascal's rule.
fn binomials(n: usize) -> Vec<i64> {
    let mut row = vec![1i64];
    for _ in 0..n {
        let mut next = vec![1i64; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

fn moebius_sums_vanish(l: &GradedPoset) -> bool {
    (0..l.len()).filter(|x| *x != l.bottom()).all(|x| (0..l.len()).filter(|y| l.leq(*y, x)).map(|y| l.moebius(y)).sum::<i64>() == 0)
}

fn all_pass(checks: &[arrkit::dga::Check]) -> Result<(), TestCaseError> {
    for c in checks {
        prop_assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(m in small_matrix()) {
        let ker = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + ker.len(), m.ncols());
        for v in &ker {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        let im = image_basis(&m);
        prop_assert_eq!(im.len(), rank(&m));
        for v in &im {
            prop_assert!(column_space_contains(&m, v));
        }
    }

    #[test]
    fn adjoint_is_an_involution(
        d1 in proptest::collection::vec(nonzero_entry(), 3),
        d2 in proptest::collection::vec(nonzero_entry(), 2),
        off in -2i64..=2,
        m in proptest::collection::vec(-3i64..=3, 6),
    ) {
        // symmetric pairings
        let p_src = RatMatrix::from_i64_rows(&[&[d1[0], off, 0], &[off, d1[1], 0], &[0, 0, d1[2]]]);
        let p_dst = RatMatrix::from_i64_rows(&[&[d2[0], off], &[off, d2[1]]]);
        prop_assume!(p_src.inverse().is_some() && p_dst.inverse().is_some());
        let f = RatMatrix::from_i64_rows(&[&m[0..2], &m[2..4], &m[4..6]]);
        let adj = pairing_adjoint(&f, &p_src, &p_dst).unwrap();
        // ⟨f! a, b⟩_dst = ⟨a, f b⟩_src
        prop_assert_eq!(adj.transpose().mul(&p_dst), p_src.mul(&f));
        prop_assert_eq!(pairing_adjoint(&adj, &p_dst, &p_src).unwrap(), f);
    }

    #[test]
    fn graph_lattices_are_well_behaved(g in graph(2, 5)) {
        let l = partition_lattice(&g);
        prop_assert!(moebius_sums_vanish(&l));
        prop_assert!(l.is_locally_geometric());
        let w = whitney_numbers(&l);
        for (k, c) in w.iter().enumerate() {
            prop_assert!(*c != 0 && (*c > 0) == (k % 2 == 0), "{:?}", w);
        }
        let os = os_algebra(&l).unwrap();
        for x in 0..l.len() {
            prop_assert_eq!(os.dim(x) as i64, l.moebius(x).abs());
        }
        let report = verify_chain_algebra(&os);
        all_pass(&report.checks)?;
    }

    #[test]
    fn cubical_lattices_are_locally_geometric(g in graph(2, 4)) {
        let q_lat = cubical_lattice(&partition_lattice(&g)).unwrap();
        prop_assert!(q_lat.poset.is_locally_geometric());
        prop_assert!(moebius_sums_vanish(&q_lat.poset));
    }

    #[test]
    fn complete_partition_lattices(n in 1usize..=5) {
        let l = partition_lattice(&Graph::complete(n));
        prop_assert_eq!(l.max_rank(), n - 1);
        prop_assert_eq!(l.atoms().len(), n * (n - 1) / 2);
    }

    #[test]
    fn boolean_os_is_exterior(n in 0usize..=5) {
        prop_assert_eq!(os_algebra(&GradedPoset::boolean(n)).unwrap().dims_by_rank(), binomials(n).iter().map(|c| *c as usize).collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn gysin_maps_are_adjoint_to_restriction(r in ring(), g in graph(2, 3)) {
        let geo = diagonal_geometry(&r, &g).unwrap();
        let supp = diagonal_support(&r, &g).unwrap();
        for ((y, x), res) in &geo.restrictions {
            let gy = supp.cover_map(*y, *x).unwrap();
            prop_assert_eq!(gy.transpose().mul(&geo.pairings[*y]), geo.pairings[*x].mul(res));
        }
        let l = supp.poset();
        for x in 0..l.len() {
            let blocks = l.id(x).matches('{').count() as u32;
            prop_assert_eq!(supp.euler_characteristic(x), r.euler_characteristic().pow(blocks));
        }
    }

    #[test]
    fn projective_products_survive_when_codims_fit(n in 1usize..=4, lines in 2usize..=4) {
        // lines through a point of Pⁿ, codims n-1 and n
        prop_assume!(n >= 2);
        let mut ids = vec!["X".to_string(), "p".to_string()];
        let mut covers = Vec::new();
        for i in 0..lines {
            let l = format!("L{i}");
            covers.push(("X".to_string(), l.clone()));
            covers.push((l.clone(), "p".to_string()));
            ids.push(l);
        }
        let poset = GradedPoset::from_covers(ids, &covers).unwrap();
        let codims: Vec<usize> = (0..poset.len()).map(|x| match poset.rank(x) { 0 => 0, 1 => n - 1, _ => n }).collect();
        let supp = projective_support(n, &poset, &codims).unwrap();
        let mut checked = 0;
        for x in 0..poset.len() {
            for y in 0..poset.len() {
                for t in poset.independent_joins(x, y) {
                    if codims[x] + codims[y] <= n {
                        let v = supp.multiply(x, &SparseVec::unit(0), y, &SparseVec::unit(0), t);
                        prop_assert!(!v.is_zero(), "{} · {}", poset.id(x), poset.id(y));
                        checked += 1;
                    }
                }
            }
        }
        prop_assert!(checked > 0);
    }

    #[test]
    fn e1_identities_for_chromatic_models(r in ring(), g in graph(2, 3)) {
        let model = chromatic_model(&r, &g).unwrap();
        let e1 = &model.e1;
        all_pass(&e1.verify())?;
        let h = cohomology(e1).unwrap();
        prop_assert_eq!(e1.euler_characteristic(), h.euler_characteristic());
        prop_assert!(h.check_section_independence(e1, 3).passed);
        for ((p, qq), _) in e1.dims() {
            let d = e1.d1_block(p, qq);
            let from = e1.cells_in(p, qq);
            let to = e1.cells_in(p + 1, qq);
            prop_assert_eq!((d.ncols(), d.nrows()), (from.len(), to.len()));
            for i in from {
                for (t, _) in e1.dga().d_basis(i).iter() {
                    prop_assert_eq!(e1.bidegree(*t), (p + 1, qq));
                }
            }
        }
        let pres = presentation_dims(&r, &g, e1.poset()).unwrap();
        prop_assert_eq!(pres, e1_dims_by_label(e1));
    }

    #[test]
    fn automorphisms_commute_with_the_differential(g in graph(2, 4)) {
        let model = chromatic_model(&GradedRing::projective(1), &g).unwrap();
        let all: Vec<usize> = (0..model.e1.dim()).collect();
        let d = model.e1.dga().differential_block(&all, &all);
        for sigma in g.automorphisms() {
            let a = automorphism_action(&model, &sigma).unwrap();
            prop_assert_eq!(a.mul(&d), d.mul(&a));
            for i in 0..all.len() {
                for j in 0..all.len() {
                    let lhs = a.mul_vec(&model.e1.dga().mul(&SparseVec::unit(i), &SparseVec::unit(j)));
                    let rhs = model.e1.dga().mul(&a.mul_vec(&SparseVec::unit(i)), &a.mul_vec(&SparseVec::unit(j)));
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn central_plane_arrangements(normals in proptest::collection::vec((-2i64..=2, -2i64..=2, -2i64..=2), 1..=5)) {
        // the plane a·x = 0 spanned by two vectors orthogonal to (a, b, c)
        let mut subs = Vec::new();
        for (a, b, c) in normals {
            let v = [(b, -a, 0), (c, 0, -a), (0, c, -b)];
            let dirs: Vec<Vec<_>> = v.iter().filter(|w| **w != (0, 0, 0)).map(|w| vec![q(w.0), q(w.1), q(w.2)]).collect();
            prop_assume!(!dirs.is_empty());
            subs.push(AffineSubspace { basis_point: vec![q(0); 3], directions: dirs });
        }
        let Ok(arr) = from_coordinates(3, &subs) else { return Err(TestCaseError::reject("degenerate input")) };
        prop_assume!(arr.is_hyperplane_arrangement());
        let e1 = formality_model(&arr).unwrap();
        all_pass(&e1.verify())?;
        for ((p, qq), _) in e1.dims() {
            prop_assert_eq!(qq, -2 * p);
        }
        let ring = complex_hyperplane_ring(&arr).unwrap();
        let mut os: Vec<i64> = os_algebra(&arr.poset).unwrap().dims_by_rank().iter().map(|d| *d as i64).collect();
        while os.last() == Some(&0) {
            os.pop();
        }
        prop_assert_eq!(poincare_polynomial(&ring), os);
    }

    #[test]
    fn truncated_polynomial_squares(k in 2usize..=4, cut in 1usize..=2) {
        prop_assume!(cut < k);
        let d = CubicalDiagram::single_atom(truncated_polynomial(k, 0), truncated_polynomial(k - cut, 0), truncation(k, k - cut)).unwrap();
        let r = verify_hat(&d, 1).unwrap();
        all_pass(&r.checks)?;
        let algebras = (0..4u64).map(|i| truncated_polynomial(k, 2 - i.count_ones() as usize)).collect();
        let mut maps = std::collections::BTreeMap::new();
        for i in 0..4u64 {
            for a in (0..2).filter(|a| i >> a & 1 == 0) {
                let m = 2 - i.count_ones() as usize;
                maps.insert((i | 1 << a, i), ideal_inclusion(k, m, m - 1));
            }
        }
        prop_assume!(k > 2);
        let sq = CubicalDiagram::new(2, algebras, maps).unwrap();
        for j in 0..4 {
            let r = verify_hat(&sq, j).unwrap();
            all_pass(&r.checks)?;
            prop_assert_eq!(r.dim, hat(&sq, j).unwrap().dim());
        }
    }
}
