use std::collections::BTreeMap;

use serde::Serialize;

use super::OSAlgebra;
use crate::dga::{sign, Check};
use crate::exactla::{q, rank, RatMatrix, SparseVec};
use crate::par;

/// One check per identity an Orlik-Solomon chain algebra has to satisfy.
#[derive(Clone, Debug, Serialize)]
pub struct ChainAlgebraReport {
    pub checks: Vec<Check>,
}

impl ChainAlgebraReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Element of `⊕_x OS_x`: a vector per poset element.
type Graded = BTreeMap<usize, SparseVec>;

fn add_into(acc: &mut Graded, x: usize, v: &SparseVec, c: &crate::exactla::Q) {
    let e = acc.entry(x).or_default();
    e.add_scaled(v, c);
    if e.is_zero() {
        acc.remove(&x);
    }
}

impl OSAlgebra {
    fn boundary(&self, x: usize, v: &SparseVec) -> Graded {
        let mut out = Graded::new();
        for y in self.poset().lower_covers(x) {
            if let Some(m) = self.structure_map(*y, x) {
                add_into(&mut out, *y, &m.mul_vec(v), &q(1));
            }
        }
        out
    }

    fn graded_product(&self, x: usize, a: &SparseVec, y: usize, b: &SparseVec) -> Graded {
        let mut out = Graded::new();
        for t in self.poset().independent_joins(x, y) {
            if let Some(table) = self.product(x, y, t) {
                for (i, ci) in a.iter() {
                    for (j, cj) in b.iter() {
                        if let Some(v) = table.get(&(*i, *j)) {
                            add_into(&mut out, t, v, &(ci * cj));
                        }
                    }
                }
            }
        }
        out
    }

    fn graded_mul(&self, a: &Graded, b: &Graded) -> Graded {
        let mut out = Graded::new();
        for (x, u) in a {
            for (y, v) in b {
                for (t, w) in self.graded_product(*x, u, *y, v) {
                    add_into(&mut out, t, &w, &q(1));
                }
            }
        }
        out
    }

    fn graded_boundary(&self, a: &Graded) -> Graded {
        let mut out = Graded::new();
        for (x, u) in a {
            for (y, w) in self.boundary(*x, u) {
                add_into(&mut out, y, &w, &q(1));
            }
        }
        out
    }
}

fn check_d_squared(alg: &OSAlgebra) -> Check {
    let l = alg.poset();
    let mut fails = Vec::new();
    for x in 0..l.len() {
        for (k, _) in alg.component(x).basis.iter().enumerate() {
            let dd = alg.graded_boundary(&alg.boundary(x, &SparseVec::unit(k)));
            if !dd.is_empty() {
                fails.push(format!("∂∂ of basis vector {k} of {} is nonzero", l.id(x)));
            }
        }
    }
    Check::new("∂²=0", fails)
}

fn check_leibniz(alg: &OSAlgebra) -> Check {
    let l = alg.poset();
    let n = l.len();
    let fails: Vec<String> = par::map_range(n, |x| {
        let mut bad = Vec::new();
        let s = sign(l.rank(x) % 2 == 1);
        for y in 0..n {
            for i in 0..alg.dim(x) {
                for j in 0..alg.dim(y) {
                    let a: Graded = [(x, SparseVec::unit(i))].into_iter().collect();
                    let b: Graded = [(y, SparseVec::unit(j))].into_iter().collect();
                    let lhs = alg.graded_boundary(&alg.graded_mul(&a, &b));
                    let mut rhs = alg.graded_mul(&alg.graded_boundary(&a), &b);
                    for (t, w) in alg.graded_mul(&a, &alg.graded_boundary(&b)) {
                        add_into(&mut rhs, t, &w, &s);
                    }
                    if lhs != rhs {
                        bad.push(format!("Leibniz fails on ({}#{i}, {}#{j})", l.id(x), l.id(y)));
                    }
                }
            }
        }
        bad
    })
    .into_iter()
    .flatten()
    .collect();
    Check::new("Leibniz", fails)
}

fn check_commutativity(alg: &OSAlgebra) -> Check {
    let l = alg.poset();
    let mut fails = Vec::new();
    for ((x, y, t), table) in alg.products() {
        let other = alg.product(*y, *x, *t);
        let s = sign(l.rank(*x) * l.rank(*y) % 2 == 1);
        for ((i, j), v) in table {
            let w = other.and_then(|o| o.get(&(*j, *i))).cloned().unwrap_or_default();
            if *v != w.scaled(&s) {
                fails.push(format!("m({}#{i},{}#{j}) != ±m({}#{j},{}#{i})", l.id(*x), l.id(*y), l.id(*y), l.id(*x)));
            }
        }
    }
    Check::new("graded commutativity", fails)
}

/// Homology of `⊕_{t≤x} OS_t` with `∂` vanishes for every `x > 0`.
fn check_acyclicity(alg: &OSAlgebra) -> Check {
    let l = alg.poset();
    let fails: Vec<String> = par::map_range(l.len(), |x| {
        if x == 0 {
            return None;
        }
        let below: Vec<usize> = (0..l.len()).filter(|t| l.leq(*t, x)).collect();
        let r = l.rank(x);
        // offsets of each element inside its rank level
        let mut level: Vec<Vec<usize>> = vec![Vec::new(); r + 1];
        for t in &below {
            level[l.rank(*t)].push(*t);
        }
        let offset = |lev: &[usize], t: usize| -> usize {
            lev.iter().take_while(|s| **s != t).map(|s| alg.dim(*s)).sum()
        };
        let size = |lev: &[usize]| -> usize { lev.iter().map(|s| alg.dim(*s)).sum() };
        let mut ranks = vec![0; r + 2];
        for k in 1..=r {
            let mut entries = Vec::new();
            for t in &level[k] {
                for y in l.lower_covers(*t) {
                    if let Some(m) = alg.structure_map(*y, *t) {
                        let (ro, co) = (offset(&level[k - 1], *y), offset(&level[k], *t));
                        for (j, col) in m.columns().iter().enumerate() {
                            for (i, c) in col.iter() {
                                entries.push((ro + i, co + j, c.clone()));
                            }
                        }
                    }
                }
            }
            let mat = RatMatrix::from_entries(size(&level[k - 1]), size(&level[k]), entries);
            ranks[k] = rank(&mat);
        }
        let total: usize = (0..=r).map(|k| size(&level[k]) - ranks[k] - ranks[k + 1]).sum();
        (total != 0).then(|| format!("⊕_{{t≤{}}} OS_t has homology of total dimension {total}", l.id(x)))
    })
    .into_iter()
    .flatten()
    .collect();
    Check::new("acyclicity", fails)
}

fn check_moebius(alg: &OSAlgebra) -> Check {
    let l = alg.poset();
    let fails = (0..l.len())
        .filter(|x| alg.dim(*x) as i64 != l.moebius(*x).abs())
        .map(|x| format!("dim OS_{} = {} but |μ| = {}", l.id(x), alg.dim(x), l.moebius(x).abs()))
        .collect();
    Check::new("dim = |μ|", fails)
}

/// The projection from top monomials of `D_x` to `OS_x` commutes with the
/// structure maps on every cover.
fn check_projection(alg: &OSAlgebra) -> Check {
    let l = alg.poset();
    let mut fails = Vec::new();
    for (y, x) in l.covers() {
        let map = match alg.structure_map(y, x) {
            Some(m) => m,
            None => continue,
        };
        for m in &alg.component(x).monomials {
            let via_d = alg.koszul_to_cover(y, x, *m);
            let nf = alg.component(x).normal_form_of(*m).unwrap();
            if map.mul_vec(nf) != via_d {
                fails.push(format!("projection square fails at {} <: {}", l.id(y), l.id(x)));
            }
        }
    }
    Check::new("D→OS commutes with ∂", fails)
}

fn check_concentration(alg: &OSAlgebra) -> Check {
    let l = alg.poset();
    let Some(ac) = alg.atomic() else {
        return Check::from_bool("atomic cohomology concentrated", true, "not built from the atomic complex");
    };
    let mut fails = Vec::new();
    for x in 0..l.len() {
        for (k, h) in &ac.pieces[x].cohomology {
            if *k != l.rank(x) && *h != 0 {
                fails.push(format!("H^-{k}(D_{}) = {h}", l.id(x)));
            }
        }
    }
    Check::new("atomic cohomology concentrated", fails)
}

pub fn verify_chain_algebra(alg: &OSAlgebra) -> ChainAlgebraReport {
    let unit = Check::from_bool("OS_0 one-dimensional", alg.dim(0) == 1, format!("dim OS_0 = {}", alg.dim(0)));
    ChainAlgebraReport {
        checks: vec![
            unit,
            check_d_squared(alg),
            check_leibniz(alg),
            check_commutativity(alg),
            check_acyclicity(alg),
            check_moebius(alg),
            check_projection(alg),
            check_concentration(alg),
        ],
    }
}
