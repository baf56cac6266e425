use serde::Serialize;

use crate::dga::{span_rank, Check, FiniteDga};
use crate::error::Result;
use crate::exactla::{RatMatrix, SparseVec};
use crate::oscomplex::Mask;
use crate::poset::subset_id;

use super::{hat, is_subset, CubicalDiagram, HatAlgebra, HatCell};

#[derive(Clone, Debug, Serialize)]
pub struct HatReport {
    pub nset: String,
    pub dim: usize,
    pub checks: Vec<Check>,
}

impl HatReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Identities of `(Â, δ + d, m̂)` itself, including multiplicativity of the
/// rank filtration `W'`.
pub fn verify_hat_algebra(h: &HatAlgebra) -> Vec<Check> {
    let d = h.dga();
    let mut checks =
        vec![d.check_degrees(), d.check_d_squared(), d.check_leibniz(), d.check_commutativity(), d.check_associativity()];
    let mut fails = Vec::new();
    for x in 0..h.dim() {
        if d.d_basis(x).iter().any(|(y, _)| h.weight(*y) > h.weight(x)) {
            fails.push(format!("d raises the weight of {}", h.label(x)));
        }
        for (y, v) in d.product_row(x) {
            let bound = (h.cells()[x].k | h.cells()[*y].k).count_ones();
            if v.iter().any(|(z, _)| h.weight(*z) > bound) {
                fails.push(format!("{} * {} leaves W'_{bound}", h.label(x), h.label(*y)));
            }
        }
    }
    checks.push(Check::new("W' multiplicative", fails));
    checks
}

/// Chain map and multiplicativity failures of `f: src → dst`.
fn morphism_failures(src: &FiniteDga, dst: &FiniteDga, f: &RatMatrix, name: &str) -> Vec<String> {
    let mut out = Vec::new();
    for a in 0..src.dim() {
        if f.mul_vec(src.d_basis(a)) != dst.d(f.column(a)) {
            out.push(format!("{name} does not commute with d on e{a}"));
        }
        for b in 0..src.dim() {
            let lhs = f.mul_vec(&src.mul(&SparseVec::unit(a), &SparseVec::unit(b)));
            if lhs != dst.mul(f.column(a), f.column(b)) {
                out.push(format!("{name} is not multiplicative on (e{a}, e{b})"));
            }
        }
    }
    out
}

/// Whether the chain map `f` induces an isomorphism on cohomology, by
/// comparing dimensions and the rank of the induced map in each degree.
pub fn quasi_isomorphism(src: &FiniteDga, dst: &FiniteDga, f: &RatMatrix) -> Result<bool> {
    let hs = src.block_cohomology(|i| src.degree(i))?;
    let hd = dst.block_cohomology(|i| dst.degree(i))?;
    for (k, b) in &hd {
        if b.dim() != hs.get(k).map_or(0, |s| s.dim()) {
            return Ok(false);
        }
    }
    for (k, b) in &hs {
        if b.dim() == 0 {
            continue;
        }
        let Some(t) = hd.get(k) else { return Ok(false) };
        let solver = t.class_solver(&t.representatives);
        let mut images = Vec::new();
        for r in &b.representatives {
            match solver.class_of(&f.mul_vec(r)) {
                Some(c) => images.push(c),
                None => return Ok(false),
            }
        }
        if span_rank(&images) != b.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cohomology_total(a: &FiniteDga) -> Result<Vec<(i32, usize)>> {
    Ok(a.block_cohomology(|i| a.degree(i))?.into_iter().map(|(k, b)| (k, b.dim())).filter(|(_, d)| *d > 0).collect())
}

/// All identities of `Â^N` plus, for every `J ⊆ N`, compatibility with the
/// restriction to `J` and the zig-zag `Â^J → Â'^J ← A^J` of
/// quasi-isomorphisms through the constant diagram with value `A^J`.
pub fn verify_hat(diag: &CubicalDiagram, nset: Mask) -> Result<HatReport> {
    let big = hat(diag, nset)?;
    let mut checks = verify_hat_algebra(&big);
    let n = diag.atoms();
    let (mut restr, mut alpha, mut beta, mut qa, mut qb, mut dims) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for j in (0..=nset).filter(|j| is_subset(*j, nset)) {
        let jn = subset_id(j, n);
        let small = hat(diag, j)?;
        let emb: Vec<usize> = small.cells().iter().map(|c| big.cell_index(c).expect("sub-object")).collect();
        let lift = |v: &SparseVec| v.map_indices(|x| emb[x]);
        for x in 0..small.dim() {
            if lift(small.dga().d_basis(x)) != *big.dga().d_basis(emb[x]) {
                restr.push(format!("differential of {} differs inside Â^{jn}", small.label(x)));
            }
            for y in 0..small.dim() {
                let a = small.dga().mul_basis(x, y).map(&lift).unwrap_or_default();
                let b = big.dga().mul_basis(emb[x], emb[y]).cloned().unwrap_or_default();
                if a != b {
                    restr.push(format!("product of {} and {} differs inside Â^{jn}", small.label(x), small.label(y)));
                }
            }
        }

        let aj = diag.algebra(j);
        let constant = CubicalDiagram::constant(aj, n)?;
        let prime = hat(&constant, j)?;
        let cols = small
            .cells()
            .iter()
            .map(|c| {
                let g = diag.structure_map(j, c.k & !c.i);
                let t = |b: usize| prime.cell_index(&HatCell { i: c.i, k: c.k, a: b }).unwrap();
                g.column(c.a).map_indices(t)
            })
            .collect();
        let a_map = RatMatrix::from_columns(prime.dim(), cols);
        let b_cols =
            (0..aj.dim()).map(|a| SparseVec::unit(prime.cell_index(&HatCell { i: 0, k: 0, a }).unwrap())).collect();
        let b_map = RatMatrix::from_columns(prime.dim(), b_cols);
        alpha.extend(morphism_failures(small.dga(), prime.dga(), &a_map, &format!("α at {jn}")));
        beta.extend(morphism_failures(aj, prime.dga(), &b_map, &format!("β at {jn}")));
        if !quasi_isomorphism(small.dga(), prime.dga(), &a_map)? {
            qa.push(format!("α at {jn}"));
        }
        if !quasi_isomorphism(aj, prime.dga(), &b_map)? {
            qb.push(format!("β at {jn}"));
        }
        let (hh, ha) = (cohomology_total(small.dga())?, cohomology_total(aj)?);
        if hh != ha {
            dims.push(format!("H(Â^{jn}) = {hh:?} but H(A^{jn}) = {ha:?}"));
        }
    }
    checks.push(Check::new("restriction compatibility", restr));
    checks.push(Check::new("α morphism", alpha));
    checks.push(Check::new("β morphism", beta));
    checks.push(Check::new("α quasi-isomorphism", qa));
    checks.push(Check::new("β quasi-isomorphism", qb));
    checks.push(Check::new("dim H(Â^J) = dim H(A^J)", dims));
    Ok(HatReport { nset: subset_id(nset, n), dim: big.dim(), checks })
}
