//! The Mayer-Vietoris E1 page `⊕_x H^*_{L_x}(X) ⊗ OS_x` as a bigraded
//! commutative dga, its cohomology `E2 = E∞` and the ring structure on it.

mod ring;
mod table;
#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap};

use crate::dga::{sign, Check, FiniteDga};
use crate::error::{Error, Result};
use crate::exactla::{RatMatrix, SparseVec};
use crate::oscomplex::{members, OSAlgebra};
use crate::par;
use crate::poset::GradedPoset;
use crate::supportcoh::SupportModule;

pub use ring::{cohomology, formality_report, poincare_polynomial, report_json, CohomologyRing, FormalityReport};
pub use table::render_e_table;

/// Basis vector `h ⊗ m` of `H^q_{L_x}(X) ⊗ OS_x`, in bidegree `(p, q) = (-r(x), q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct E1Cell {
    pub x: usize,
    pub h: usize,
    pub m: usize,
    pub p: i32,
    pub q: i32,
}

#[derive(Clone, Debug)]
pub struct E1Algebra {
    os: OSAlgebra,
    supp: SupportModule,
    cells: Vec<E1Cell>,
    index: HashMap<(usize, usize, usize), usize>,
    dga: FiniteDga,
}

/// `d1(h⊗m) = (-1)^{|h|} Σ_{y<:x} g_{yx}(h) ⊗ ∂_{yx}(m)` and
/// `(h⊗m)(h'⊗m') = (-1)^{|m||h'|} hh' ⊗ mm'`.
pub fn build_e1_lattice(os: &OSAlgebra, supp: &SupportModule) -> Result<E1Algebra> {
    let l = os.poset();
    if l != supp.poset() {
        return Err(Error::PosetMismatch);
    }
    let mut cells = Vec::new();
    let mut index = HashMap::new();
    for x in 0..l.len() {
        let space = supp.space(x);
        for h in 0..space.dim() {
            for m in 0..os.dim(x) {
                index.insert((x, h, m), cells.len());
                cells.push(E1Cell { x, h, m, p: -(l.rank(x) as i32), q: space.degrees[h] });
            }
        }
    }
    let diff = par::map_slice(&cells, |c| {
        let mut v = SparseVec::new();
        let s = sign(c.q % 2 != 0);
        for y in l.lower_covers(c.x) {
            let (Some(g), Some(dm)) = (supp.cover_map(*y, c.x), os.structure_map(*y, c.x)) else {
                continue;
            };
            for (h2, a) in g.column(c.h).iter() {
                for (m2, b) in dm.column(c.m).iter() {
                    v.add_scaled(&SparseVec::unit(index[&(*y, *h2, *m2)]), &(&s * a * b));
                }
            }
        }
        v
    });
    let rows: Vec<Vec<((usize, usize), SparseVec)>> = par::map_range(l.len(), |x| {
        let mut acc: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for y in 0..l.len() {
            for t in l.independent_joins(x, y) {
                let (Some(st), Some(ot)) = (supp.product(x, y, t), os.product(x, y, t)) else {
                    continue;
                };
                for ((h, h2), v) in st {
                    let s = sign(l.rank(x) % 2 == 1 && supp.space(y).degrees[*h2] % 2 != 0);
                    for ((m, m2), w) in ot {
                        let mut out = SparseVec::new();
                        for (k, a) in v.iter() {
                            for (n, b) in w.iter() {
                                out.add_scaled(&SparseVec::unit(index[&(t, *k, *n)]), &(&s * a * b));
                            }
                        }
                        acc.entry((index[&(x, *h, *m)], index[&(y, *h2, *m2)])).or_default().add_scaled(&out, &crate::exactla::q_one());
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    });
    let mut prod: Vec<Vec<(usize, SparseVec)>> = vec![Vec::new(); cells.len()];
    for ((i, j), v) in rows.into_iter().flatten() {
        prod[i].push((j, v));
    }
    for row in &mut prod {
        row.sort_by_key(|(j, _)| *j);
    }
    let degrees = cells.iter().map(|c| c.p + c.q).collect();
    let dga = FiniteDga::from_rows(degrees, diff, prod);
    Ok(E1Algebra { os: os.clone(), supp: supp.clone(), cells, index, dga })
}

/// E1 over a Boolean lattice of atoms: the Orlik-Solomon algebra is the full
/// Grassmann algebra and `∂` is the Koszul contraction.
pub fn build_e1_cubical(supp: &SupportModule) -> Result<E1Algebra> {
    let os = OSAlgebra::grassmann(supp.poset())?;
    build_e1_lattice(&os, supp)
}

impl E1Algebra {
    pub fn poset(&self) -> &GradedPoset {
        self.os.poset()
    }

    pub fn os(&self) -> &OSAlgebra {
        &self.os
    }

    pub fn support(&self) -> &SupportModule {
        &self.supp
    }

    pub fn cells(&self) -> &[E1Cell] {
        &self.cells
    }

    pub fn cell_index(&self, x: usize, h: usize, m: usize) -> Option<usize> {
        self.index.get(&(x, h, m)).copied()
    }

    pub fn dga(&self) -> &FiniteDga {
        &self.dga
    }

    /// Mutable access for fault injection in tests.
    pub fn dga_mut(&mut self) -> &mut FiniteDga {
        &mut self.dga
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    pub fn label(&self, i: usize) -> String {
        let c = &self.cells[i];
        let l = self.poset();
        let atoms = l.atoms();
        let mono = members(self.os.component(c.x).basis[c.m]);
        let nu = if mono.is_empty() {
            String::new()
        } else {
            format!("·dν[{}]", mono.iter().map(|a| l.id(atoms[*a])).collect::<Vec<_>>().join(","))
        };
        format!("{}@{}{}", self.supp.space(c.x).labels[c.h], l.id(c.x), nu)
    }

    pub fn bidegree(&self, i: usize) -> (i32, i32) {
        (self.cells[i].p, self.cells[i].q)
    }

    pub fn dims(&self) -> BTreeMap<(i32, i32), usize> {
        let mut m = BTreeMap::new();
        for c in &self.cells {
            *m.entry((c.p, c.q)).or_insert(0) += 1;
        }
        m
    }

    /// Cells of one bidegree, in basis order.
    pub fn cells_in(&self, p: i32, q: i32) -> Vec<usize> {
        (0..self.dim()).filter(|i| self.bidegree(*i) == (p, q)).collect()
    }

    /// Matrix of `d1: E1^{p,q} → E1^{p+1,q}`.
    pub fn d1_block(&self, p: i32, q: i32) -> RatMatrix {
        self.dga.differential_block(&self.cells_in(p, q), &self.cells_in(p + 1, q))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().map(|c| if (c.p + c.q) % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// Every invariant of the E1 page, one check each.
    pub fn verify(&self) -> Vec<Check> {
        let quadrant = self.cells.iter().filter(|c| c.p > 0 || c.q < 0).count();
        let weight = (0..self.dim())
            .filter(|i| {
                let (p, q) = self.bidegree(*i);
                self.dga.d_basis(*i).iter().any(|(j, _)| self.bidegree(*j) != (p + 1, q))
            })
            .map(|i| format!("d1 of {} leaves bidegree (p+1, q)", self.label(i)))
            .collect();
        vec![
            Check::from_bool("second quadrant", quadrant == 0, format!("{quadrant} cells outside p ≤ 0, q ≥ 0")),
            self.dga.check_degrees(),
            Check::new("weight preservation", weight),
            self.dga.check_d_squared(),
            self.dga.check_leibniz(),
            self.dga.check_commutativity(),
            self.dga.check_associativity(),
        ]
    }

    /// Matrix of the automorphism induced by a poset automorphism together
    /// with maps `H_{L_x} → H_{L_{σx}}` on the supports. Fails unless it
    /// preserves bidegrees, commutes with `d1` and is multiplicative.
    pub fn group_action(&self, elem_perm: &[usize], atom_perm: &[usize], supp_maps: &[RatMatrix]) -> Result<RatMatrix> {
        let l = self.poset();
        if !l.is_automorphism(elem_perm) {
            return Err(Error::NotAutomorphism("the element permutation is not a poset automorphism".into()));
        }
        let derived = l.map_from_atom_permutation(atom_perm)?;
        if derived != elem_perm {
            return Err(Error::NotAutomorphism("element and atom permutations disagree".into()));
        }
        if supp_maps.len() != l.len() {
            return Err(Error::NotAutomorphism("one support map per element is required".into()));
        }
        let mut cols = Vec::with_capacity(self.dim());
        let os_maps: Vec<RatMatrix> = (0..l.len()).map(|x| self.os.permutation_action(x, elem_perm, atom_perm)).collect::<Result<_>>()?;
        for c in &self.cells {
            let sx = elem_perm[c.x];
            let g = &supp_maps[c.x];
            if g.ncols() != self.supp.space(c.x).dim() || g.nrows() != self.supp.space(sx).dim() {
                return Err(Error::NotAutomorphism(format!("support map at {} has the wrong shape", l.id(c.x))));
            }
            let mut v = SparseVec::new();
            for (h2, a) in g.column(c.h).iter() {
                for (m2, b) in os_maps[c.x].column(c.m).iter() {
                    v.add_scaled(&SparseVec::unit(self.index[&(sx, *h2, *m2)]), &(a * b));
                }
            }
            cols.push(v);
        }
        let a = RatMatrix::from_columns(self.dim(), cols);
        for i in 0..self.dim() {
            let col = a.column(i);
            if col.iter().any(|(j, _)| self.bidegree(*j) != self.bidegree(i)) {
                return Err(Error::NotAutomorphism(format!("image of {} changes bidegree", self.label(i))));
            }
            if a.mul_vec(self.dga.d_basis(i)) != self.dga.d(col) {
                return Err(Error::NotAutomorphism(format!("does not commute with d1 on {}", self.label(i))));
            }
        }
        let bad = par::map_range(self.dim(), |i| {
            (0..self.dim()).find(|j| {
                let lhs = self.dga.mul_basis(i, *j).map(|v| a.mul_vec(v)).unwrap_or_default();
                lhs != self.dga.mul(a.column(i), a.column(*j))
            })
            .map(|j| (i, j))
        });
        if let Some((i, j)) = bad.into_iter().flatten().next() {
            return Err(Error::NotAutomorphism(format!("not multiplicative on ({}, {})", self.label(i), self.label(j))));
        }
        Ok(a)
    }
}
