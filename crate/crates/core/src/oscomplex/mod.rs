//! Grassmann monomials on atoms, the atomic complex, and Orlik-Solomon
//! algebras of locally geometric lattices.
//!
//! `OS_x` is computed as the top cohomology `H^{-r(x)}(D_x, ∂')` of the atomic
//! complex: monomials `dν_I` whose atoms have `x` as a minimal upper bound,
//! with the part of the Koszul differential that keeps the label `x`. A basis
//! is formed by the lexicographically first monomials completing the image of
//! `∂'`; every other monomial is reduced to it by a precomputed normal form.

mod verify;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{fmt_q, kernel_basis, q, q_one, quotient_basis, rank, Coordinatizer, RatMatrix, SparseVec, Subspace, Q};
use crate::par;
use crate::poset::GradedPoset;

pub use verify::verify_chain_algebra;

/// A monomial `dν_I`; `I` is a set of atom positions, stored as a bitmask.
pub type Mask = u64;

pub fn mask_of(atoms: &[usize]) -> Mask {
    atoms.iter().fold(0, |m, a| m | 1 << a)
}

pub fn members(m: Mask) -> Vec<usize> {
    (0..64).filter(|i| m >> i & 1 == 1).collect()
}

/// Sign of `dν_I ∧ dν_J` relative to `dν_{I∪J}`; `None` if they share an atom.
pub fn wedge_sign(i: Mask, j: Mask) -> Option<i32> {
    if i & j != 0 {
        return None;
    }
    // each atom of J passes the atoms of I that are larger than it
    let mut swaps = 0;
    for b in members(j) {
        swaps += (i >> b >> 1).count_ones();
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Sign of `ι_a dν_I = ± dν_{I-a}`: `(-1)^(number of atoms of I before a)`.
pub fn contraction_sign(i: Mask, a: usize) -> i32 {
    if (i & ((1u64 << a) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `∂ dν_I = Σ_k (-1)^{k-1} dν_{I - i_k}` (positions counted from 1).
pub fn koszul_partial(i: Mask) -> Vec<(Mask, i32)> {
    members(i).into_iter().map(|a| (i & !(1 << a), contraction_sign(i, a))).collect()
}

/// Lexicographic order on the sorted atom lists of two monomials.
pub fn lex_cmp(a: Mask, b: Mask) -> std::cmp::Ordering {
    members(a).cmp(&members(b))
}

/// One summand `D_x` of the atomic complex.
#[derive(Clone, Debug)]
pub struct AtomicPiece {
    /// Monomials with label `x`, grouped by size and sorted lexicographically.
    pub monomials: BTreeMap<usize, Vec<Mask>>,
    /// Dimensions of `H^{-k}(D_x, ∂')` keyed by `k`.
    pub cohomology: BTreeMap<usize, usize>,
}

impl AtomicPiece {
    /// Matrix of `∂'` from size-`k` monomials to size-`(k-1)` monomials.
    pub fn inner_differential(&self, k: usize) -> RatMatrix {
        let empty = Vec::new();
        let src = self.monomials.get(&k).unwrap_or(&empty);
        let dst = if k == 0 { &empty } else { self.monomials.get(&(k - 1)).unwrap_or(&empty) };
        let pos: HashMap<Mask, usize> = dst.iter().enumerate().map(|(p, m)| (*m, p)).collect();
        let cols = src
            .iter()
            .map(|m| {
                SparseVec::from_pairs(
                    koszul_partial(*m).into_iter().filter_map(|(f, s)| pos.get(&f).map(|p| (*p, q(s as i64)))),
                )
            })
            .collect();
        RatMatrix::from_columns(dst.len(), cols)
    }
}

/// The atomic complex of a locally geometric lattice.
#[derive(Clone, Debug)]
pub struct AtomicComplex {
    pub pieces: Vec<AtomicPiece>,
}

/// Whether `x` is a minimal upper bound of the atoms in `i` (all below `x`).
fn has_label(l: &GradedPoset, x: usize, i: Mask) -> bool {
    if x == 0 {
        return i == 0;
    }
    l.lower_covers(x).iter().all(|y| {
        let below = l.atoms_below(*y);
        !members(i).iter().all(|a| below.get(*a))
    })
}

fn atoms_mask(l: &GradedPoset, x: usize) -> Result<Mask> {
    if l.atoms().len() > 64 {
        return Err(Error::InvariantViolation("more than 64 atoms".into()));
    }
    Ok(mask_of(&l.atoms_below(x).ones().collect::<Vec<_>>()))
}

fn piece(l: &GradedPoset, x: usize) -> Result<AtomicPiece> {
    let below = atoms_mask(l, x)?;
    let atoms = members(below);
    if atoms.len() > 22 {
        return Err(Error::InvariantViolation(format!("{} atoms below {} is beyond the enumeration limit", atoms.len(), l.id(x))));
    }
    let mut monomials: BTreeMap<usize, Vec<Mask>> = BTreeMap::new();
    for sub in 0..1u64 << atoms.len() {
        let m = atoms.iter().enumerate().filter(|(k, _)| sub >> k & 1 == 1).fold(0, |acc, (_, a)| acc | 1 << a);
        if has_label(l, x, m) {
            monomials.entry(m.count_ones() as usize).or_default().push(m);
        }
    }
    for v in monomials.values_mut() {
        v.sort_by(|a, b| lex_cmp(*a, *b));
    }
    let mut p = AtomicPiece { monomials, cohomology: BTreeMap::new() };
    let sizes: Vec<usize> = p.monomials.keys().copied().collect();
    for k in sizes {
        let dim = p.monomials[&k].len();
        let out = rank(&p.inner_differential(k));
        let inc = rank(&p.inner_differential(k + 1));
        p.cohomology.insert(k, dim - out - inc);
    }
    Ok(p)
}

pub fn atomic_complex(l: &GradedPoset) -> Result<AtomicComplex> {
    if !l.is_locally_geometric() {
        return Err(Error::NotLocallyGeometric("some lower interval is not a geometric lattice".into()));
    }
    let pieces = par::map_range(l.len(), |x| piece(l, x)).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(AtomicComplex { pieces })
}

/// `OS_x` with its representative basis and normal form.
#[derive(Clone, Debug)]
pub struct OsComponent {
    pub rank: usize,
    /// Representative monomials of the basis.
    pub basis: Vec<Mask>,
    /// All monomials of size `r(x)` with label `x`.
    pub monomials: Vec<Mask>,
    normal: Vec<SparseVec>,
    index: HashMap<Mask, usize>,
}

impl OsComponent {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a top monomial, or `None` if it is not labelled here.
    pub fn normal_form_of(&self, m: Mask) -> Option<&SparseVec> {
        self.index.get(&m).map(|k| &self.normal[*k])
    }

    pub fn contains_monomial(&self, m: Mask) -> bool {
        self.index.contains_key(&m)
    }
}

/// Bilinear map `OS_x ⊗ OS_y → OS_t`, keyed by basis pairs.
pub type ProductTable = BTreeMap<(usize, usize), SparseVec>;

#[derive(Clone, Debug)]
pub struct OSAlgebra {
    poset: GradedPoset,
    components: Vec<OsComponent>,
    structure_maps: BTreeMap<(usize, usize), RatMatrix>,
    products: BTreeMap<(usize, usize, usize), ProductTable>,
    atomic: Option<AtomicComplex>,
}

fn component_from_piece(l: &GradedPoset, x: usize, p: &AtomicPiece) -> Result<OsComponent> {
    let r = l.rank(x);
    for (k, h) in &p.cohomology {
        if *k != r && *h != 0 {
            return Err(Error::AcyclicityFailure(format!("H^-{k}(D_{}) has dimension {h}", l.id(x))));
        }
    }
    let monomials = p.monomials.get(&r).cloned().unwrap_or_default();
    let n = monomials.len();
    let relations = Subspace::span(n, &crate::exactla::image_basis(&p.inner_differential(r + 1)));
    let whole = Subspace::whole(n);
    let reps = quotient_basis(&relations, &whole)?;
    let basis_pos: Vec<usize> = reps.iter().map(|v| v.iter().next().unwrap().0).collect();
    let mut gens: Vec<SparseVec> = basis_pos.iter().map(|k| SparseVec::unit(*k)).collect();
    gens.extend(relations.basis().iter().cloned());
    let solver = Coordinatizer::from_vectors(&gens)?;
    let nb = basis_pos.len();
    let normal = (0..n)
        .map(|k| {
            let c = solver.coordinates(&SparseVec::unit(k)).expect("basis plus relations span D_x");
            SparseVec::from_pairs(c.iter().filter(|(i, _)| *i < nb).cloned())
        })
        .collect();
    let index = monomials.iter().enumerate().map(|(k, m)| (*m, k)).collect();
    Ok(OsComponent { rank: r, basis: basis_pos.iter().map(|k| monomials[*k]).collect(), monomials, normal, index })
}

impl OSAlgebra {
    /// Builds every component, structure map and product from the atomic complex.
    pub fn new(l: &GradedPoset) -> Result<OSAlgebra> {
        let ac = atomic_complex(l)?;
        let components = par::map_range(l.len(), |x| component_from_piece(l, x, &ac.pieces[x]))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        if components[0].dim() != 1 {
            return Err(Error::AcyclicityFailure("OS_0 is not one-dimensional".into()));
        }
        OSAlgebra::assemble(l.clone(), components, Some(ac))
    }

    /// The full Grassmann algebra on the atoms of a Boolean lattice, written
    /// down directly without the atomic complex.
    pub fn grassmann(l: &GradedPoset) -> Result<OSAlgebra> {
        let n = l.atoms().len();
        if l.len() != 1 << n || !(0..l.len()).all(|x| l.atoms_below(x).count() == l.rank(x)) {
            return Err(Error::InvariantViolation("not a Boolean lattice".into()));
        }
        let components = (0..l.len())
            .map(|x| {
                let m = atoms_mask(l, x)?;
                Ok(OsComponent {
                    rank: l.rank(x),
                    basis: vec![m],
                    monomials: vec![m],
                    normal: vec![SparseVec::unit(0)],
                    index: [(m, 0)].into_iter().collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        OSAlgebra::assemble(l.clone(), components, None)
    }

    fn assemble(l: GradedPoset, components: Vec<OsComponent>, atomic: Option<AtomicComplex>) -> Result<OSAlgebra> {
        let mut alg = OSAlgebra { poset: l, components, structure_maps: BTreeMap::new(), products: BTreeMap::new(), atomic };
        let covers = alg.poset.covers();
        let maps = par::map_slice(&covers, |(y, x)| ((*y, *x), alg.induced_structure_map(*y, *x)));
        alg.structure_maps = maps.into_iter().collect();
        let n = alg.poset.len();
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .flat_map(|(x, y)| alg.poset.independent_joins(x, y).into_iter().map(move |t| (x, y, t)))
            .collect();
        let tables = par::map_slice(&triples, |(x, y, t)| ((*x, *y, *t), alg.induced_product(*x, *y, *t)));
        alg.products = tables.into_iter().collect();
        Ok(alg)
    }

    /// Labels `y` receiving the term `dν_I` of a Koszul differential from `x`.
    fn cover_labels(&self, x: usize, m: Mask) -> Vec<usize> {
        self.poset.lower_covers(x).iter().copied().filter(|y| self.components[*y].contains_monomial(m)).collect()
    }

    /// `∂_{yx}` applied to a top monomial of `D_x`, as a vector in `OS_y`.
    pub fn koszul_to_cover(&self, y: usize, x: usize, m: Mask) -> SparseVec {
        let mut out = SparseVec::new();
        for (f, s) in koszul_partial(m) {
            if self.cover_labels(x, f).contains(&y) {
                if let Some(nf) = self.components[y].normal_form_of(f) {
                    out.add_scaled(nf, &q(s as i64));
                }
            }
        }
        out
    }

    fn induced_structure_map(&self, y: usize, x: usize) -> RatMatrix {
        let cols = self.components[x].basis.iter().map(|m| self.koszul_to_cover(y, x, *m)).collect();
        RatMatrix::from_columns(self.components[y].dim(), cols)
    }

    /// Product of two top monomials with labels `x`, `y` landing in `OS_t`.
    pub fn monomial_product(&self, t: usize, a: Mask, b: Mask) -> SparseVec {
        match wedge_sign(a, b) {
            Some(s) => match self.components[t].normal_form_of(a | b) {
                Some(nf) => nf.scaled(&q(s as i64)),
                None => SparseVec::new(),
            },
            None => SparseVec::new(),
        }
    }

    fn induced_product(&self, x: usize, y: usize, t: usize) -> ProductTable {
        let mut table = BTreeMap::new();
        for (i, a) in self.components[x].basis.iter().enumerate() {
            for (j, b) in self.components[y].basis.iter().enumerate() {
                let v = self.monomial_product(t, *a, *b);
                if !v.is_zero() {
                    table.insert((i, j), v);
                }
            }
        }
        table
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    pub fn component(&self, x: usize) -> &OsComponent {
        &self.components[x]
    }

    pub fn dim(&self, x: usize) -> usize {
        self.components[x].dim()
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|c| c.dim()).sum()
    }

    pub fn atomic(&self) -> Option<&AtomicComplex> {
        self.atomic.as_ref()
    }

    pub fn structure_map(&self, y: usize, x: usize) -> Option<&RatMatrix> {
        self.structure_maps.get(&(y, x))
    }

    pub fn structure_maps(&self) -> &BTreeMap<(usize, usize), RatMatrix> {
        &self.structure_maps
    }

    /// Mutable access to one structure map (used to inject faults).
    pub fn structure_map_mut(&mut self, y: usize, x: usize) -> Option<&mut RatMatrix> {
        self.structure_maps.get_mut(&(y, x))
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize, usize), ProductTable> {
        &self.products
    }

    pub fn product(&self, x: usize, y: usize, t: usize) -> Option<&ProductTable> {
        self.products.get(&(x, y, t))
    }

    /// Dimensions of `OS` summed by rank.
    pub fn dims_by_rank(&self) -> Vec<usize> {
        let mut out = vec![0; self.poset.max_rank() + 1];
        for x in 0..self.poset.len() {
            out[self.poset.rank(x)] += self.dim(x);
        }
        out
    }

    /// Normal form of a combination of monomials that must all carry label `x`.
    pub fn normal_form(&self, x: usize, v: &[(Mask, Q)]) -> Result<SparseVec> {
        let comp = &self.components[x];
        let mut out = SparseVec::new();
        for (m, c) in v {
            let nf = comp.normal_form_of(*m).ok_or_else(|| {
                Error::LabelMismatch(format!("monomial {:?} does not have label {}", members(*m), self.poset.id(x)))
            })?;
            out.add_scaled(nf, c);
        }
        Ok(out)
    }

    /// Matrix of the map `OS_x → OS_{π(x)}` induced by a permutation of atoms.
    pub fn permutation_action(&self, x: usize, elem_perm: &[usize], atom_perm: &[usize]) -> Result<RatMatrix> {
        let target = elem_perm[x];
        let cols = self.components[x]
            .basis
            .iter()
            .map(|m| {
                let imgs: Vec<usize> = members(*m).iter().map(|a| atom_perm[*a]).collect();
                // sign of sorting the permuted atom list
                let mut inv = 0;
                for i in 0..imgs.len() {
                    for j in i + 1..imgs.len() {
                        if imgs[i] > imgs[j] {
                            inv += 1;
                        }
                    }
                }
                let s = if inv % 2 == 0 { q_one() } else { -q_one() };
                self.normal_form(target, &[(mask_of(&imgs), s)])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix::from_columns(self.dim(target), cols))
    }

    /// Kernel of `∂'` on the top monomials of `D_x`; equals the whole space.
    pub fn top_cycles_dim(&self, x: usize) -> usize {
        match &self.atomic {
            Some(ac) => {
                let r = self.poset.rank(x);
                kernel_basis(&ac.pieces[x].inner_differential(r)).len()
            }
            None => self.components[x].monomials.len(),
        }
    }

    pub fn to_json(&self) -> String {
        let l = &self.poset;
        let atom_ids: Vec<String> = l.atoms().iter().map(|a| l.id(*a).to_string()).collect();
        let mono = |m: &Mask| -> Vec<String> { members(*m).iter().map(|a| atom_ids[*a].clone()).collect() };
        let mut order: Vec<usize> = (0..l.len()).collect();
        order.sort_by(|a, b| l.id(*a).cmp(l.id(*b)));
        let elements: Vec<OsElementJson> = order
            .iter()
            .map(|x| OsElementJson {
                id: l.id(*x).to_string(),
                rank: l.rank(*x),
                dim: self.dim(*x),
                basis: self.components[*x].basis.iter().map(mono).collect(),
            })
            .collect();
        let mut structure_maps: Vec<MapJson> = self
            .structure_maps
            .iter()
            .map(|((y, x), m)| MapJson {
                cover: [l.id(*y).to_string(), l.id(*x).to_string()],
                matrix: m.to_dense_rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
            })
            .collect();
        structure_maps.sort_by(|a, b| a.cover.cmp(&b.cover));
        let mut products: Vec<ProductJson> = self
            .products
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|((x, y, t), table)| ProductJson {
                x: l.id(*x).to_string(),
                y: l.id(*y).to_string(),
                t: l.id(*t).to_string(),
                entries: table
                    .iter()
                    .flat_map(|((i, j), v)| v.iter().map(move |(k, c)| (*i, *j, *k, fmt_q(c))))
                    .collect(),
            })
            .collect();
        products.sort_by(|a, b| (&a.x, &a.y, &a.t).cmp(&(&b.x, &b.y, &b.t)));
        serde_json::to_string_pretty(&OsJson { elements, structure_maps, products }).unwrap()
    }
}

#[derive(Serialize)]
struct OsJson {
    elements: Vec<OsElementJson>,
    structure_maps: Vec<MapJson>,
    products: Vec<ProductJson>,
}

#[derive(Serialize)]
struct OsElementJson {
    id: String,
    rank: usize,
    dim: usize,
    basis: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct MapJson {
    cover: [String; 2],
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct ProductJson {
    x: String,
    y: String,
    t: String,
    entries: Vec<(usize, usize, usize, String)>,
}

pub fn os_algebra(l: &GradedPoset) -> Result<OSAlgebra> {
    OSAlgebra::new(l)
}

#[cfg(test)]
mod tests;
