//! Cohomology with supports `H^*_{L_x}(X)` for every stratum of an
//! arrangement, with Gysin maps along covers and products of transversal
//! strata. Spaces are indexed by the ambient degree `q`.

mod json;
mod kunneth;
mod ring;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactla::{pairing_adjoint, q, q_one, RatMatrix, SparseVec};
use crate::graph::Graph;
use crate::oscomplex::ProductTable;
use crate::poset::{partition_blocks, partition_lattice, CubicalLattice, GradedPoset};

pub use kunneth::{restriction_matrix, TensorPower};
pub use ring::GradedRing;

/// Finite graded vector space; the basis is sorted by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    pub degrees: Vec<i32>,
    pub labels: Vec<String>,
}

impl GradedSpace {
    pub fn new(degrees: Vec<i32>, labels: Vec<String>) -> Result<GradedSpace> {
        if degrees.len() != labels.len() {
            return Err(Error::Schema("degrees and labels differ in length".into()));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Schema("basis must be listed by increasing degree".into()));
        }
        Ok(GradedSpace { degrees, labels })
    }

    pub fn zero() -> GradedSpace {
        GradedSpace { degrees: Vec::new(), labels: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees {
            *m.entry(*d).or_insert(0) += 1;
        }
        m
    }

    /// Basis positions of degree `d`.
    pub fn block(&self, d: i32) -> std::ops::Range<usize> {
        let lo = self.degrees.partition_point(|x| *x < d);
        let hi = self.degrees.partition_point(|x| *x <= d);
        lo..hi
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|d| if d % 2 == 0 { 1 } else { -1 }).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportModule {
    poset: GradedPoset,
    spaces: Vec<GradedSpace>,
    cover_maps: BTreeMap<(usize, usize), RatMatrix>,
    products: BTreeMap<(usize, usize, usize), ProductTable>,
    weight_offset: Vec<i32>,
}

fn violation(s: String) -> Error {
    Error::InvariantViolation(s)
}

impl SupportModule {
    /// Cover maps are keyed `(y, x)` for `y <: x` and map the space at `x` to
    /// the space at `y`. Missing cover maps are zero.
    pub fn new(
        poset: GradedPoset,
        spaces: Vec<GradedSpace>,
        cover_maps: BTreeMap<(usize, usize), RatMatrix>,
        products: BTreeMap<(usize, usize, usize), ProductTable>,
        weight_offset: Vec<i32>,
    ) -> Result<SupportModule> {
        if spaces.len() != poset.len() || weight_offset.len() != poset.len() {
            return Err(Error::Schema("one space and one weight offset per poset element are required".into()));
        }
        let mut maps = BTreeMap::new();
        for (y, x) in poset.covers() {
            let m = cover_maps.get(&(y, x)).cloned().unwrap_or_else(|| RatMatrix::zeros(spaces[y].dim(), spaces[x].dim()));
            maps.insert((y, x), m);
        }
        if let Some((y, x)) = cover_maps.keys().find(|k| !maps.contains_key(k)) {
            return Err(Error::Schema(format!("cover map {}<:{} is not along a cover", poset.id(*y), poset.id(*x))));
        }
        let products = products.into_iter().filter(|(_, t)| !t.is_empty()).collect();
        let m = SupportModule { poset, spaces, cover_maps: maps, products, weight_offset };
        m.validate()?;
        Ok(m)
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.poset
    }

    pub fn space(&self, x: usize) -> &GradedSpace {
        &self.spaces[x]
    }

    pub fn cover_map(&self, y: usize, x: usize) -> Option<&RatMatrix> {
        self.cover_maps.get(&(y, x))
    }

    pub fn cover_maps(&self) -> &BTreeMap<(usize, usize), RatMatrix> {
        &self.cover_maps
    }

    pub fn product(&self, x: usize, y: usize, t: usize) -> Option<&ProductTable> {
        self.products.get(&(x, y, t))
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize, usize), ProductTable> {
        &self.products
    }

    pub fn weight_offset(&self, x: usize) -> i32 {
        self.weight_offset[x]
    }

    /// Product of two elements of the spaces at `x` and `y`, landing at `t`.
    pub fn multiply(&self, x: usize, a: &SparseVec, y: usize, b: &SparseVec, t: usize) -> SparseVec {
        let mut out = SparseVec::new();
        if let Some(tab) = self.product(x, y, t) {
            for (i, ci) in a.iter() {
                for (j, cj) in b.iter() {
                    if let Some(v) = tab.get(&(*i, *j)) {
                        out.add_scaled(v, &(ci * cj));
                    }
                }
            }
        }
        out
    }

    /// Checks every identity the E1 construction relies on and names the
    /// first one that fails.
    pub fn validate(&self) -> Result<()> {
        let l = &self.poset;
        let id = |x: usize| l.id(x).to_string();
        for ((y, x), m) in &self.cover_maps {
            if m.nrows() != self.spaces[*y].dim() || m.ncols() != self.spaces[*x].dim() {
                return Err(Error::Schema(format!("cover map {}<:{} has the wrong shape", id(*y), id(*x))));
            }
            for (j, col) in m.columns().iter().enumerate() {
                if col.iter().any(|(i, _)| self.spaces[*y].degrees[*i] != self.spaces[*x].degrees[j]) {
                    return Err(violation(format!("degree preservation fails for g at {}<:{}", id(*y), id(*x))));
                }
            }
        }
        // compositions g_zy g_yx agree for all y between z and x
        for x in 0..l.len() {
            let mut via: BTreeMap<usize, RatMatrix> = BTreeMap::new();
            for y in l.lower_covers(x) {
                for z in l.lower_covers(*y) {
                    let c = self.cover_maps[&(*z, *y)].mul(&self.cover_maps[&(*y, x)]);
                    match via.get(z) {
                        Some(prev) if *prev != c => {
                            return Err(violation(format!("square commutation fails from {} to {}", id(x), id(*z))))
                        }
                        _ => {
                            via.insert(*z, c);
                        }
                    }
                }
            }
        }
        for ((x, y, t), tab) in &self.products {
            if !l.independent_joins(*x, *y).contains(t) {
                return Err(violation(format!("product {}*{}->{} is not along an independent join", id(*x), id(*y), id(*t))));
            }
            for ((i, j), v) in tab {
                let (sx, sy, st) = (&self.spaces[*x], &self.spaces[*y], &self.spaces[*t]);
                if *i >= sx.dim() || *j >= sy.dim() || v.max_index().is_some_and(|k| k >= st.dim()) {
                    return Err(Error::Schema(format!("product {}*{}->{} has an index out of range", id(*x), id(*y), id(*t))));
                }
                if v.iter().any(|(k, _)| st.degrees[*k] != sx.degrees[*i] + sy.degrees[*j]) {
                    return Err(violation(format!("degree additivity fails for {}*{}->{}", id(*x), id(*y), id(*t))));
                }
                let s = if sx.degrees[*i] * sy.degrees[*j] % 2 != 0 { -q_one() } else { q_one() };
                let w = self.product(*y, *x, *t).and_then(|o| o.get(&(*j, *i))).cloned().unwrap_or_default();
                if *v != w.scaled(&s) {
                    return Err(violation(format!("graded commutativity fails for {}*{}->{}", id(*x), id(*y), id(*t))));
                }
            }
        }
        self.check_unit()?;
        self.check_projection_formula()
    }

    /// The degree-0 basis vector `1` of the ambient space acts as the identity.
    fn check_unit(&self) -> Result<()> {
        let s0 = &self.spaces[0];
        if s0.dim() == 0 || s0.degrees[0] != 0 || s0.block(0).len() != 1 {
            return Err(violation("unit: the ambient space needs a single degree-0 class".into()));
        }
        for x in 0..self.poset.len() {
            for i in 0..self.spaces[x].dim() {
                let e = SparseVec::unit(i);
                if self.multiply(0, &SparseVec::unit(0), x, &e, x) != e {
                    return Err(violation(format!("unit law fails on {}", self.poset.id(x))));
                }
            }
        }
        Ok(())
    }

    /// `g_{st}(a·b) = g_{x'x}(a)·b` when `s <: t` lies over `x' <: x` and `y`,
    /// and symmetrically on the other factor.
    fn check_projection_formula(&self) -> Result<()> {
        let l = &self.poset;
        for (x, y, t) in self.products.keys() {
            for s in l.lower_covers(*t) {
                for (side, (u, v)) in [(0, (*x, *y)), (1, (*y, *x))] {
                    if !l.leq(v, *s) || l.leq(u, *s) {
                        continue;
                    }
                    for u2 in l.lower_covers(u) {
                        if !l.independent_joins(*u2, v).contains(s) {
                            continue;
                        }
                        let g_top = &self.cover_maps[&(*s, *t)];
                        let g_low = &self.cover_maps[&(*u2, u)];
                        for i in 0..self.spaces[u].dim() {
                            for j in 0..self.spaces[v].dim() {
                                let (a, b) = (SparseVec::unit(i), SparseVec::unit(j));
                                let (lhs, rhs) = if side == 0 {
                                    (g_top.mul_vec(&self.multiply(u, &a, v, &b, *t)), self.multiply(*u2, &g_low.mul_vec(&a), v, &b, *s))
                                } else {
                                    (g_top.mul_vec(&self.multiply(v, &b, u, &a, *t)), self.multiply(v, &b, *u2, &g_low.mul_vec(&a), *s))
                                };
                                if lhs != rhs {
                                    return Err(violation(format!(
                                        "projection formula fails for {}*{}->{} over {}",
                                        l.id(*x),
                                        l.id(*y),
                                        l.id(*t),
                                        l.id(*s)
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self, x: usize) -> i64 {
        self.spaces[x].euler_characteristic()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(|s| s.dim()).sum()
    }

    /// Same data on the cubical lattice: the space at `(x, I)` is the space at
    /// `x`, covers with the same vertex carry the identity. Products of
    /// disjoint atom sets must land on an independent join in `L`.
    pub fn pullback_to_cubical(&self, q_lat: &CubicalLattice) -> Result<SupportModule> {
        let qp = &q_lat.poset;
        let v = &q_lat.vertex;
        let spaces: Vec<GradedSpace> = (0..qp.len()).map(|a| self.spaces[v[a]].clone()).collect();
        let mut maps = BTreeMap::new();
        for (b, a) in qp.covers() {
            let m = if v[a] == v[b] {
                RatMatrix::identity(spaces[a].dim())
            } else {
                self.cover_maps
                    .get(&(v[b], v[a]))
                    .cloned()
                    .ok_or_else(|| violation(format!("{} <: {} does not lie over a cover", qp.id(b), qp.id(a))))?
            };
            maps.insert((b, a), m);
        }
        let mut products = BTreeMap::new();
        for a in 0..qp.len() {
            for b in 0..qp.len() {
                for c in qp.independent_joins(a, b) {
                    if q_lat.atomset[a] & q_lat.atomset[b] != 0 {
                        continue;
                    }
                    let (x, y, t) = (v[a], v[b], v[c]);
                    if let Some(tab) = self.product(x, y, t) {
                        products.insert((a, b, c), tab.clone());
                    } else if !self.poset.independent_joins(x, y).contains(&t) && self.spaces[x].dim() * self.spaces[y].dim() > 0 {
                        return Err(violation(format!(
                            "{} and {} meet with excess intersection at {}",
                            qp.id(a),
                            qp.id(b),
                            qp.id(c)
                        )));
                    }
                }
            }
        }
        let offsets = (0..qp.len()).map(|a| self.weight_offset[v[a]]).collect();
        SupportModule::new(qp.clone(), spaces, maps, products, offsets)
    }
}

/// `t^{c_x} Q[t]/t^{n+1}` at each `x`; `c_x = n+1` encodes an empty stratum.
pub fn projective_support(n: usize, poset: &GradedPoset, codims: &[usize]) -> Result<SupportModule> {
    if codims.len() != poset.len() {
        return Err(Error::Schema("one codimension per poset element is required".into()));
    }
    if codims[0] != 0 {
        return Err(Error::CodimMonotonicityViolation(format!("the least element {} must have codim 0", poset.id(0))));
    }
    if let Some(x) = codims.iter().position(|c| *c > n + 1) {
        return Err(Error::Schema(format!("codim of {} exceeds n+1", poset.id(x))));
    }
    let powers = |x: usize| -> Vec<usize> { (codims[x]..=n).collect() };
    let spaces = (0..poset.len())
        .map(|x| {
            let p = powers(x);
            GradedSpace {
                degrees: p.iter().map(|j| 2 * *j as i32).collect(),
                labels: p.iter().map(|j| if *j == 0 { "1".to_string() } else { format!("t^{j}") }).collect(),
            }
        })
        .collect();
    let mut maps = BTreeMap::new();
    for (y, x) in poset.covers() {
        if codims[y] >= codims[x] {
            return Err(Error::CodimMonotonicityViolation(format!(
                "{} <: {} but codims are {} and {}",
                poset.id(y),
                poset.id(x),
                codims[y],
                codims[x]
            )));
        }
        let off = codims[x] - codims[y];
        let entries = (0..powers(x).len()).map(|j| (j + off, j, q(1)));
        maps.insert((y, x), RatMatrix::from_entries(powers(y).len(), powers(x).len(), entries));
    }
    let mut products = BTreeMap::new();
    for x in 0..poset.len() {
        for y in 0..poset.len() {
            for t in poset.independent_joins(x, y) {
                let mut tab = ProductTable::new();
                for (i, a) in powers(x).iter().enumerate() {
                    for (j, b) in powers(y).iter().enumerate() {
                        let e = a + b;
                        if e > n {
                            continue;
                        }
                        if e < codims[t] {
                            return Err(violation(format!(
                                "{} and {} have codims adding to less than that of {}",
                                poset.id(x),
                                poset.id(y),
                                poset.id(t)
                            )));
                        }
                        tab.insert((i, j), SparseVec::unit(e - codims[t]));
                    }
                }
                products.insert((x, y, t), tab);
            }
        }
    }
    let offsets = codims.iter().map(|c| 2 * (*c).min(n) as i32).collect();
    SupportModule::new(poset.clone(), spaces, maps, products, offsets)
}

/// `Q` in degree `2r(x)` for linear subspaces of `C^n`: Thom classes
/// multiply to Thom classes along independent joins.
pub fn affine_support(n: usize, poset: &GradedPoset) -> Result<SupportModule> {
    let ranks: Vec<usize> = (0..poset.len()).map(|x| poset.rank(x)).collect();
    affine_support_with_codims(n, poset, &ranks)
}

/// Affine subspaces of complex codimension `codims[x]`: one class `τ_x` in
/// degree `2·codims[x]`, zero Gysin maps, and `τ_x·τ_y = τ_t` exactly when
/// `t` is an independent join meeting transversally.
pub fn affine_support_with_codims(n: usize, poset: &GradedPoset, codims: &[usize]) -> Result<SupportModule> {
    if codims.len() != poset.len() {
        return Err(Error::Schema("one codimension per poset element is required".into()));
    }
    if let Some(x) = codims.iter().position(|c| *c > n) {
        return Err(Error::Schema(format!("codim {} of {} exceeds the dimension {n}", codims[x], poset.id(x))));
    }
    if codims[poset.bottom()] != 0 {
        return Err(Error::CodimMonotonicityViolation(format!("the least element {} must have codim 0", poset.id(poset.bottom()))));
    }
    for (y, x) in poset.covers() {
        if codims[x] <= codims[y] {
            return Err(Error::CodimMonotonicityViolation(format!("codim does not grow from {} to {}", poset.id(y), poset.id(x))));
        }
    }
    let spaces = (0..poset.len())
        .map(|x| GradedSpace { degrees: vec![2 * codims[x] as i32], labels: vec![format!("τ_{}", poset.id(x))] })
        .collect();
    let mut products = BTreeMap::new();
    for x in 0..poset.len() {
        for y in 0..poset.len() {
            for t in poset.independent_joins(x, y) {
                let tab: ProductTable = if codims[t] == codims[x] + codims[y] {
                    [((0, 0), SparseVec::unit(0))].into_iter().collect()
                } else {
                    ProductTable::new()
                };
                products.insert((x, y, t), tab);
            }
        }
    }
    let offsets = codims.iter().map(|c| 2 * *c as i32).collect();
    SupportModule::new(poset.clone(), spaces, BTreeMap::new(), products, offsets)
}

/// Everything needed to check the Gysin maps of a diagonal arrangement.
#[derive(Clone, Debug)]
pub struct DiagonalGeometry {
    pub poset: GradedPoset,
    /// Poincaré pairing of `H*(M^{k_x})` at each `x`.
    pub pairings: Vec<RatMatrix>,
    /// Restriction `H*(M^{k_y}) → H*(M^{k_x})` along each cover `y <: x`.
    pub restrictions: BTreeMap<(usize, usize), RatMatrix>,
    /// Thom shift `2·dim_C(M)·r(x)`.
    pub shifts: Vec<i32>,
}

/// Factor map from the blocks of `fine` to the blocks of `coarse`.
fn block_map(fine: &[Vec<usize>], coarse: &[Vec<usize>]) -> Vec<usize> {
    fine.iter().map(|b| coarse.iter().position(|c| c.contains(&b[0])).expect("refinement")).collect()
}

pub fn diagonal_geometry(ring: &GradedRing, graph: &Graph) -> Result<DiagonalGeometry> {
    let top = ring.top_degree().ok_or(Error::NoPairing)?;
    if top % 2 != 0 {
        return Err(Error::OddTopDegree);
    }
    let poset = partition_lattice(graph);
    let blocks: Vec<Vec<Vec<usize>>> = poset.ids().iter().map(|s| partition_blocks(s)).collect();
    let powers: Vec<TensorPower> = blocks.iter().map(|b| TensorPower::new(ring, b.len())).collect();
    let pairings = powers.iter().map(|p| p.pairing_matrix().expect("ring has a top class")).collect();
    let mut restrictions = BTreeMap::new();
    for (y, x) in poset.covers() {
        let f = block_map(&blocks[y], &blocks[x]);
        restrictions.insert((y, x), restriction_matrix(&powers[y], &powers[x], &f));
    }
    let shifts = (0..poset.len()).map(|x| (top * poset.rank(x) as u32) as i32).collect();
    Ok(DiagonalGeometry { poset, pairings, restrictions, shifts })
}

/// `H*(M^{k_x})` shifted by the Thom degree at each partition `x`; Gysin maps
/// are pairing adjoints of the Künneth restrictions.
pub fn diagonal_support(ring: &GradedRing, graph: &Graph) -> Result<SupportModule> {
    let geo = diagonal_geometry(ring, graph)?;
    let poset = &geo.poset;
    let blocks: Vec<Vec<Vec<usize>>> = poset.ids().iter().map(|s| partition_blocks(s)).collect();
    let powers: Vec<TensorPower> = blocks.iter().map(|b| TensorPower::new(ring, b.len())).collect();
    let spaces = (0..poset.len())
        .map(|x| {
            let p = &powers[x];
            GradedSpace {
                degrees: (0..p.dim()).map(|i| p.degree(i) as i32 + geo.shifts[x]).collect(),
                labels: (0..p.dim()).map(|i| p.label(i)).collect(),
            }
        })
        .collect();
    let mut maps = BTreeMap::new();
    for ((y, x), res) in &geo.restrictions {
        maps.insert((*y, *x), pairing_adjoint(res, &geo.pairings[*x], &geo.pairings[*y])?);
    }
    let mut products = BTreeMap::new();
    for x in 0..poset.len() {
        for y in 0..poset.len() {
            for t in poset.independent_joins(x, y) {
                let rx = restriction_matrix(&powers[x], &powers[t], &block_map(&blocks[x], &blocks[t]));
                let ry = restriction_matrix(&powers[y], &powers[t], &block_map(&blocks[y], &blocks[t]));
                let mut tab = ProductTable::new();
                for i in 0..powers[x].dim() {
                    for j in 0..powers[y].dim() {
                        let v = powers[t].mul(rx.column(i), ry.column(j));
                        if !v.is_zero() {
                            tab.insert((i, j), v);
                        }
                    }
                }
                products.insert((x, y, t), tab);
            }
        }
    }
    SupportModule::new(poset.clone(), spaces, maps, products, geo.shifts.clone())
}

pub use json::custom_support;
