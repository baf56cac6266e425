//! Čech complexes and the Möbius inversion algebra `Â` of a cubical diagram of
//! finite-dimensional dg-algebras.
//!
//! A cubical diagram assigns an algebra `A^I` to every subset `I` of the atom
//! set `N = {0, .., n-1}` and a map `g_{JI}: A^I → A^J` to every `I ⊆ J`.
//! Subsets are bitmasks.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::dga::{sign, FiniteDga};
use crate::error::{Error, Result};
use crate::exactla::{fmt_q, parse_q_json, q, RatMatrix, SparseVec};
use crate::oscomplex::{contraction_sign, members, wedge_sign, Mask};
use crate::poset::subset_id;

mod json;
mod verify;


pub use verify::{quasi_isomorphism, verify_hat, verify_hat_algebra, HatReport};

pub const MAX_ATOMS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalDiagram {
    atoms: usize,
    algebras: Vec<FiniteDga>,
    /// `g_{JI}` for `J = I + {k}`, keyed `(J, I)`.
    cover_maps: BTreeMap<(Mask, Mask), RatMatrix>,
}

fn is_subset(i: Mask, j: Mask) -> bool {
    i & !j == 0
}

impl CubicalDiagram {
    pub fn new(atoms: usize, algebras: Vec<FiniteDga>, cover_maps: BTreeMap<(Mask, Mask), RatMatrix>) -> Result<Self> {
        if atoms > MAX_ATOMS {
            return Err(Error::Schema(format!("cubical diagrams are limited to {MAX_ATOMS} atoms")));
        }
        if algebras.len() != 1 << atoms {
            return Err(Error::Schema(format!("expected {} algebras, got {}", 1 << atoms, algebras.len())));
        }
        let d = CubicalDiagram { atoms, algebras, cover_maps };
        d.validate()?;
        Ok(d)
    }

    /// Every algebra equal to `a`, every structure map the identity.
    pub fn constant(a: &FiniteDga, atoms: usize) -> Result<Self> {
        let mut maps = BTreeMap::new();
        for i in 0..1u64 << atoms {
            for k in 0..atoms {
                if i >> k & 1 == 0 {
                    maps.insert((i | 1 << k, i), RatMatrix::identity(a.dim()));
                }
            }
        }
        CubicalDiagram::new(atoms, vec![a.clone(); 1 << atoms], maps)
    }

    pub fn trivial(atoms: usize) -> Result<Self> {
        CubicalDiagram::constant(&rational_numbers(), atoms)
    }

    /// `A⁰ → A¹` along `f`.
    pub fn single_atom(a0: FiniteDga, a1: FiniteDga, f: RatMatrix) -> Result<Self> {
        CubicalDiagram::new(1, vec![a0, a1], [((1, 0), f)].into_iter().collect())
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn full(&self) -> Mask {
        (1u64 << self.atoms) - 1
    }

    pub fn algebra(&self, i: Mask) -> &FiniteDga {
        &self.algebras[i as usize]
    }

    pub fn cover_map(&self, j: Mask, i: Mask) -> Option<&RatMatrix> {
        self.cover_maps.get(&(j, i))
    }

    pub fn cover_maps(&self) -> &BTreeMap<(Mask, Mask), RatMatrix> {
        &self.cover_maps
    }

    /// `g_{JI}` as the composite of covers adding the atoms of `J - I` in
    /// increasing order.
    pub fn structure_map(&self, j: Mask, i: Mask) -> RatMatrix {
        assert!(is_subset(i, j), "structure maps go up");
        let mut m = RatMatrix::identity(self.algebra(i).dim());
        let mut cur = i;
        for k in members(j & !i) {
            let next = cur | 1 << k;
            m = self.cover_maps[&(next, cur)].mul(&m);
            cur = next;
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.atoms;
        for i in 0..1u64 << n {
            for k in 0..n {
                if i >> k & 1 == 1 {
                    continue;
                }
                let j = i | 1 << k;
                let (src, dst) = (self.algebra(i), self.algebra(j));
                let Some(g) = self.cover_map(j, i) else {
                    return Err(Error::Schema(format!("missing map {} -> {}", subset_id(i, n), subset_id(j, n))));
                };
                if g.nrows() != dst.dim() || g.ncols() != src.dim() {
                    return Err(Error::Schema(format!(
                        "map {} -> {} has shape {}x{}, expected {}x{}",
                        subset_id(i, n),
                        subset_id(j, n),
                        g.nrows(),
                        g.ncols(),
                        dst.dim(),
                        src.dim()
                    )));
                }
                let name = format!("{} -> {}", subset_id(i, n), subset_id(j, n));
                for a in 0..src.dim() {
                    if g.column(a).iter().any(|(b, _)| dst.degree(*b) != src.degree(a)) {
                        return Err(Error::InvariantViolation(format!("degree preservation fails for {name}")));
                    }
                    if g.mul_vec(src.d_basis(a)) != dst.d(g.column(a)) {
                        return Err(Error::InvariantViolation(format!("map {name} does not commute with d")));
                    }
                    for b in 0..src.dim() {
                        let lhs = g.mul_vec(&src.mul(&SparseVec::unit(a), &SparseVec::unit(b)));
                        if lhs != dst.mul(g.column(a), g.column(b)) {
                            return Err(Error::InvariantViolation(format!("map {name} is not multiplicative")));
                        }
                    }
                }
            }
        }
        for i in 0..1u64 << n {
            for (a, b) in pairs_outside(i, n) {
                let (ia, ib, ab) = (i | 1 << a, i | 1 << b, i | 1 << a | 1 << b);
                let one = self.cover_maps[&(ab, ia)].mul(&self.cover_maps[&(ia, i)]);
                let two = self.cover_maps[&(ab, ib)].mul(&self.cover_maps[&(ib, i)]);
                if one != two {
                    return Err(Error::InvariantViolation(format!(
                        "composition of structure maps fails on the square {} -> {}",
                        subset_id(i, n),
                        subset_id(ab, n)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        json::diagram_to_json(self)
    }

    pub fn from_json(text: &str) -> Result<CubicalDiagram> {
        json::diagram_from_json(text)
    }
}

fn pairs_outside(i: Mask, n: usize) -> Vec<(usize, usize)> {
    let free: Vec<usize> = (0..n).filter(|k| i >> k & 1 == 0).collect();
    let mut out = Vec::new();
    for (x, a) in free.iter().enumerate() {
        for b in &free[x + 1..] {
            out.push((*a, *b));
        }
    }
    out
}

/// `ℚ` in degree 0.
pub fn rational_numbers() -> FiniteDga {
    FiniteDga::new(vec![0], vec![SparseVec::new()], [((0, 0), SparseVec::unit(0))])
}

/// The ideal `(t^m)` of `ℚ[t]/t^k` with `|t| = 2`; unital when `m = 0`.
pub fn truncated_polynomial(k: usize, m: usize) -> FiniteDga {
    let powers: Vec<usize> = (m..k).collect();
    let degrees = powers.iter().map(|p| 2 * *p as i32).collect();
    let mut prods = Vec::new();
    for (i, a) in powers.iter().enumerate() {
        for (j, b) in powers.iter().enumerate() {
            if a + b < k {
                prods.push(((i, j), SparseVec::unit(a + b - m)));
            }
        }
    }
    FiniteDga::new(degrees, vec![SparseVec::new(); powers.len()], prods)
}

/// Inclusion `(t^m) ⊂ (t^{m'})` inside `ℚ[t]/t^k`, `m ≥ m'`.
pub fn ideal_inclusion(k: usize, m: usize, m2: usize) -> RatMatrix {
    RatMatrix::from_entries(k - m2, k - m, (m..k).map(|p| (p - m2, p - m, q(1))))
}

/// `ℚ[t]/t^k → ℚ[t]/t^{k'}`, `k ≥ k'`.
pub fn truncation(k: usize, k2: usize) -> RatMatrix {
    RatMatrix::from_entries(k2, k, (0..k2).map(|p| (p, p, q(1))))
}

/// `Λ(x) ⊗ ℚ[y]/y²` with `dx = y`, basis `1, x, y, xy`.
pub fn koszul_pair() -> FiniteDga {
    let degrees = vec![0, 1, 2, 3];
    let diff = vec![SparseVec::new(), SparseVec::unit(2), SparseVec::new(), SparseVec::new()];
    let mut prods = vec![((1, 2), SparseVec::unit(3)), ((2, 1), SparseVec::unit(3))];
    for i in 0..4 {
        prods.push(((0, i), SparseVec::unit(i)));
        if i > 0 {
            prods.push(((i, 0), SparseVec::unit(i)));
        }
    }
    FiniteDga::new(degrees, diff, prods)
}

/// Augmentation of [`koszul_pair`] onto `ℚ`.
pub fn augmentation() -> RatMatrix {
    RatMatrix::from_entries(1, 4, [(0, 0, q(1))])
}

pub const DIAGRAM_NAMES: [&str; 4] = ["trivial", "truncation", "ideal-square", "augmented-cube"];

/// Built-in diagrams: `trivial` (ℚ on two atoms), `truncation`
/// (`ℚ[t]/t³ → ℚ[t]/t²`), `ideal-square` (`A^I = (t^{2-|I|}) ⊂ ℚ[t]/t⁴`
/// with the inclusions of ideals) and `augmented-cube` (the Koszul pair at
/// `∅` augmented onto `ℚ` over three atoms).
pub fn named_diagram(name: &str) -> Result<CubicalDiagram> {
    match name {
        "trivial" => CubicalDiagram::trivial(2),
        "truncation" => {
            CubicalDiagram::single_atom(truncated_polynomial(3, 0), truncated_polynomial(2, 0), truncation(3, 2))
        }
        "ideal-square" => {
            let algebras = (0..4u64).map(|i| truncated_polynomial(4, 2 - i.count_ones() as usize)).collect();
            let mut maps = BTreeMap::new();
            for i in 0..4u64 {
                for k in (0..2).filter(|k| i >> k & 1 == 0) {
                    let m = 2 - i.count_ones() as usize;
                    maps.insert((i | 1 << k, i), ideal_inclusion(4, m, m - 1));
                }
            }
            CubicalDiagram::new(2, algebras, maps)
        }
        "augmented-cube" => {
            let algebras = (0..8u64).map(|i| if i == 0 { koszul_pair() } else { rational_numbers() }).collect();
            let mut maps = BTreeMap::new();
            for i in 0..8u64 {
                for k in (0..3).filter(|k| i >> k & 1 == 0) {
                    let m = if i == 0 { augmentation() } else { RatMatrix::identity(1) };
                    maps.insert((i | 1 << k, i), m);
                }
            }
            CubicalDiagram::new(3, algebras, maps)
        }
        _ => Err(Error::Schema(format!("unknown diagram {name:?}; known: {}", DIAGRAM_NAMES.join(", ")))),
    }
}

/// `Č(A)_I = ⊕_{K ⊆ I} A^K·dτ^K` with the Čech differential.
#[derive(Clone, Debug)]
pub struct CechModule {
    /// `(K, basis index in A^K)` per basis vector.
    pub cells: Vec<(Mask, usize)>,
    pub complex: FiniteDga,
}

pub fn cech(diag: &CubicalDiagram, i: Mask) -> Result<CechModule> {
    if !is_subset(i, diag.full()) {
        return Err(Error::Schema(format!("{i:#b} is not a subset of the atoms")));
    }
    let mut ks: Vec<Mask> = (0..=i).filter(|k| is_subset(*k, i)).collect();
    ks.sort_by_key(|k| (k.count_ones(), *k));
    let mut cells = Vec::new();
    for k in &ks {
        for a in 0..diag.algebra(*k).dim() {
            cells.push((*k, a));
        }
    }
    let index: HashMap<(Mask, usize), usize> = cells.iter().enumerate().map(|(n, c)| (*c, n)).collect();
    let mut degrees = Vec::with_capacity(cells.len());
    let mut diff = Vec::with_capacity(cells.len());
    for (k, a) in &cells {
        let alg = diag.algebra(*k);
        degrees.push(alg.degree(*a) + k.count_ones() as i32);
        let mut v = SparseVec::from_pairs(alg.d_basis(*a).iter().map(|(b, c)| (index[&(*k, *b)], c.clone())));
        let s = sign(alg.degree(*a).rem_euclid(2) == 1);
        for p in members(i & !k) {
            let kp = k | 1 << p;
            let w = q(wedge_sign(1 << p, *k).expect("p is outside K") as i64);
            let g = diag.cover_map(kp, *k).expect("validated diagram");
            for (b, c) in g.column(*a).iter() {
                v.add_scaled(&SparseVec::unit(index[&(kp, *b)]), &(c * &s * &w));
            }
        }
        diff.push(v);
    }
    Ok(CechModule { cells, complex: FiniteDga::new(degrees, diff, std::iter::empty()) })
}

/// A basis vector `a·(dμ_I)^K` of `Â` with `a` in `A^{K∖I}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HatCell {
    pub i: Mask,
    pub k: Mask,
    pub a: usize,
}

#[derive(Clone, Debug)]
pub struct HatAlgebra {
    nset: Mask,
    atoms: usize,
    cells: Vec<HatCell>,
    index: HashMap<HatCell, usize>,
    dga: FiniteDga,
}

/// `Â^N = ⊕_{I ⊆ K ⊆ N} A^{K∖I}·(dμ_I)^K` with differential `δ + d` and the
/// product `m̂`.
pub fn hat(diag: &CubicalDiagram, nset: Mask) -> Result<HatAlgebra> {
    if !is_subset(nset, diag.full()) {
        return Err(Error::Schema(format!("{nset:#b} is not a subset of the atoms")));
    }
    let subsets: Vec<Mask> = (0..=nset).filter(|k| is_subset(*k, nset)).collect();
    let mut cells = Vec::new();
    for k in &subsets {
        for i in subsets.iter().filter(|i| is_subset(**i, *k)) {
            for a in 0..diag.algebra(k & !i).dim() {
                cells.push(HatCell { i: *i, k: *k, a });
            }
        }
    }
    cells.sort_by_key(|c| (c.k.count_ones(), c.k, c.i.count_ones(), c.i, c.a));
    let index: HashMap<HatCell, usize> = cells.iter().enumerate().map(|(n, c)| (*c, n)).collect();
    let cell = |i: Mask, k: Mask, a: usize| index[&HatCell { i, k, a }];

    let mut gmaps: HashMap<(Mask, Mask), RatMatrix> = HashMap::new();
    for j in &subsets {
        for i in subsets.iter().filter(|i| is_subset(**i, *j)) {
            gmaps.insert((*j, *i), diag.structure_map(*j, *i));
        }
    }

    let mut degrees = Vec::with_capacity(cells.len());
    let mut diff = Vec::with_capacity(cells.len());
    for c in &cells {
        let src = c.k & !c.i;
        let alg = diag.algebra(src);
        let deg_a = alg.degree(c.a);
        degrees.push(deg_a - c.i.count_ones() as i32);
        let mut v = SparseVec::from_pairs(alg.d_basis(c.a).iter().map(|(b, x)| (cell(c.i, c.k, *b), x.clone())));
        for p in members(c.i) {
            let s = q(contraction_sign(c.i, p) as i64) * sign(deg_a.rem_euclid(2) == 1);
            let ip = c.i & !(1 << p);
            // δ^{I⊆K}_{I-p⊆K}: g then ι_p
            for (b, x) in gmaps[&(src | 1 << p, src)].column(c.a).iter() {
                v.add_scaled(&SparseVec::unit(cell(ip, c.k, *b)), &(x * &s));
            }
            // δ^{I⊆K}_{I-p⊆K-p}: -ι_p
            v.add_scaled(&SparseVec::unit(cell(ip, c.k & !(1 << p), c.a)), &-s);
        }
        diff.push(v);
    }

    let mut prods = Vec::new();
    for (x, c) in cells.iter().enumerate() {
        let sa = c.k & !c.i;
        for (y, e) in cells.iter().enumerate() {
            if c.i & e.i != 0 {
                continue;
            }
            let sb = e.k & !e.i;
            let t = (c.k | e.k) & !(c.i | e.i);
            if sa | sb != t {
                continue;
            }
            let alg = diag.algebra(t);
            let deg_b = diag.algebra(sb).degree(e.a);
            let s = q(wedge_sign(c.i, e.i).unwrap() as i64)
                * sign((c.i.count_ones() as i32 * deg_b).rem_euclid(2) == 1);
            let v = alg.mul(gmaps[&(t, sa)].column(c.a), gmaps[&(t, sb)].column(e.a));
            if v.is_zero() {
                continue;
            }
            let (io, ko) = (c.i | e.i, c.k | e.k);
            prods.push(((x, y), SparseVec::from_pairs(v.iter().map(|(b, z)| (cell(io, ko, *b), z * &s)))));
        }
    }
    let dga = FiniteDga::new(degrees, diff, prods);
    Ok(HatAlgebra { nset, atoms: diag.atoms(), cells, index, dga })
}

impl HatAlgebra {
    pub fn nset(&self) -> Mask {
        self.nset
    }

    pub fn cells(&self) -> &[HatCell] {
        &self.cells
    }

    pub fn cell_index(&self, c: &HatCell) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn dga(&self) -> &FiniteDga {
        &self.dga
    }

    pub fn dga_mut(&mut self) -> &mut FiniteDga {
        &mut self.dga
    }

    pub fn dim(&self) -> usize {
        self.cells.len()
    }

    /// Rank filtration index `|K|`.
    pub fn weight(&self, n: usize) -> u32 {
        self.cells[n].k.count_ones()
    }

    pub fn label(&self, n: usize) -> String {
        let c = &self.cells[n];
        let i: Vec<String> = members(c.i).iter().map(|p| p.to_string()).collect();
        format!("e{}·(dμ_{{{}}})^{}", c.a, i.join(","), subset_id(c.k, self.atoms))
    }

    pub fn to_json(&self) -> Value {
        let d = &self.dga;
        let differential: Vec<Value> = (0..d.dim())
            .flat_map(|s| d.d_basis(s).iter().map(move |(t, c)| json!([s, t, fmt_q(c)])).collect::<Vec<_>>())
            .collect();
        let products: Vec<Value> = (0..d.dim())
            .flat_map(|i| {
                d.product_row(i)
                    .iter()
                    .flat_map(move |(j, v)| v.iter().map(move |(k, c)| json!([i, j, k, fmt_q(c)])))
                    .collect::<Vec<_>>()
            })
            .collect();
        json!({
            "basis": (0..self.dim()).map(|n| json!({"label": self.label(n), "degree": d.degree(n), "weight": self.weight(n)})).collect::<Vec<_>>(),
            "differential": differential,
            "products": products,
        })
    }
}

pub(crate) fn parse_rows(v: &Value) -> Result<Vec<Vec<crate::exactla::Q>>> {
    let rows = v.as_array().ok_or_else(|| Error::Schema("matrix must be an array of rows".into()))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Schema("matrix row must be an array".into()))?
                .iter()
                .map(parse_q_json)
                .collect()
        })
        .collect()
}
