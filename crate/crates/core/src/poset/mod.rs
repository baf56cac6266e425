//! Finite graded posets with a bottom element.

mod build;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};

pub use build::{cubical_lattice, intersection_poset, partition_blocks, partition_lattice, CubicalLattice};

/// A finite graded poset with a least element. Elements are indexed by
/// `usize`; indices are sorted by `(rank, id)` so they form a linear extension.
#[derive(Clone, Debug)]
pub struct GradedPoset {
    ids: Vec<String>,
    rank: Vec<usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    upset: Vec<Bits>,
    atoms: Vec<usize>,
    atoms_below: Vec<Bits>,
    mobius: Vec<i64>,
}

impl Eq for GradedPoset {}

impl PartialEq for GradedPoset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.rank == other.rank && self.up == other.up
    }
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    elements: Vec<ElementJson>,
    covers: Vec<[String; 2]>,
    atoms: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    id: String,
    rank: usize,
}

impl GradedPoset {
    /// Builds from element ids and cover pairs `(lower, upper)`. Ranks are the
    /// lengths of chains from the unique minimal element; fails with
    /// `NotGradable` if two chains disagree.
    pub fn from_covers(ids: Vec<String>, covers: &[(String, String)]) -> Result<GradedPoset> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::Schema("poset has no elements".into()));
        }
        let mut tmp_index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if tmp_index.insert(id.clone(), i).is_some() {
                return Err(Error::Schema(format!("duplicate element {id:?}")));
            }
        }
        let look = |s: &String| tmp_index.get(s).copied().ok_or_else(|| Error::UnknownElement(s.clone()));
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for (lo, hi) in covers {
            let (a, b) = (look(lo)?, look(hi)?);
            if a == b {
                return Err(Error::Schema(format!("cover of {lo:?} by itself")));
            }
            up[a].push(b);
            down[b].push(a);
        }
        let minimal: Vec<usize> = (0..n).filter(|i| down[*i].is_empty()).collect();
        if minimal.len() != 1 {
            return Err(Error::NotGradable(format!("{} minimal elements, need exactly one", minimal.len())));
        }
        // ranks by Kahn's algorithm; a rank conflict means no grading
        let mut rank: Vec<Option<usize>> = vec![None; n];
        rank[minimal[0]] = Some(0);
        let mut indeg: Vec<usize> = down.iter().map(|d| d.len()).collect();
        let mut queue = vec![minimal[0]];
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            let r = rank[v].unwrap();
            for &w in &up[v] {
                match rank[w] {
                    None => rank[w] = Some(r + 1),
                    Some(s) if s != r + 1 => {
                        return Err(Error::NotGradable(format!(
                            "{:?} is reached by chains of lengths {s} and {}",
                            ids[w],
                            r + 1
                        )))
                    }
                    _ => {}
                }
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if seen != n {
            return Err(Error::Schema("cover relation has a cycle".into()));
        }
        let rank: Vec<usize> = rank.into_iter().map(|r| r.unwrap()).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|a, b| (rank[*a], &ids[*a]).cmp(&(rank[*b], &ids[*b])));
        let mut new_of = vec![0; n];
        for (k, o) in order.iter().enumerate() {
            new_of[*o] = k;
        }
        let ids2: Vec<String> = order.iter().map(|o| ids[*o].clone()).collect();
        let rank2: Vec<usize> = order.iter().map(|o| rank[*o]).collect();
        let mut up2 = vec![Vec::new(); n];
        let mut down2 = vec![Vec::new(); n];
        for (old, ups) in up.iter().enumerate() {
            for w in ups {
                up2[new_of[old]].push(new_of[*w]);
                down2[new_of[*w]].push(new_of[old]);
            }
        }
        for v in up2.iter_mut().chain(down2.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        Ok(GradedPoset::finish(ids2, rank2, up2, down2))
    }

    fn finish(ids: Vec<String>, rank: Vec<usize>, up: Vec<Vec<usize>>, down: Vec<Vec<usize>>) -> GradedPoset {
        let n = ids.len();
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        // indices form a linear extension, so sweep downwards
        let mut upset = vec![Bits::new(n); n];
        for x in (0..n).rev() {
            let mut b = Bits::new(n);
            b.set(x);
            for &y in &up[x] {
                let u = upset[y].clone();
                b.or_with(&u);
            }
            upset[x] = b;
        }
        let atoms: Vec<usize> = (0..n).filter(|i| rank[*i] == 1).collect();
        let mut atoms_below = vec![Bits::new(atoms.len()); n];
        for (k, a) in atoms.iter().enumerate() {
            for x in upset[*a].ones() {
                atoms_below[x].set(k);
            }
        }
        let mut mobius = vec![0i64; n];
        for x in 0..n {
            if x == 0 {
                mobius[0] = 1;
                continue;
            }
            let s: i64 = (0..x).filter(|y| upset[*y].get(x)).map(|y| mobius[y]).sum();
            mobius[x] = -s;
        }
        GradedPoset { ids, rank, up, down, index, upset, atoms, atoms_below, mobius }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    pub fn max_rank(&self) -> usize {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.up[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    /// All cover pairs `(y, x)` with `y <: x`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.len()).flat_map(|x| self.down[x].iter().map(move |y| (*y, x))).collect();
        out.sort_unstable();
        out
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    /// Atoms below `x`, as a bitset over positions in `atoms()`.
    pub fn atoms_below(&self, x: usize) -> &Bits {
        &self.atoms_below[x]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.upset[a].get(b)
    }

    pub fn leq_ids(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.leq(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn elements_of_rank(&self, r: usize) -> Vec<usize> {
        (0..self.len()).filter(|x| self.rank[*x] == r).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|x| self.up[*x].is_empty()).collect()
    }

    pub fn min_upper_bounds(&self, s: &[usize]) -> Vec<usize> {
        if s.is_empty() {
            return vec![0];
        }
        let mut ub = self.upset[s[0]].clone();
        for x in &s[1..] {
            ub.and_with(&self.upset[*x]);
        }
        let cands: Vec<usize> = ub.ones().collect();
        cands.iter().copied().filter(|t| !cands.iter().any(|u| u != t && self.leq(*u, *t))).collect()
    }

    pub fn min_upper_bounds_ids(&self, s: &[&str]) -> Result<Vec<String>> {
        let idx: Vec<usize> = s.iter().map(|i| self.index_of(i)).collect::<Result<_>>()?;
        Ok(self.min_upper_bounds(&idx).into_iter().map(|x| self.ids[x].clone()).collect())
    }

    /// Maximal lower bounds (meets) of a nonempty set.
    pub fn max_lower_bounds(&self, s: &[usize]) -> Vec<usize> {
        let lbs: Vec<usize> = (0..self.len()).filter(|y| s.iter().all(|x| self.leq(*y, *x))).collect();
        lbs.iter().copied().filter(|t| !lbs.iter().any(|u| u != t && self.leq(*t, *u))).collect()
    }

    /// Minimal upper bounds of a set of atoms given by positions in `atoms()`.
    pub fn sup_of_atoms(&self, atom_positions: &[usize]) -> Vec<usize> {
        let s: Vec<usize> = atom_positions.iter().map(|k| self.atoms[*k]).collect();
        self.min_upper_bounds(&s)
    }

    pub fn moebius(&self, x: usize) -> i64 {
        self.mobius[x]
    }

    pub fn moebius_id(&self, id: &str) -> Result<i64> {
        Ok(self.mobius[self.index_of(id)?])
    }

    /// `t` is an independent join of `x` and `y` when it is a minimal upper
    /// bound of both and its rank is the sum of theirs.
    pub fn independent_joins(&self, x: usize, y: usize) -> Vec<usize> {
        self.min_upper_bounds(&[x, y]).into_iter().filter(|t| self.rank[*t] == self.rank[x] + self.rank[y]).collect()
    }

    /// Every element is a minimal upper bound of the atoms below it.
    pub fn is_atomic(&self) -> bool {
        (1..self.len()).all(|x| {
            let below: Vec<usize> = self.atoms_below[x].ones().collect();
            !below.is_empty() && self.sup_of_atoms(&below).contains(&x)
        })
    }

    /// Every lower interval `[0, t]` is a geometric lattice. Intervals of
    /// geometric lattices are geometric, so only maximal `t` are examined.
    pub fn is_locally_geometric(&self) -> bool {
        self.maximal_elements().into_iter().all(|t| self.interval_is_geometric(t))
    }

    fn interval_is_geometric(&self, t: usize) -> bool {
        let elems: Vec<usize> = (0..self.len()).filter(|x| self.leq(*x, t)).collect();
        for (i, &x) in elems.iter().enumerate() {
            if x != 0 {
                let below: Vec<usize> = self.atoms_below[x].ones().collect();
                if self.sup_of_atoms(&below) != vec![x] {
                    return false;
                }
            }
            for &y in &elems[i + 1..] {
                let joins: Vec<usize> = self.min_upper_bounds(&[x, y]).into_iter().filter(|z| self.leq(*z, t)).collect();
                let meets = self.max_lower_bounds(&[x, y]);
                if joins.len() != 1 || meets.len() != 1 {
                    return false;
                }
                if self.rank[joins[0]] + self.rank[meets[0]] > self.rank[x] + self.rank[y] {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_json(&self) -> String {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|a, b| self.ids[*a].cmp(&self.ids[*b]));
        let elements = order.iter().map(|x| ElementJson { id: self.ids[*x].clone(), rank: self.rank[*x] }).collect();
        let mut covers: Vec<[String; 2]> =
            self.covers().into_iter().map(|(y, x)| [self.ids[y].clone(), self.ids[x].clone()]).collect();
        covers.sort();
        let mut atoms: Vec<String> = self.atoms.iter().map(|a| self.ids[*a].clone()).collect();
        atoms.sort();
        serde_json::to_string_pretty(&PosetJson { elements, covers, atoms }).unwrap()
    }

    /// Reads the JSON form; stated ranks and atoms must agree with the covers.
    pub fn from_json(text: &str) -> Result<GradedPoset> {
        let raw: PosetJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        GradedPoset::from_json_value(raw)
    }

    pub fn from_json_str_value(v: &serde_json::Value) -> Result<GradedPoset> {
        let raw: PosetJson = serde_json::from_value(v.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        GradedPoset::from_json_value(raw)
    }

    fn from_json_value(raw: PosetJson) -> Result<GradedPoset> {
        let ids: Vec<String> = raw.elements.iter().map(|e| e.id.clone()).collect();
        let covers: Vec<(String, String)> = raw.covers.iter().map(|c| (c[0].clone(), c[1].clone())).collect();
        let p = GradedPoset::from_covers(ids, &covers)?;
        for e in &raw.elements {
            let x = p.index_of(&e.id)?;
            if p.rank(x) != e.rank {
                return Err(Error::Schema(format!("element {:?} declared rank {} but has rank {}", e.id, e.rank, p.rank(x))));
            }
        }
        let mut declared = raw.atoms.clone();
        declared.sort();
        let mut actual: Vec<String> = p.atoms().iter().map(|a| p.id(*a).to_string()).collect();
        actual.sort();
        if declared != actual {
            return Err(Error::Schema(format!("declared atoms {declared:?} differ from rank-1 elements {actual:?}")));
        }
        Ok(p)
    }

    /// Boolean lattice on `n` atoms; ids are `{}`, `{0}`, `{0,1}`, ...
    pub fn boolean(n: usize) -> GradedPoset {
        let ids: Vec<String> = (0..1u64 << n).map(|m| subset_id(m, n)).collect();
        let mut covers = Vec::new();
        for m in 0..1u64 << n {
            for i in 0..n {
                if m & (1 << i) == 0 {
                    covers.push((subset_id(m, n), subset_id(m | 1 << i, n)));
                }
            }
        }
        GradedPoset::from_covers(ids, &covers).expect("Boolean lattice is graded")
    }

    /// Element images of a map given on ids; must be a rank-preserving
    /// bijection that maps covers onto covers.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.len() {
            return false;
        }
        let mut seen = perm.to_vec();
        seen.sort_unstable();
        if seen != (0..self.len()).collect::<Vec<_>>() {
            return false;
        }
        let covers: std::collections::BTreeSet<(usize, usize)> = self.covers().into_iter().collect();
        (0..self.len()).all(|x| self.rank[perm[x]] == self.rank[x])
            && covers.iter().all(|(y, x)| covers.contains(&(perm[*y], perm[*x])))
    }

    /// The element map induced by a permutation of atoms (positions in
    /// `atoms()`), sending `x` to the element with the permuted atom set.
    pub fn map_from_atom_permutation(&self, atom_perm: &[usize]) -> Result<Vec<usize>> {
        let mut by_atoms: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for x in 0..self.len() {
            let key: Vec<usize> = self.atoms_below[x].ones().collect();
            if by_atoms.insert(key, x).is_some() {
                return Err(Error::NotAutomorphism("elements are not determined by their atoms".into()));
            }
        }
        let mut out = Vec::with_capacity(self.len());
        for x in 0..self.len() {
            let mut key: Vec<usize> = self.atoms_below[x].ones().map(|k| atom_perm[k]).collect();
            key.sort_unstable();
            let y = by_atoms.get(&key).ok_or_else(|| Error::NotAutomorphism(format!("no image for {}", self.ids[x])))?;
            out.push(*y);
        }
        if !self.is_automorphism(&out) {
            return Err(Error::NotAutomorphism("atom permutation does not preserve the order".into()));
        }
        Ok(out)
    }
}

pub fn subset_id(mask: u64, n: usize) -> String {
    let parts: Vec<String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests;
