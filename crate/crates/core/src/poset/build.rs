use std::collections::{BTreeMap, BTreeSet};

use super::{subset_id, GradedPoset};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// The cubical lattice `Q(L)` together with its projection to `L`.
#[derive(Clone, Debug)]
pub struct CubicalLattice {
    pub poset: GradedPoset,
    /// Image in `L` of each element of `Q`.
    pub vertex: Vec<usize>,
    /// Atom set of each element, as a mask over positions in `L.atoms()`.
    pub atomset: Vec<u64>,
}

/// Pairs `(x, I)` with `x` a minimal upper bound of the atom set `I`, ordered
/// componentwise; the rank of `(x, I)` is `|I|`.
pub fn cubical_lattice(l: &GradedPoset) -> Result<CubicalLattice> {
    if !l.is_atomic() {
        return Err(Error::NotAtomic("some element is not a minimal upper bound of its atoms".into()));
    }
    let na = l.atoms().len();
    if na > 20 {
        return Err(Error::InvariantViolation(format!("{na} atoms is beyond the cubical enumeration limit of 20")));
    }
    let mut pairs: Vec<(u64, usize)> = Vec::new();
    for mask in 0..1u64 << na {
        let members: Vec<usize> = (0..na).filter(|i| mask >> i & 1 == 1).collect();
        for x in l.sup_of_atoms(&members) {
            pairs.push((mask, x));
        }
    }
    let id_of = |(m, x): &(u64, usize)| format!("{}@{}", subset_id(*m, na), l.id(*x));
    let ids: Vec<String> = pairs.iter().map(id_of).collect();
    let mut by_mask: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (m, x) in &pairs {
        by_mask.entry(*m).or_default().push(*x);
    }
    let mut covers = Vec::new();
    for (mask, x) in &pairs {
        for i in 0..na {
            if mask >> i & 1 == 1 {
                let smaller = mask & !(1 << i);
                for y in by_mask.get(&smaller).into_iter().flatten() {
                    if l.leq(*y, *x) {
                        covers.push((id_of(&(smaller, *y)), id_of(&(*mask, *x))));
                    }
                }
            }
        }
    }
    let poset = GradedPoset::from_covers(ids, &covers)?;
    let mut vertex = vec![0; poset.len()];
    let mut atomset = vec![0; poset.len()];
    for p in &pairs {
        let q = poset.index_of(&id_of(p))?;
        vertex[q] = p.1;
        atomset[q] = p.0;
    }
    Ok(CubicalLattice { poset, vertex, atomset })
}

/// Poset of the distinct strata, ordered by reverse inclusion. `strata` maps
/// sorted atom subsets to labels; subsets whose intersection is empty are
/// simply absent. The empty subset carries the ambient label.
pub fn intersection_poset(n_atoms: usize, strata: &BTreeMap<Vec<usize>, String>) -> Result<GradedPoset> {
    if !strata.contains_key(&Vec::new()) {
        return Err(Error::Schema("the empty subset must carry the ambient label".into()));
    }
    for k in strata.keys() {
        if k.windows(2).any(|w| w[0] >= w[1]) || k.iter().any(|a| *a >= n_atoms) {
            return Err(Error::Schema(format!("subset {k:?} is not a sorted subset of 0..{n_atoms}")));
        }
    }
    // largest generating set of every label
    let mut gen: BTreeMap<&String, BTreeSet<usize>> = BTreeMap::new();
    for (k, lab) in strata {
        gen.entry(lab).or_default().extend(k.iter().copied());
    }
    let mut seen_sets: BTreeMap<Vec<usize>, &String> = BTreeMap::new();
    for (lab, s) in &gen {
        let key: Vec<usize> = s.iter().copied().collect();
        match strata.get(&key) {
            Some(l) if l == *lab => {}
            _ => {
                return Err(Error::Schema(format!(
                    "stratum {lab:?}: the union {key:?} of its generating sets does not carry the same label"
                )))
            }
        }
        if let Some(other) = seen_sets.insert(key, lab) {
            return Err(Error::Schema(format!("labels {other:?} and {lab:?} have the same atoms")));
        }
    }
    let labels: Vec<&String> = gen.keys().copied().collect();
    let below = |a: &String, b: &String| gen[a].is_subset(&gen[b]) && a != b;
    let mut covers = Vec::new();
    for a in &labels {
        for b in &labels {
            if below(a, b) && !labels.iter().any(|c| below(a, c) && below(c, b)) {
                covers.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    GradedPoset::from_covers(labels.iter().map(|s| (*s).clone()).collect(), &covers)
}

/// Blocks of a partition id such as `{0,2}{1}`.
pub fn partition_blocks(id: &str) -> Vec<Vec<usize>> {
    id.split('}')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim_start_matches('{').split(',').filter(|t| !t.is_empty()).map(|t| t.parse().unwrap()).collect())
        .collect()
}

fn partition_id(blocks: &[Vec<usize>]) -> String {
    blocks.iter().map(|b| format!("{{{}}}", b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))).collect()
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    fn rec(i: usize, maxb: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        let n = a.len();
        if i == n {
            let nb = a.iter().max().map_or(0, |m| m + 1);
            let mut blocks = vec![Vec::new(); nb];
            for (v, b) in a.iter().enumerate() {
                blocks[*b].push(v);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=maxb {
            a[i] = b;
            rec(i + 1, maxb.max(b + 1), a, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    a[0] = 0;
    rec(1, 1, &mut a, &mut out);
    out
}

/// Lattice of partitions of the vertex set into connected blocks, ordered by
/// refinement; atoms are the edges.
pub fn partition_lattice(g: &Graph) -> GradedPoset {
    let parts: Vec<Vec<Vec<usize>>> =
        set_partitions(g.vertices).into_iter().filter(|p| p.iter().all(|b| g.is_connected_on(b))).collect();
    let ids: Vec<String> = parts.iter().map(|p| partition_id(p)).collect();
    let mut covers = Vec::new();
    for p in &parts {
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                let joined = p[i].iter().any(|a| p[j].iter().any(|b| g.has_edge(*a, *b)));
                if joined {
                    let mut merged: Vec<Vec<usize>> =
                        p.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, b)| b.clone()).collect();
                    let mut m = p[i].clone();
                    m.extend(&p[j]);
                    m.sort_unstable();
                    merged.push(m);
                    merged.sort();
                    covers.push((partition_id(p), partition_id(&merged)));
                }
            }
        }
    }
    GradedPoset::from_covers(ids, &covers).expect("partition lattices are graded")
}
