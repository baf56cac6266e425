use std::collections::BTreeMap;

use num_traits::Zero;

use super::rational::Q;

/// Sparse rational vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, super::rational::q_one())] }
    }

    pub fn single(i: usize, c: Q) -> Self {
        if c.is_zero() {
            SparseVec::new()
        } else {
            SparseVec { entries: vec![(i, c)] }
        }
    }

    /// Sums repeated indices and drops zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, c) in pairs {
            *acc.entry(i).or_insert_with(Q::zero) += c;
        }
        SparseVec { entries: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn from_dense(v: &[Q]) -> Self {
        SparseVec {
            entries: v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); n];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (usize, Q)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Q {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Q) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        let (x, y) = (&self.entries, &other.entries);
        while a < x.len() || b < y.len() {
            if b == y.len() || (a < x.len() && x[a].0 < y[b].0) {
                out.push(x[a].clone());
                a += 1;
            } else if a == x.len() || y[b].0 < x[a].0 {
                out.push((y[b].0, &y[b].1 * c));
                b += 1;
            } else {
                let s = &x[a].1 + &y[b].1 * c;
                if !s.is_zero() {
                    out.push((x[a].0, s));
                }
                a += 1;
                b += 1;
            }
        }
        self.entries = out;
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &super::rational::q_one());
        out
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &-super::rational::q_one());
        out
    }

    pub fn scaled(&self, c: &Q) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect() }
    }

    /// Relabels indices; collisions are summed.
    pub fn map_indices<F: Fn(usize) -> usize>(&self, f: F) -> SparseVec {
        SparseVec::from_pairs(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let mut acc = Q::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, j) = (self.entries[a].0, other.entries[b].0);
            if i == j {
                acc += &self.entries[a].1 * &other.entries[b].1;
                a += 1;
                b += 1;
            } else if i < j {
                a += 1;
            } else {
                b += 1;
            }
        }
        acc
    }
}

impl FromIterator<(usize, Q)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Q)>>(iter: T) -> Self {
        SparseVec::from_pairs(iter)
    }
}
