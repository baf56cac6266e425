//! Finite-dimensional differential graded algebras given by structure constants.
//!
//! Both the E1 page of the Mayer-Vietoris spectral sequence and the Möbius
//! inversion algebra are stored this way: a list of basis degrees, the image of
//! every basis vector under the differential, and the nonzero products of
//! basis vectors.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{quotient_basis, Coordinatizer, Echelon, RatMatrix, SparseVec, Subspace, Q};
use crate::par;

/// Outcome of one named identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, failures: Vec<String>) -> Check {
        let passed = failures.is_empty();
        let detail = if passed {
            "ok".to_string()
        } else {
            let mut d = format!("{} failure(s); first: {}", failures.len(), failures[0]);
            if failures.len() > 1 {
                d.push_str(&format!("; last: {}", failures[failures.len() - 1]));
            }
            d
        };
        Check { name: name.to_string(), passed, detail }
    }

    pub fn from_bool(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

pub(crate) fn sign(odd: bool) -> Q {
    if odd {
        -crate::exactla::q_one()
    } else {
        crate::exactla::q_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDga {
    degrees: Vec<i32>,
    diff: Vec<SparseVec>,
    prod: Vec<Vec<(usize, SparseVec)>>,
}

impl FiniteDga {
    pub fn new<I>(degrees: Vec<i32>, diff: Vec<SparseVec>, products: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), SparseVec)>,
    {
        assert_eq!(degrees.len(), diff.len());
        let mut prod: Vec<BTreeMap<usize, SparseVec>> = vec![BTreeMap::new(); degrees.len()];
        for ((i, j), v) in products {
            if !v.is_zero() {
                prod[i].insert(j, v);
            }
        }
        FiniteDga { degrees, diff, prod: prod.into_iter().map(|m| m.into_iter().collect()).collect() }
    }

    /// Builds from per-row product lists already sorted by right factor.
    pub fn from_rows(degrees: Vec<i32>, diff: Vec<SparseVec>, prod: Vec<Vec<(usize, SparseVec)>>) -> Self {
        assert_eq!(degrees.len(), prod.len());
        FiniteDga { degrees, diff, prod }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn d_basis(&self, i: usize) -> &SparseVec {
        &self.diff[i]
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Option<&SparseVec> {
        let row = &self.prod[i];
        row.binary_search_by_key(&j, |(k, _)| *k).ok().map(|k| &row[k].1)
    }

    pub fn product_row(&self, i: usize) -> &[(usize, SparseVec)] {
        &self.prod[i]
    }

    pub fn nonzero_products(&self) -> usize {
        self.prod.iter().map(|r| r.len()).sum()
    }

    pub fn d(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v.iter() {
            out.add_scaled(&self.diff[*i], c);
        }
        out
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            if self.prod[*i].is_empty() {
                continue;
            }
            for (j, y) in b.iter() {
                if let Some(p) = self.mul_basis(*i, *j) {
                    out.add_scaled(p, &(x * y));
                }
            }
        }
        out
    }

    /// Replaces the differential of one basis vector (used to inject faults).
    pub fn set_differential(&mut self, i: usize, v: SparseVec) {
        self.diff[i] = v;
    }

    /// Replaces one structure constant (used to inject faults).
    pub fn set_product(&mut self, i: usize, j: usize, v: SparseVec) {
        let row = &mut self.prod[i];
        match row.binary_search_by_key(&j, |(k, _)| *k) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (j, v)),
        }
    }

    /// Matrix of the differential from the basis vectors `from` to `to`.
    pub fn differential_block(&self, from: &[usize], to: &[usize]) -> RatMatrix {
        let mut pos = BTreeMap::new();
        for (k, t) in to.iter().enumerate() {
            pos.insert(*t, k);
        }
        let cols = from
            .iter()
            .map(|i| SparseVec::from_pairs(self.diff[*i].iter().filter_map(|(r, c)| pos.get(r).map(|k| (*k, c.clone())))))
            .collect();
        RatMatrix::from_columns(to.len(), cols)
    }

    fn homogeneous(&self, v: &SparseVec, deg: i32) -> bool {
        v.iter().all(|(k, _)| self.degrees[*k] == deg)
    }

    pub fn check_degrees(&self) -> Check {
        let mut fails: Vec<String> = (0..self.dim())
            .filter(|i| !self.homogeneous(&self.diff[*i], self.degrees[*i] + 1))
            .map(|i| format!("d(e{i}) is not of degree {}", self.degrees[i] + 1))
            .collect();
        for i in 0..self.dim() {
            for (j, p) in &self.prod[i] {
                if !self.homogeneous(p, self.degrees[i] + self.degrees[*j]) {
                    fails.push(format!("e{i}*e{j} is not homogeneous"));
                }
            }
        }
        Check::new("degrees", fails)
    }

    pub fn check_d_squared(&self) -> Check {
        let fails: Vec<String> = par::map_range(self.dim(), |i| {
            let dd = self.d(&self.diff[i]);
            (!dd.is_zero()).then(|| format!("d(d(e{i})) != 0"))
        })
        .into_iter()
        .flatten()
        .collect();
        Check::new("d^2=0", fails)
    }

    /// `d(ab) = d(a)b + (-1)^|a| a d(b)` on all pairs of basis vectors.
    pub fn check_leibniz(&self) -> Check {
        let n = self.dim();
        let fails: Vec<String> = par::map_range(n, |i| {
            let mut bad = Vec::new();
            let s = sign(self.degrees[i].rem_euclid(2) == 1);
            let ei = SparseVec::unit(i);
            for j in 0..n {
                let ej = SparseVec::unit(j);
                let lhs = match self.mul_basis(i, j) {
                    Some(p) => self.d(p),
                    None => SparseVec::new(),
                };
                let mut rhs = self.mul(&self.diff[i], &ej);
                rhs.add_scaled(&self.mul(&ei, &self.diff[j]), &s);
                if lhs != rhs {
                    bad.push(format!("Leibniz fails on (e{i}, e{j})"));
                }
            }
            bad
        })
        .into_iter()
        .flatten()
        .collect();
        Check::new("Leibniz", fails)
    }

    pub fn check_commutativity(&self) -> Check {
        let n = self.dim();
        let fails: Vec<String> = par::map_range(n, |i| {
            let mut bad = Vec::new();
            for j in i..n {
                let odd = (self.degrees[i] * self.degrees[j]).rem_euclid(2) == 1;
                let a = self.mul_basis(i, j).cloned().unwrap_or_default();
                let b = self.mul_basis(j, i).cloned().unwrap_or_default();
                if a != b.scaled(&sign(odd)) {
                    bad.push(format!("e{i}*e{j} != ±e{j}*e{i}"));
                }
            }
            bad
        })
        .into_iter()
        .flatten()
        .collect();
        Check::new("graded commutativity", fails)
    }

    /// `(ab)c = a(bc)` on all triples; cost grows with the number of nonzero
    /// products, so this is meant for small algebras.
    pub fn check_associativity(&self) -> Check {
        let n = self.dim();
        let fails: Vec<String> = par::map_range(n, |i| {
            let mut bad = Vec::new();
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                let mut left: BTreeMap<usize, SparseVec> = BTreeMap::new();
                if let Some(p) = ij {
                    for (l, c) in p.iter() {
                        for (k, q) in &self.prod[*l] {
                            left.entry(*k).or_default().add_scaled(q, c);
                        }
                    }
                }
                let mut right: BTreeMap<usize, SparseVec> = BTreeMap::new();
                if !self.prod[i].is_empty() {
                    for (k, q) in &self.prod[j] {
                        let v = self.mul(&SparseVec::unit(i), q);
                        right.insert(*k, v);
                    }
                }
                left.retain(|_, v| !v.is_zero());
                right.retain(|_, v| !v.is_zero());
                if left != right {
                    bad.push(format!("associativity fails on (e{i}, e{j}, -)"));
                }
            }
            bad
        })
        .into_iter()
        .flatten()
        .collect();
        Check::new("associativity", fails)
    }

    /// Cohomology split along a grading `key` that the differential respects
    /// (it maps each block into a single other block).
    pub fn block_cohomology<K, F>(&self, key: F) -> Result<BTreeMap<K, BlockCohomology>>
    where
        K: Ord + Clone + Send + Sync,
        F: Fn(usize) -> K,
    {
        let mut blocks: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        let keys: Vec<K> = (0..self.dim()).map(&key).collect();
        for (i, k) in keys.iter().enumerate() {
            blocks.entry(k.clone()).or_default().push(i);
        }
        // which block receives the differential of each block
        let mut incoming: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for i in 0..self.dim() {
            let mut target: Option<&K> = None;
            for (r, _) in self.diff[i].iter() {
                match target {
                    None => target = Some(&keys[*r]),
                    Some(t) if *t != keys[*r] => {
                        return Err(Error::InvariantViolation(format!("differential of e{i} is not block homogeneous")))
                    }
                    _ => {}
                }
            }
            if let Some(t) = target {
                incoming.entry(t.clone()).or_default().push(i);
            }
        }
        let entries: Vec<(K, Vec<usize>)> = blocks.into_iter().collect();
        let computed = par::map_slice(&entries, |(k, idx)| {
            let into = incoming.get(k).cloned().unwrap_or_default();
            (k.clone(), self.cohomology_of_block(idx, &into))
        });
        Ok(computed.into_iter().collect())
    }

    fn cohomology_of_block(&self, idx: &[usize], into: &[usize]) -> BlockCohomology {
        // outgoing: restrict differential to wherever it lands (a single block)
        let mut out_targets: Vec<usize> = Vec::new();
        for i in idx {
            for (r, _) in self.diff[*i].iter() {
                out_targets.push(*r);
            }
        }
        out_targets.sort_unstable();
        out_targets.dedup();
        let dout = self.differential_block(idx, &out_targets);
        let cycles_local = crate::exactla::kernel_basis(&dout);
        let cycles = Subspace::span(idx.len(), &cycles_local);
        let din = self.differential_block(into, idx);
        let boundaries = Subspace::span(idx.len(), &crate::exactla::image_basis(&din));
        let reps_local = quotient_basis(&boundaries, &cycles).expect("boundaries lie in cycles when d^2 = 0");
        let to_global = |v: &SparseVec| v.map_indices(|l| idx[l]);
        BlockCohomology {
            indices: idx.to_vec(),
            incoming: into.to_vec(),
            cycles_dim: cycles.dim(),
            boundary_basis: boundaries.basis().iter().map(to_global).collect(),
            representatives: reps_local.iter().map(to_global).collect(),
        }
    }
}

/// Cohomology of one block of a graded differential algebra. Vectors are in
/// global basis coordinates.
#[derive(Clone, Debug)]
pub struct BlockCohomology {
    pub indices: Vec<usize>,
    pub incoming: Vec<usize>,
    pub cycles_dim: usize,
    pub boundary_basis: Vec<SparseVec>,
    pub representatives: Vec<SparseVec>,
}

impl BlockCohomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    fn localize(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut out = Vec::with_capacity(v.nnz());
        for (g, c) in v.iter() {
            let l = self.indices.binary_search(g).ok()?;
            out.push((l, c.clone()));
        }
        Some(SparseVec::from_pairs(out))
    }

    /// Solver writing a cycle as a combination of `reps` modulo boundaries.
    pub fn class_solver(&self, reps: &[SparseVec]) -> ClassSolver {
        let mut gens: Vec<SparseVec> = reps.iter().map(|r| self.localize(r).expect("rep inside block")).collect();
        gens.extend(self.boundary_basis.iter().map(|b| self.localize(b).expect("boundary inside block")));
        ClassSolver {
            block: self.clone(),
            n_reps: reps.len(),
            solver: Coordinatizer::from_vectors(&gens).expect("representatives are independent modulo boundaries"),
        }
    }
}

pub struct ClassSolver {
    block: BlockCohomology,
    n_reps: usize,
    solver: Coordinatizer,
}

impl ClassSolver {
    /// Class coordinates of a cycle; `None` if `v` is not a cycle of this block.
    pub fn class_of(&self, v: &SparseVec) -> Option<SparseVec> {
        let local = self.block.localize(v)?;
        let c = self.solver.coordinates(&local)?;
        Some(SparseVec::from_pairs(c.iter().filter(|(i, _)| *i < self.n_reps).cloned()))
    }
}

/// Ranks per degree of a graded differential: `H^k = dim_k - rank d_k - rank d_{k-1}`.
pub fn cohomology_dims(dga: &FiniteDga) -> Result<BTreeMap<i32, usize>> {
    Ok(dga.block_cohomology(|i| dga.degree(i))?.into_iter().map(|(k, b)| (k, b.dim())).collect())
}

/// Rank of the span of a list of vectors.
pub fn span_rank(vs: &[SparseVec]) -> usize {
    let mut e = Echelon::new(false);
    for v in vs {
        e.push(v);
    }
    e.rank()
}
