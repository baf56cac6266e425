use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::E1Algebra;
use crate::dga::{BlockCohomology, Check, ClassSolver};
use crate::error::Result;
use crate::exactla::{fmt_q, q_one, SparseVec};

/// `E2 = E∞` with a chosen representative for every class and the
/// multiplication table of the classes.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    pub dims: BTreeMap<(i32, i32), usize>,
    /// Global class index → (bidegree, position within the bidegree).
    pub classes: Vec<((i32, i32), usize)>,
    /// Representative cycle of each class, in E1 coordinates.
    pub reps: Vec<SparseVec>,
    /// Nonzero products `class_i · class_j` in class coordinates.
    pub table: BTreeMap<(usize, usize), SparseVec>,
    /// `b_n = Σ_{p+q=n} dim E2^{pq}`.
    pub betti: Vec<usize>,
    /// `n → q → dim Gr^W_q H^n`.
    pub weights: BTreeMap<i32, BTreeMap<i32, usize>>,
    blocks: BTreeMap<(i32, i32), BlockCohomology>,
}

impl CohomologyRing {
    pub fn total_dim(&self) -> usize {
        self.classes.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(n, b)| if n % 2 == 0 { *b as i64 } else { -(*b as i64) }).sum()
    }

    pub fn nonzero_dims(&self) -> BTreeMap<(i32, i32), usize> {
        self.dims.iter().filter(|(_, d)| **d > 0).map(|(k, d)| (*k, *d)).collect()
    }

    fn class_offset(&self, key: (i32, i32)) -> usize {
        self.classes.iter().position(|(k, _)| *k == key).unwrap_or(self.classes.len())
    }

    /// Solvers for every bidegree relative to the given representatives.
    fn solvers(&self, reps: &[SparseVec]) -> BTreeMap<(i32, i32), ClassSolver> {
        self.blocks
            .iter()
            .filter(|(_, b)| b.dim() > 0)
            .map(|(k, b)| {
                let off = self.class_offset(*k);
                (*k, b.class_solver(&reps[off..off + b.dim()]))
            })
            .collect()
    }

    /// Class coordinates of a cycle of bidegree `key`.
    pub fn class_of(&self, key: (i32, i32), v: &SparseVec) -> Option<SparseVec> {
        if v.is_zero() {
            return Some(SparseVec::new());
        }
        let solvers = self.solvers(&self.reps);
        let local = solvers.get(&key)?.class_of(v)?;
        let off = self.class_offset(key);
        Some(local.map_indices(|i| i + off))
    }

    /// Another section: every representative is moved by the boundary of a
    /// basis vector chosen from `seed`. The multiplication table computed from
    /// it must be the same.
    pub fn shifted_section(&self, e1: &E1Algebra, seed: u64) -> Vec<SparseVec> {
        let mut reps = self.reps.clone();
        for (k, b) in &self.blocks {
            let off = self.class_offset(*k);
            for i in 0..b.dim() {
                if b.incoming.is_empty() {
                    continue;
                }
                let pick = b.incoming[(seed as usize + 3 * i) % b.incoming.len()];
                let bd = e1.dga().d_basis(pick);
                reps[off + i] = reps[off + i].add(bd);
            }
        }
        reps
    }

    /// Multiplication table computed from the given section.
    pub fn table_from(&self, e1: &E1Algebra, reps: &[SparseVec]) -> BTreeMap<(usize, usize), SparseVec> {
        let solvers = self.solvers(reps);
        let n = self.classes.len();
        let rows = crate::par::map_range(n, |i| {
            let mut out = Vec::new();
            for j in 0..n {
                let v = e1.dga().mul(&reps[i], &reps[j]);
                if v.is_zero() {
                    continue;
                }
                let ((p1, q1), _) = self.classes[i];
                let ((p2, q2), _) = self.classes[j];
                let key = (p1 + p2, q1 + q2);
                let coords = match solvers.get(&key) {
                    Some(s) => s.class_of(&v).expect("product of cycles is a cycle"),
                    None => SparseVec::new(),
                };
                if !coords.is_zero() {
                    let off = self.class_offset(key);
                    out.push(((i, j), coords.map_indices(|k| k + off)));
                }
            }
            out
        });
        rows.into_iter().flatten().collect()
    }

    pub fn check_section_independence(&self, e1: &E1Algebra, seed: u64) -> Check {
        let other = self.shifted_section(e1, seed);
        let t2 = self.table_from(e1, &other);
        let diffs: Vec<String> = self
            .table
            .keys()
            .chain(t2.keys())
            .filter(|k| self.table.get(k) != t2.get(k))
            .map(|(i, j)| format!("class product ({i}, {j}) depends on the section"))
            .collect();
        Check::new("section independence", diffs)
    }
}

pub fn cohomology(e1: &E1Algebra) -> Result<CohomologyRing> {
    let blocks = e1.dga().block_cohomology(|i| e1.bidegree(i))?;
    let mut dims = BTreeMap::new();
    let mut classes = Vec::new();
    let mut reps = Vec::new();
    for (k, b) in &blocks {
        dims.insert(*k, b.dim());
        for (i, r) in b.representatives.iter().enumerate() {
            classes.push((*k, i));
            reps.push(r.clone());
        }
    }
    let top = dims.iter().filter(|(_, d)| **d > 0).map(|((p, q), _)| p + q).max().unwrap_or(0).max(0) as usize;
    let mut betti = vec![0; top + 1];
    let mut weights: BTreeMap<i32, BTreeMap<i32, usize>> = BTreeMap::new();
    for ((p, q), d) in &dims {
        if *d > 0 {
            betti[(p + q) as usize] += d;
            *weights.entry(p + q).or_default().entry(*q).or_insert(0) += d;
        }
    }
    let mut ring = CohomologyRing { dims, classes, reps, table: BTreeMap::new(), betti, weights, blocks };
    ring.table = ring.table_from(e1, &ring.reps);
    Ok(ring)
}

/// Coefficients of `Σ b_n t^n`.
pub fn poincare_polynomial(ring: &CohomologyRing) -> Vec<i64> {
    let mut c: Vec<i64> = ring.betti.iter().map(|b| *b as i64).collect();
    while c.len() > 1 && c.last() == Some(&0) {
        c.pop();
    }
    c
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FormalityReport {
    pub formal_by_section: bool,
    pub verdict: String,
    pub detail: String,
}

/// The representatives span a subalgebra mapping isomorphically onto
/// cohomology exactly when their products are combinations of
/// representatives on the nose; then `E2 → E1` is a multiplicative
/// quasi-isomorphism.
pub fn formality_report(e1: &E1Algebra, ring: &CohomologyRing) -> FormalityReport {
    let mut failures = Vec::new();
    for i in 0..ring.reps.len() {
        for j in 0..ring.reps.len() {
            let v = e1.dga().mul(&ring.reps[i], &ring.reps[j]);
            let expected = ring.table.get(&(i, j)).map(|c| {
                let mut s = SparseVec::new();
                for (k, a) in c.iter() {
                    s.add_scaled(&ring.reps[*k], a);
                }
                s
            });
            if v != expected.unwrap_or_default() {
                failures.push((i, j));
            }
        }
    }
    let unit_ok = ring.reps.iter().position(|r| *r == SparseVec::single(0, q_one())).is_some();
    if failures.is_empty() && unit_ok {
        FormalityReport {
            formal_by_section: true,
            verdict: "formal by section".into(),
            detail: format!("{} representatives close under multiplication", ring.reps.len()),
        }
    } else {
        let detail = match failures.first() {
            Some((i, j)) => format!("product of representatives {i} and {j} is not a combination of representatives"),
            None => "the unit class is not represented by 1".into(),
        };
        FormalityReport { formal_by_section: false, verdict: "inconclusive".into(), detail }
    }
}

fn key(p: i32, q: i32) -> String {
    format!("({p},{q})")
}

pub fn report_json(e1: &E1Algebra, ring: &CohomologyRing) -> Value {
    let e1d: serde_json::Map<String, Value> = e1.dims().iter().map(|((p, q), d)| (key(*p, *q), json!(d))).collect();
    let e2d: serde_json::Map<String, Value> = ring.nonzero_dims().iter().map(|((p, q), d)| (key(*p, *q), json!(d))).collect();
    let weights: serde_json::Map<String, Value> = ring
        .weights
        .iter()
        .map(|(n, m)| (n.to_string(), Value::Object(m.iter().map(|(q, d)| (q.to_string(), json!(d))).collect())))
        .collect();
    let classes: Vec<Value> = ring.classes.iter().map(|((p, q), i)| json!({"p": p, "q": q, "index": i})).collect();
    let products: Vec<Value> = ring
        .table
        .iter()
        .flat_map(|((i, j), v)| v.iter().map(move |(k, c)| json!([i, j, k, fmt_q(c)])).collect::<Vec<_>>())
        .collect();
    json!({
        "e1": e1d,
        "e2": e2d,
        "betti": ring.betti,
        "weights": weights,
        "poincare": poincare_polynomial(ring),
        "ring": {"classes": classes, "products": products},
    })
}
