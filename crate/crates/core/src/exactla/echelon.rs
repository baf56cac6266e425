//! Incremental fraction-free row reduction.
//!
//! Rows are kept as primitive integer vectors (content divided out after every
//! elimination step), so no rational arithmetic happens inside the elimination
//! itself. Each stored row optionally remembers which combination of the
//! inserted generators produced it; that combination is rational because of
//! the content divisions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rational::Q;
use super::sparse::SparseVec;

type IRow = Vec<(usize, BigInt)>;

struct Stored {
    row: IRow,
    combo: SparseVec,
}

/// Semi-echelon basis of a growing span. The pivot of a row is its leading
/// (smallest) column, and no two rows share a pivot.
pub struct Echelon {
    rows: Vec<Stored>,
    pivot_of: HashMap<usize, usize>,
    track: bool,
    generators: usize,
}

/// Result of inserting a generator.
pub enum Insert {
    /// The generator enlarged the span; the new pivot column is returned.
    Independent(usize),
    /// The generator was dependent; the combination of generators (including
    /// the new one, with coefficient one) that vanishes is returned when
    /// tracking is enabled.
    Dependent(Option<SparseVec>),
}

fn to_int_row(v: &SparseVec) -> (IRow, Q) {
    let mut l = BigInt::one();
    for (_, c) in v.iter() {
        l = l.lcm(c.denom());
    }
    let mut row: IRow = v.iter().map(|(i, c)| (*i, c.numer() * (&l / c.denom()))).collect();
    let g = content(&row);
    if !g.is_one() && !g.is_zero() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    (row, Q::new(l, if g.is_zero() { BigInt::one() } else { g }))
}

fn content(row: &IRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, x) in row {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `a*r - b*p`, both sorted.
fn combine(r: &IRow, a: &BigInt, p: &IRow, b: &BigInt) -> IRow {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        if j == p.len() || (i < r.len() && r[i].0 < p[j].0) {
            out.push((r[i].0, a * &r[i].1));
            i += 1;
        } else if i == r.len() || p[j].0 < r[i].0 {
            out.push((p[j].0, -(b * &p[j].1)));
            j += 1;
        } else {
            let v = a * &r[i].1 - b * &p[j].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Echelon { rows: Vec::new(), pivot_of: HashMap::new(), track, generators: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates known pivots from `row`. `combo` and `lambda` are updated so
    /// that `row = lambda * v + sum combo_g * gen_g` keeps holding.
    fn reduce_row(&self, mut row: IRow, combo: &mut SparseVec, lambda: &mut Q, track: bool) -> IRow {
        let mut pos = 0;
        loop {
            let hit = row.iter().position(|(c, _)| *c >= pos && self.pivot_of.contains_key(c));
            let Some(k) = hit else { break };
            let col = row[k].0;
            let stored = &self.rows[self.pivot_of[&col]];
            let a = stored.row[0].1.clone();
            let b = row[k].1.clone();
            let mut next = combine(&row, &a, &stored.row, &b);
            let mut g = content(&next);
            if g.is_zero() {
                g = BigInt::one();
            }
            if !g.is_one() {
                for (_, x) in next.iter_mut() {
                    *x = &*x / &g;
                }
            }
            if track {
                let gq = Q::from_integer(g.clone());
                let mut c = combo.scaled(&(Q::from_integer(a.clone()) / &gq));
                c.add_scaled(&stored.combo, &(-Q::from_integer(b) / &gq));
                *combo = c;
                *lambda = &*lambda * Q::from_integer(a) / gq;
            }
            row = next;
            pos = col + 1;
        }
        row
    }

    /// Adds a generator to the span.
    pub fn insert(&mut self, v: &SparseVec) -> Insert {
        let g = self.generators;
        self.generators += 1;
        let (row, scale) = to_int_row(v);
        let mut combo = if self.track { SparseVec::single(g, scale) } else { SparseVec::new() };
        let mut lambda = Q::one();
        let row = self.reduce_row(row, &mut combo, &mut lambda, self.track);
        if row.is_empty() {
            if self.track {
                let lead = combo.get(g);
                let c = combo.scaled(&(Q::one() / lead));
                return Insert::Dependent(Some(c));
            }
            return Insert::Dependent(None);
        }
        let col = row[0].0;
        self.pivot_of.insert(col, self.rows.len());
        self.rows.push(Stored { row, combo });
        Insert::Independent(col)
    }

    /// Inserts and reports whether the span grew.
    pub fn push(&mut self, v: &SparseVec) -> bool {
        matches!(self.insert(v), Insert::Independent(_))
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let (row, _) = to_int_row(v);
        let mut combo = SparseVec::new();
        let mut lambda = Q::one();
        self.reduce_row(row, &mut combo, &mut lambda, false).is_empty()
    }

    /// Writes `v` as a combination of the inserted generators, if it lies in
    /// their span. Requires tracking.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "express needs a tracking echelon");
        if v.is_zero() {
            return Some(SparseVec::new());
        }
        let (row, scale) = to_int_row(v);
        let mut combo = SparseVec::new();
        let mut lambda = scale;
        let rest = self.reduce_row(row, &mut combo, &mut lambda, true);
        if !rest.is_empty() {
            return None;
        }
        Some(combo.scaled(&(-Q::one() / lambda)))
    }
}
