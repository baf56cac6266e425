//! Exact linear algebra over the rationals.
//!
//! Elimination is fraction-free: rows are held as primitive integer vectors and
//! combined by cross multiplication, with the content divided out after every
//! step (the gcd variant of Bareiss elimination). Pivots are always the first
//! nonzero column of a row and generators are consumed in the order given, so
//! every basis returned here is reproducible bit for bit.

mod echelon;
mod matrix;
pub mod rational;
mod sparse;

pub use echelon::{Echelon, Insert};
pub use matrix::RatMatrix;
pub use rational::{fmt_q, parse_q, parse_q_json, q, q_frac, q_one, q_zero, Q};
pub use sparse::SparseVec;

use crate::error::{Error, Result};

pub fn rank(m: &RatMatrix) -> usize {
    let mut e = Echelon::new(false);
    for c in m.columns() {
        e.push(c);
    }
    e.rank()
}

/// Basis of `{v : m v = 0}`. One vector per column that depends on earlier
/// columns; its own coordinate is 1.
pub fn kernel_basis(m: &RatMatrix) -> Vec<SparseVec> {
    let mut e = Echelon::new(true);
    let mut out = Vec::new();
    for c in m.columns() {
        if let Insert::Dependent(Some(k)) = e.insert(c) {
            out.push(k);
        }
    }
    out
}

/// The columns of `m` that are independent of the columns before them.
pub fn image_basis(m: &RatMatrix) -> Vec<SparseVec> {
    let mut e = Echelon::new(false);
    m.columns().iter().filter(|c| e.push(c)).cloned().collect()
}

/// Linear subspace of `Q^ambient` with an independent spanning list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    /// Keeps the vectors that are independent of the ones before them.
    pub fn span(ambient: usize, vectors: &[SparseVec]) -> Self {
        let mut e = Echelon::new(false);
        let basis = vectors.iter().filter(|v| e.push(v)).cloned().collect();
        Subspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(SparseVec::unit).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut e = Echelon::new(false);
        for b in &self.basis {
            e.push(b);
        }
        e.contains(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        let mut e = Echelon::new(false);
        for b in &self.basis {
            e.push(b);
        }
        other.basis.iter().all(|v| e.contains(v))
    }

    /// Reusable solver for coordinates with respect to `self.basis()`.
    pub fn coordinatizer(&self) -> Coordinatizer {
        let mut e = Echelon::new(true);
        for b in &self.basis {
            e.push(b);
        }
        Coordinatizer { ech: e }
    }
}

/// Expresses vectors in a fixed independent list.
pub struct Coordinatizer {
    ech: Echelon,
}

impl Coordinatizer {
    pub fn from_vectors(vectors: &[SparseVec]) -> Result<Self> {
        let mut e = Echelon::new(true);
        for v in vectors {
            if !e.push(v) {
                return Err(Error::InvariantViolation("coordinate basis is dependent".into()));
            }
        }
        Ok(Coordinatizer { ech: e })
    }

    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        self.ech.express(v)
    }
}

/// Vectors from `total`'s basis completing a basis of `sub` to one of `total`.
pub fn quotient_basis(sub: &Subspace, total: &Subspace) -> Result<Vec<SparseVec>> {
    if !total.contains_subspace(sub) {
        return Err(Error::ContainmentViolation);
    }
    let mut e = Echelon::new(false);
    for b in sub.basis() {
        e.push(b);
    }
    Ok(total.basis().iter().filter(|v| e.push(v)).cloned().collect())
}

/// The map `m!` with `⟨m! a, b⟩_dst = ⟨a, m b⟩_src` where `⟨x, y⟩_P = xᵀ P y`.
///
/// `m` goes from the `dst` space to the `src` space and `m!` goes back. This is
/// `P_dst^{-T} mᵀ P_srcᵀ`, which reduces to `P_dst^{-1} mᵀ P_src` for symmetric
/// pairings.
pub fn pairing_adjoint(m: &RatMatrix, pairing_src: &RatMatrix, pairing_dst: &RatMatrix) -> Result<RatMatrix> {
    let inv = pairing_dst.transpose().inverse().ok_or(Error::SingularPairing)?;
    if pairing_src.inverse().is_none() {
        return Err(Error::SingularPairing);
    }
    Ok(inv.mul(&m.transpose()).mul(&pairing_src.transpose()))
}
