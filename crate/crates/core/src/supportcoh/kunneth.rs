use super::GradedRing;
use crate::exactla::{q, q_one, RatMatrix, SparseVec, Q};

/// `H*(M)^{⊗k}` with basis the tuples of ring basis vectors, listed by
/// degree and then lexicographically.
#[derive(Clone, Debug)]
pub struct TensorPower<'a> {
    ring: &'a GradedRing,
    k: usize,
    /// Tuple index (mixed radix) of each basis position.
    order: Vec<usize>,
    /// Basis position of each tuple index.
    pos: Vec<usize>,
}

impl<'a> TensorPower<'a> {
    pub fn new(ring: &'a GradedRing, k: usize) -> Self {
        let n = ring.dim().pow(k as u32);
        let mut tp = TensorPower { ring, k, order: Vec::new(), pos: vec![0; n] };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|i| (tp.tuple_degree(&tp.tuple(*i)), *i));
        for (p, i) in order.iter().enumerate() {
            tp.pos[*i] = p;
        }
        tp.order = order;
        tp
    }

    pub fn factors(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let d = self.ring.dim();
        let mut t = vec![0; self.k];
        for i in (0..self.k).rev() {
            t[i] = idx % d;
            idx /= d;
        }
        t
    }

    fn index(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, b| acc * self.ring.dim() + b)
    }

    fn tuple_degree(&self, t: &[usize]) -> u32 {
        t.iter().map(|b| self.ring.degree(*b)).sum()
    }

    /// Ring basis indices of the factors of basis vector `p`.
    pub fn factors_of(&self, p: usize) -> Vec<usize> {
        self.tuple(self.order[p])
    }

    pub fn position(&self, t: &[usize]) -> usize {
        self.pos[self.index(t)]
    }

    pub fn degree(&self, p: usize) -> u32 {
        self.tuple_degree(&self.factors_of(p))
    }

    pub fn label(&self, p: usize) -> String {
        if self.k == 0 {
            return "1".into();
        }
        self.factors_of(p).iter().map(|b| self.ring.label(*b)).collect::<Vec<_>>().join("⊗")
    }

    /// Tensor product of one ring element per factor.
    fn expand(&self, parts: &[SparseVec], coeff: &Q) -> SparseVec {
        let mut acc: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), coeff.clone())];
        for part in parts {
            let mut next = Vec::new();
            for (t, c) in &acc {
                for (b, cb) in part.iter() {
                    let mut t2 = t.clone();
                    t2.push(*b);
                    next.push((t2, c * cb));
                }
            }
            acc = next;
        }
        SparseVec::from_pairs(acc.into_iter().map(|(t, c)| (self.position(&t), c)))
    }

    /// `(a_1⊗…⊗a_k)(b_1⊗…⊗b_k) = ± a_1b_1⊗…⊗a_kb_k`, the sign coming from
    /// moving each `b_j` past `a_i` for `i > j`.
    pub fn mul_basis(&self, p: usize, r: usize) -> SparseVec {
        let (a, b) = (self.factors_of(p), self.factors_of(r));
        let mut odd = 0;
        for j in 0..self.k {
            for i in j + 1..self.k {
                odd += self.ring.degree(a[i]) * self.ring.degree(b[j]);
            }
        }
        let s = if odd % 2 == 1 { -q_one() } else { q_one() };
        let parts: Vec<SparseVec> = (0..self.k).map(|i| self.ring.mul_basis(a[i], b[i]).clone()).collect();
        self.expand(&parts, &s)
    }

    pub fn mul(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, a) in u.iter() {
            for (j, b) in v.iter() {
                out.add_scaled(&self.mul_basis(*i, *j), &(a * b));
            }
        }
        out
    }

    /// Coefficient of the top class `ω⊗…⊗ω` in `a·b`.
    pub fn pairing_matrix(&self) -> Option<RatMatrix> {
        let top = self.ring.top_class()?;
        let top_pos = self.position(&vec![top; self.k]);
        let n = self.dim();
        let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, self.mul_basis(i, j).get(top_pos)));
        Some(RatMatrix::from_entries(n, n, entries))
    }
}

/// Pullback along the map `M^{k_dst} → M^{k_src}` that repeats coordinates:
/// factor `i` of the source goes to factor `f[i]` of the target, and factors
/// landing in the same place are multiplied in source order.
pub fn restriction_matrix(src: &TensorPower, dst: &TensorPower, f: &[usize]) -> RatMatrix {
    let ring = src.ring;
    let cols = (0..src.dim())
        .map(|p| {
            let a = src.factors_of(p);
            // Koszul sign of the stable sort of the factors by target
            let mut odd = 0;
            for i in 0..a.len() {
                for j in i + 1..a.len() {
                    if f[i] > f[j] {
                        odd += ring.degree(a[i]) * ring.degree(a[j]);
                    }
                }
            }
            let mut parts = vec![SparseVec::unit(ring.unit()); dst.factors()];
            for (i, b) in a.iter().enumerate() {
                parts[f[i]] = ring.mul(&parts[f[i]], &SparseVec::unit(*b));
            }
            let s = if odd % 2 == 1 { q(-1) } else { q(1) };
            dst.expand(&parts, &s)
        })
        .collect();
    RatMatrix::from_columns(dst.dim(), cols)
}
