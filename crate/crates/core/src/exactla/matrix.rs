use num_traits::Zero;

use super::echelon::Echelon;
use super::rational::{q_one, Q};
use super::sparse::SparseVec;

/// Sparse exact matrix stored by columns; column `j` is the image of the
/// `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        RatMatrix { rows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().map_or(true, |m| m < rows)));
        RatMatrix { rows, cols }
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, usize, Q)>>(rows: usize, cols: usize, entries: I) -> Self {
        let mut per_col: Vec<Vec<(usize, Q)>> = vec![Vec::new(); cols];
        for (r, c, x) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            per_col[c].push((r, x));
        }
        RatMatrix { rows, cols: per_col.into_iter().map(SparseVec::from_pairs).collect() }
    }

    pub fn from_dense_rows(rows: &[Vec<Q>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, x)| (i, j, x.clone())));
        RatMatrix::from_entries(rows.len(), ncols, entries)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|x| super::rational::q(*x)).collect()).collect();
        RatMatrix::from_dense_rows(&dense)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.cols[c].get(r)
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.ncols()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, x) in col.iter() {
                out[*i][j] = x.clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> RatMatrix {
        let entries = self.cols.iter().enumerate().flat_map(|(j, col)| col.iter().map(move |(i, x)| (j, *i, x.clone())));
        RatMatrix::from_entries(self.ncols(), self.rows, entries)
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, x) in v.iter() {
            out.add_scaled(&self.cols[*j], x);
        }
        out
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.ncols(), other.rows, "shape mismatch in product");
        RatMatrix { rows: self.rows, cols: other.cols.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.ncols()), (other.rows, other.ncols()));
        RatMatrix { rows: self.rows, cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scaled(&self, c: &Q) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols.iter().map(|a| a.scaled(c)).collect() }
    }

    /// Exact inverse, or `None` when singular or not square.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.rows;
        if self.ncols() != n {
            return None;
        }
        let mut ech = Echelon::new(true);
        for c in &self.cols {
            if !ech.push(c) {
                return None;
            }
        }
        let mut cols = Vec::with_capacity(n);
        for i in 0..n {
            cols.push(ech.express(&SparseVec::unit(i))?);
        }
        Some(RatMatrix { rows: n, cols })
    }

    /// Rows `rs` and columns `cs` of this matrix, in the given order.
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> RatMatrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, r) in rs.iter().enumerate() {
            pos[*r] = k;
        }
        let cols = cs
            .iter()
            .map(|c| {
                SparseVec::from_pairs(
                    self.cols[*c].iter().filter(|(i, _)| pos[*i] != usize::MAX).map(|(i, x)| (pos[*i], x.clone())),
                )
            })
            .collect();
        RatMatrix { rows: rs.len(), cols }
    }

    pub fn negated(&self) -> RatMatrix {
        self.scaled(&-q_one())
    }
}
