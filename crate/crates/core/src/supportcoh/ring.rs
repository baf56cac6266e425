use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{fmt_q, parse_q, q, q_one, RatMatrix, SparseVec, Q};

/// Finite graded-commutative ring with structure constants, e.g. `H*(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    pub name: String,
    labels: Vec<String>,
    degrees: Vec<u32>,
    unit: usize,
    table: Vec<Vec<SparseVec>>,
    top_class: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct RingJson {
    name: String,
    basis: Vec<BasisJson>,
    unit: String,
    products: Vec<(String, String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairing: Option<PairingJson>,
}

#[derive(Serialize, Deserialize)]
struct BasisJson {
    label: String,
    degree: u32,
}

#[derive(Serialize, Deserialize)]
struct PairingJson {
    top_class: String,
}

impl GradedRing {
    /// `products` lists `(i, j, k, c)` meaning `e_i e_j` has `c` on `e_k`.
    pub fn new(
        name: &str,
        labels: Vec<String>,
        degrees: Vec<u32>,
        unit: usize,
        products: &[(usize, usize, usize, Q)],
        top_class: Option<usize>,
    ) -> Result<GradedRing> {
        let n = labels.len();
        if degrees.len() != n || unit >= n || top_class.is_some_and(|t| t >= n) {
            return Err(Error::Schema("ring basis, unit and top class are inconsistent".into()));
        }
        let mut entries: Vec<Vec<Vec<(usize, Q)>>> = vec![vec![Vec::new(); n]; n];
        for (i, j, k, c) in products {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Schema(format!("product entry ({i},{j},{k}) out of range")));
            }
            entries[*i][*j].push((*k, c.clone()));
        }
        let table = entries.into_iter().map(|row| row.into_iter().map(SparseVec::from_pairs).collect()).collect();
        let r = GradedRing { name: name.to_string(), labels, degrees, unit, table, top_class };
        r.validate()?;
        Ok(r)
    }

    /// `Q[t]/t^{n+1}` with `|t| = 2` and top class `t^n`.
    pub fn projective(n: usize) -> GradedRing {
        let labels = (0..=n).map(|j| if j == 0 { "1".to_string() } else { format!("t^{j}") }).collect();
        let degrees = (0..=n as u32).map(|j| 2 * j).collect();
        let products: Vec<(usize, usize, usize, Q)> =
            (0..=n).flat_map(|i| (0..=n - i).map(move |j| (i, j, i + j, q(1)))).collect();
        GradedRing::new(&format!("P{n}"), labels, degrees, 0, &products, Some(n)).unwrap()
    }

    /// Cohomology of a genus-one curve: `1, a, b, w` with `ab = w = -ba`.
    pub fn elliptic() -> GradedRing {
        let labels = ["1", "a", "b", "w"].map(String::from).to_vec();
        let mut products: Vec<(usize, usize, usize, Q)> = (0..4).map(|i| (0, i, i, q(1))).collect();
        products.extend((1..4).map(|i| (i, 0, i, q(1))));
        products.push((1, 2, 3, q(1)));
        products.push((2, 1, 3, q(-1)));
        GradedRing::new("elliptic", labels, vec![0, 1, 1, 2], 0, &products, Some(3)).unwrap()
    }

    pub fn point() -> GradedRing {
        GradedRing::new("point", vec!["1".into()], vec![0], 0, &[(0, 0, 0, q(1))], Some(0)).unwrap()
    }

    /// Names: `point`, `p<n>`, `elliptic`.
    pub fn named(name: &str) -> Result<GradedRing> {
        let s = name.trim().to_ascii_lowercase();
        if s == "elliptic" || s == "genus1" || s == "e" {
            return Ok(GradedRing::elliptic());
        }
        if s == "point" {
            return Ok(GradedRing::point());
        }
        if let Some(n) = s.strip_prefix('p').and_then(|r| r.parse::<usize>().ok()) {
            if n >= 1 && n <= 8 {
                return Ok(GradedRing::projective(n));
            }
        }
        Err(Error::Schema(format!("unknown space {name:?}; use p<n>, elliptic or point")))
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn top_class(&self) -> Option<usize> {
        self.top_class
    }

    pub fn top_degree(&self) -> Option<u32> {
        self.top_class.map(|t| self.degrees[t])
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                out.add_scaled(&self.table[*i][*j], &(x * y));
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|d| if d % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// `P[i][j]` is the coefficient of the top class in `e_i e_j`.
    pub fn pairing_matrix(&self) -> Result<RatMatrix> {
        let top = self.top_class.ok_or(Error::NoPairing)?;
        let n = self.dim();
        let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, self.table[i][j].get(top)));
        Ok(RatMatrix::from_entries(n, n, entries))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            if self.table[self.unit][i] != SparseVec::unit(i) || self.table[i][self.unit] != SparseVec::unit(i) {
                return Err(Error::InvariantViolation(format!("ring {}: unit law fails on {}", self.name, self.labels[i])));
            }
            for j in 0..n {
                let v = &self.table[i][j];
                if v.iter().any(|(k, _)| self.degrees[*k] != self.degrees[i] + self.degrees[j]) {
                    return Err(Error::InvariantViolation(format!("ring {}: product of degree-{} and degree-{} classes has wrong degree", self.name, self.degrees[i], self.degrees[j])));
                }
                let s = if self.degrees[i] * self.degrees[j] % 2 == 1 { -q_one() } else { q_one() };
                if *v != self.table[j][i].scaled(&s) {
                    return Err(Error::InvariantViolation(format!(
                        "ring {}: graded commutativity fails on ({}, {})",
                        self.name, self.labels[i], self.labels[j]
                    )));
                }
                for k in 0..n {
                    let left = self.mul(v, &SparseVec::unit(k));
                    let right = self.mul(&SparseVec::unit(i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::InvariantViolation(format!(
                            "ring {}: associativity fails on ({}, {}, {})",
                            self.name, self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        if let Some(top) = self.top_class {
            let d = self.degrees[top];
            if (0..n).any(|i| self.degrees[i] > d) || self.degrees.iter().filter(|x| **x == d).count() != 1 {
                return Err(Error::InvariantViolation(format!("ring {}: top class is not the unique top-degree class", self.name)));
            }
            if self.pairing_matrix()?.inverse().is_none() {
                return Err(Error::InvariantViolation(format!("ring {}: Poincaré pairing is degenerate", self.name)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let products = (0..self.dim())
            .flat_map(|i| (0..self.dim()).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                self.table[i][j]
                    .iter()
                    .map(move |(k, c)| (self.labels[i].clone(), self.labels[j].clone(), self.labels[*k].clone(), fmt_q(c)))
            })
            .collect();
        let raw = RingJson {
            name: self.name.clone(),
            basis: self.labels.iter().zip(&self.degrees).map(|(l, d)| BasisJson { label: l.clone(), degree: *d }).collect(),
            unit: self.labels[self.unit].clone(),
            products,
            pairing: self.top_class.map(|t| PairingJson { top_class: self.labels[t].clone() }),
        };
        serde_json::to_string_pretty(&raw).unwrap()
    }

    pub fn from_json(text: &str) -> Result<GradedRing> {
        let raw: RingJson = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let labels: Vec<String> = raw.basis.iter().map(|b| b.label.clone()).collect();
        let find = |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| Error::Schema(format!("unknown basis label {l:?}")));
        let mut products = Vec::new();
        for (a, b, c, v) in &raw.products {
            products.push((find(a)?, find(b)?, find(c)?, parse_q(v)?));
        }
        let top = raw.pairing.as_ref().map(|p| find(&p.top_class)).transpose()?;
        GradedRing::new(&raw.name, labels.clone(), raw.basis.iter().map(|b| b.degree).collect(), find(&raw.unit)?, &products, top)
    }
}
