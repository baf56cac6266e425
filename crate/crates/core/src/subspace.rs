//! Arrangements of affine subspaces of `Cⁿ`: the formal model with zero
//! differential, region counts of real arrangements, and the Orlik-Solomon
//! ring of a hyperplane complement.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::exactla::{kernel_basis, parse_q_json, rank, RatMatrix, SparseVec, Q};
use crate::mvss::{build_e1_lattice, cohomology, CohomologyRing, E1Algebra};
use crate::oscomplex::os_algebra;
use crate::poset::{intersection_poset, GradedPoset};
use crate::supportcoh::affine_support_with_codims;

/// Subsets are enumerated, so the coordinate front end stops here.
pub const MAX_COORDINATE_SUBSPACES: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceArrangement {
    pub ambient_dim: usize,
    pub poset: GradedPoset,
    /// Complex codimension of each element.
    pub codims: Vec<usize>,
}

impl SubspaceArrangement {
    pub fn new(ambient_dim: usize, poset: GradedPoset, codims: Vec<usize>) -> Result<Self> {
        if codims.len() != poset.len() {
            return Err(Error::Schema("one codimension per poset element is required".into()));
        }
        if !poset.is_locally_geometric() {
            return Err(Error::NotLocallyGeometric("intersection poset of the arrangement".into()));
        }
        // also checks that codimension grows along covers
        affine_support_with_codims(ambient_dim, &poset, &codims)?;
        Ok(SubspaceArrangement { ambient_dim, poset, codims })
    }

    /// Codimension equal to rank everywhere.
    pub fn from_poset(ambient_dim: usize, poset: GradedPoset) -> Result<Self> {
        let codims = (0..poset.len()).map(|x| poset.rank(x)).collect();
        SubspaceArrangement::new(ambient_dim, poset, codims)
    }

    pub fn is_hyperplane_arrangement(&self) -> bool {
        self.poset.atoms().iter().all(|a| self.codims[*a] == 1)
    }

    /// Either `{"ambient_dim", "poset", "codims"?}` or
    /// `{"ambient_dim", "subspaces": [{"basis_point", "directions"}]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let n = v["ambient_dim"].as_u64().ok_or_else(|| Error::Schema("missing \"ambient_dim\"".into()))? as usize;
        if let Some(subs) = v.get("subspaces") {
            let subs = subs.as_array().ok_or_else(|| Error::Schema("\"subspaces\" must be an array".into()))?;
            let parsed = subs.iter().map(AffineSubspace::from_json).collect::<Result<Vec<_>>>()?;
            return from_coordinates(n, &parsed);
        }
        let poset = GradedPoset::from_json_str_value(&v["poset"])?;
        match v.get("codims") {
            None => SubspaceArrangement::from_poset(n, poset),
            Some(c) => {
                let c = c.as_object().ok_or_else(|| Error::Schema("\"codims\" must map ids to integers".into()))?;
                let mut codims = vec![None; poset.len()];
                for (id, val) in c {
                    let x = poset.index_of(id)?;
                    codims[x] = Some(val.as_u64().ok_or_else(|| Error::Schema(format!("codim of {id} must be an integer")))? as usize);
                }
                let codims = codims
                    .into_iter()
                    .enumerate()
                    .map(|(x, c)| c.ok_or_else(|| Error::Schema(format!("missing codim for {}", poset.id(x)))))
                    .collect::<Result<Vec<_>>>()?;
                SubspaceArrangement::new(n, poset, codims)
            }
        }
    }
}

/// `basis_point + span(directions)` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub basis_point: Vec<Q>,
    pub directions: Vec<Vec<Q>>,
}

impl AffineSubspace {
    fn from_json(v: &Value) -> Result<Self> {
        let vector = |v: &Value| -> Result<Vec<Q>> {
            v.as_array().ok_or_else(|| Error::Schema("coordinates must be an array".into()))?.iter().map(parse_q_json).collect()
        };
        let basis_point = vector(&v["basis_point"])?;
        let directions = match v.get("directions") {
            None => Vec::new(),
            Some(d) => d
                .as_array()
                .ok_or_else(|| Error::Schema("\"directions\" must be an array".into()))?
                .iter()
                .map(vector)
                .collect::<Result<_>>()?,
        };
        Ok(AffineSubspace { basis_point, directions })
    }

    /// Rows `(a, a·p)` of the affine equations `a·x = a·p`.
    fn equations(&self, n: usize) -> Result<Vec<Vec<Q>>> {
        if self.basis_point.len() != n || self.directions.iter().any(|d| d.len() != n) {
            return Err(Error::Schema(format!("subspace coordinates must have length {n}")));
        }
        let normals = if self.directions.is_empty() {
            (0..n).map(SparseVec::unit).collect()
        } else {
            kernel_basis(&RatMatrix::from_dense_rows(&self.directions))
        };
        Ok(normals
            .iter()
            .map(|a| {
                let mut row = a.to_dense(n);
                row.push(a.dot(&SparseVec::from_dense(&self.basis_point)));
                row
            })
            .collect())
    }
}

fn matrix_rank(rows: &[Vec<Q>], cols: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rank(&RatMatrix::from_dense_rows(&rows.iter().map(|r| r[..cols].to_vec()).collect::<Vec<_>>()))
}

/// Intersection poset of explicitly given affine subspaces, computed by exact
/// rank comparisons over every subset.
pub fn from_coordinates(n: usize, subspaces: &[AffineSubspace]) -> Result<SubspaceArrangement> {
    let m = subspaces.len();
    if m > MAX_COORDINATE_SUBSPACES {
        return Err(Error::Schema(format!("at most {MAX_COORDINATE_SUBSPACES} subspaces are supported")));
    }
    let eqs: Vec<Vec<Vec<Q>>> = subspaces.iter().map(|s| s.equations(n)).collect::<Result<_>>()?;
    // distinct nonempty flats as (equations, codim)
    let mut flats: Vec<(Vec<Vec<Q>>, usize)> = Vec::new();
    let mut flat_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for s in 0..1u64 << m {
        let atoms: Vec<usize> = (0..m).filter(|i| s >> i & 1 == 1).collect();
        let rows: Vec<Vec<Q>> = atoms.iter().flat_map(|a| eqs[*a].iter().cloned()).collect();
        let codim = matrix_rank(&rows, n);
        if matrix_rank(&rows, n + 1) > codim {
            continue;
        }
        let same = |f: &(Vec<Vec<Q>>, usize)| {
            f.1 == codim && {
                let both: Vec<Vec<Q>> = rows.iter().chain(f.0.iter()).cloned().collect();
                matrix_rank(&both, n + 1) == codim
            }
        };
        let k = match flats.iter().position(same) {
            Some(k) => k,
            None => {
                flats.push((rows.clone(), codim));
                flats.len() - 1
            }
        };
        flat_of.insert(atoms, k);
    }
    for a in 0..m {
        for b in a + 1..m {
            if flat_of.get(&vec![a]) == flat_of.get(&vec![b]) {
                return Err(Error::Schema(format!("subspaces {a} and {b} coincide")));
            }
        }
    }
    if flat_of.values().filter(|k| **k == flat_of[&Vec::new()]).count() > 1 {
        return Err(Error::Schema("a subspace equals the whole space".into()));
    }
    // label each flat by its largest generating set
    let mut gens: Vec<Vec<usize>> = vec![Vec::new(); flats.len()];
    for (atoms, k) in &flat_of {
        if atoms.len() >= gens[*k].len() {
            gens[*k] = atoms.clone();
        }
    }
    let label = |k: usize| -> String {
        if gens[k].is_empty() {
            "V".into()
        } else {
            format!("Z{}", gens[k].iter().map(|a| a.to_string()).collect::<Vec<_>>().join("."))
        }
    };
    let strata: BTreeMap<Vec<usize>, String> = flat_of.iter().map(|(s, k)| (s.clone(), label(*k))).collect();
    let poset = intersection_poset(m, &strata)?;
    let mut codims = vec![0; poset.len()];
    for (k, f) in flats.iter().enumerate() {
        codims[poset.index_of(&label(k))?] = f.1;
    }
    SubspaceArrangement::new(n, poset, codims)
}

/// `⊕_x τ^{c_x}·OS_x` with zero differential, as an E1 page.
pub fn formality_model(arr: &SubspaceArrangement) -> Result<E1Algebra> {
    let supp = affine_support_with_codims(arr.ambient_dim, &arr.poset, &arr.codims)?;
    let os = os_algebra(&arr.poset)?;
    let e1 = build_e1_lattice(&os, &supp)?;
    if (0..e1.dim()).any(|i| !e1.dga().d_basis(i).is_zero()) {
        return Err(Error::InvariantViolation("the affine model has a nonzero differential".into()));
    }
    Ok(e1)
}

/// `Σ_x |μ(0,x)|`, checked against `Σ_x dim OS_x`.
pub fn zaslavsky_regions(poset: &GradedPoset) -> Result<u64> {
    let mu: u64 = (0..poset.len()).map(|x| poset.moebius(x).unsigned_abs()).sum();
    let os = os_algebra(poset)?;
    let total = os.total_dim() as u64;
    if total != mu {
        return Err(Error::InvariantViolation(format!("Σ dim OS_x = {total} but Σ |μ(0,x)| = {mu}")));
    }
    Ok(mu)
}

/// `Σ_{r(x)=k} μ(0,x)` for each rank `k`.
pub fn whitney_numbers(poset: &GradedPoset) -> Vec<i64> {
    let mut w = vec![0; poset.max_rank() + 1];
    for x in 0..poset.len() {
        w[poset.rank(x)] += poset.moebius(x);
    }
    w
}

/// `H*(U)` of a complex hyperplane arrangement, `Hⁿ = ⊕_{r(x)=n} OS_x`.
pub fn complex_hyperplane_ring(arr: &SubspaceArrangement) -> Result<CohomologyRing> {
    if let Some(a) = arr.poset.atoms().iter().find(|a| arr.codims[**a] != 1) {
        return Err(Error::AtomCodimViolation(format!("atom {} has codim {}", arr.poset.id(*a), arr.codims[*a])));
    }
    cohomology(&formality_model(arr)?)
}

#[cfg(test)]
mod tests;
