use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::dga::FiniteDga;
use crate::error::{Error, Result};
use crate::exactla::{fmt_q, parse_q_json, RatMatrix, SparseVec};
use crate::oscomplex::Mask;
use crate::poset::subset_id;

use super::{parse_rows, CubicalDiagram};

fn algebra_to_json(a: &FiniteDga) -> Value {
    let differential: Vec<Value> = (0..a.dim())
        .flat_map(|s| a.d_basis(s).iter().map(move |(t, c)| json!([s, t, fmt_q(c)])).collect::<Vec<_>>())
        .collect();
    let mut products = Vec::new();
    for i in 0..a.dim() {
        for (j, v) in a.product_row(i) {
            for (k, c) in v.iter() {
                products.push(json!([i, j, k, fmt_q(c)]));
            }
        }
    }
    json!({"degrees": a.degrees(), "differential": differential, "products": products})
}

pub(super) fn diagram_to_json(d: &CubicalDiagram) -> String {
    let n = d.atoms();
    let algebras: serde_json::Map<String, Value> =
        (0..1u64 << n).map(|i| (subset_id(i, n), algebra_to_json(d.algebra(i)))).collect();
    let maps: serde_json::Map<String, Value> = d
        .cover_maps()
        .iter()
        .map(|((j, i), m)| {
            let rows: Vec<Vec<String>> = m.to_dense_rows().iter().map(|r| r.iter().map(fmt_q).collect()).collect();
            (format!("{}->{}", subset_id(*i, n), subset_id(*j, n)), json!(rows))
        })
        .collect();
    serde_json::to_string_pretty(&json!({"atoms": n, "algebras": algebras, "maps": maps})).unwrap()
}

fn parse_subset(s: &str, n: usize) -> Result<Mask> {
    let inner = s.trim().strip_prefix('{').and_then(|t| t.strip_suffix('}'));
    let inner = inner.ok_or_else(|| Error::Schema(format!("bad subset {s:?}")))?;
    let mut m = 0;
    for t in inner.split(',').filter(|t| !t.trim().is_empty()) {
        let a: usize = t.trim().parse().map_err(|_| Error::Schema(format!("bad atom in {s:?}")))?;
        if a >= n {
            return Err(Error::Schema(format!("atom {a} out of range in {s:?}")));
        }
        m |= 1 << a;
    }
    Ok(m)
}

fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::Schema(format!("{what} must be a non-negative integer")))
}

fn algebra_from_json(v: &Value) -> Result<FiniteDga> {
    let degrees: Vec<i32> = v["degrees"]
        .as_array()
        .ok_or_else(|| Error::Schema("algebra needs \"degrees\"".into()))?
        .iter()
        .map(|d| d.as_i64().map(|x| x as i32).ok_or_else(|| Error::Schema("degree must be an integer".into())))
        .collect::<Result<_>>()?;
    let n = degrees.len();
    let mut diff = vec![SparseVec::new(); n];
    for e in v["differential"].as_array().map(|a| a.as_slice()).unwrap_or(&[]) {
        let (s, t) = (index(&e[0], "differential source")?, index(&e[1], "differential target")?);
        if s >= n || t >= n {
            return Err(Error::Schema("differential index out of range".into()));
        }
        diff[s].add_scaled(&SparseVec::unit(t), &parse_q_json(&e[2])?);
    }
    let mut prods: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for e in v["products"].as_array().map(|a| a.as_slice()).unwrap_or(&[]) {
        let (i, j, k) = (index(&e[0], "product index")?, index(&e[1], "product index")?, index(&e[2], "product index")?);
        if i >= n || j >= n || k >= n {
            return Err(Error::Schema("product index out of range".into()));
        }
        prods.entry((i, j)).or_default().add_scaled(&SparseVec::unit(k), &parse_q_json(&e[3])?);
    }
    Ok(FiniteDga::new(degrees, diff, prods))
}

pub(super) fn diagram_from_json(text: &str) -> Result<CubicalDiagram> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let n = index(&v["atoms"], "atoms")?;
    if n > super::MAX_ATOMS {
        return Err(Error::Schema(format!("cubical diagrams are limited to {} atoms", super::MAX_ATOMS)));
    }
    let algs = v["algebras"].as_object().ok_or_else(|| Error::Schema("missing \"algebras\"".into()))?;
    let mut algebras: Vec<Option<FiniteDga>> = vec![None; 1 << n];
    for (k, a) in algs {
        algebras[parse_subset(k, n)? as usize] = Some(algebra_from_json(a)?);
    }
    let algebras = algebras
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.ok_or_else(|| Error::Schema(format!("missing algebra {}", subset_id(i as u64, n)))))
        .collect::<Result<Vec<_>>>()?;
    let mut maps = BTreeMap::new();
    for (k, rows) in v["maps"].as_object().ok_or_else(|| Error::Schema("missing \"maps\"".into()))? {
        let (a, b) = k.split_once("->").ok_or_else(|| Error::Schema(format!("map key {k:?} is not \"I->J\"")))?;
        let (i, j) = (parse_subset(a, n)?, parse_subset(b, n)?);
        if i & !j != 0 || (j & !i).count_ones() != 1 {
            return Err(Error::Schema(format!("map {k:?} is not along a cover")));
        }
        let rows = parse_rows(rows)?;
        let cols = algebras[i as usize].dim();
        let m = if rows.is_empty() {
            RatMatrix::zeros(0, cols)
        } else {
            RatMatrix::from_dense_rows(&rows)
        };
        maps.insert((j, i), m);
    }
    CubicalDiagram::new(n, algebras, maps)
}
