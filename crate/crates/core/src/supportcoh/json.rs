use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{GradedSpace, SupportModule};
use crate::error::{Error, Result};
use crate::exactla::{fmt_q, parse_q_json, q_one, RatMatrix, SparseVec};
use crate::oscomplex::ProductTable;
use crate::poset::GradedPoset;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModuleJson {
    poset: Value,
    spaces: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    cover_maps: BTreeMap<String, BTreeMap<String, Vec<Vec<Value>>>>,
    #[serde(default)]
    products: BTreeMap<String, BTreeMap<String, Vec<Vec<Value>>>>,
    #[serde(default)]
    weight_offset: BTreeMap<String, i32>,
}

fn schema(s: impl Into<String>) -> Error {
    Error::Schema(s.into())
}

fn parse_deg(s: &str) -> Result<i32> {
    s.trim().parse().map_err(|_| schema(format!("degree key {s:?} is not an integer")))
}

fn parse_index(v: &Value) -> Result<usize> {
    v.as_u64().map(|i| i as usize).ok_or_else(|| schema(format!("{v} is not an index")))
}

/// Loads a module from `{"poset", "spaces": {id: {deg: dim}}, "cover_maps":
/// {"y<:x": {deg: rows}}, "products": {"x*y->t": {"da,db": [[i,j,k,c]]}},
/// "weight_offset": {id: n}}`. Matrix blocks and product indices are local to
/// the degree blocks; a block key `"d->e"` maps degree `d` to degree `e` and
/// is rejected unless `d = e`. A product given for `x*y` but not `y*x` is completed by
/// graded commutativity. Every invariant is checked.
pub fn custom_support(text: &str) -> Result<SupportModule> {
    let raw: ModuleJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let poset = GradedPoset::from_json_str_value(&raw.poset)?;
    let mut spaces = Vec::new();
    for x in 0..poset.len() {
        let id = poset.id(x);
        let dims = raw.spaces.get(id).ok_or_else(|| schema(format!("no space given for {id}")))?;
        let mut by_deg = BTreeMap::new();
        for (d, n) in dims {
            by_deg.insert(parse_deg(d)?, *n);
        }
        let degrees: Vec<i32> = by_deg.iter().flat_map(|(d, n)| std::iter::repeat(*d).take(*n)).collect();
        let labels = match raw.labels.get(id) {
            Some(l) if l.len() == degrees.len() => l.clone(),
            Some(_) => return Err(schema(format!("labels of {id} do not match its dimension"))),
            None => (0..degrees.len()).map(|i| format!("{id}#{i}")).collect(),
        };
        spaces.push(GradedSpace::new(degrees, labels)?);
    }
    for k in raw.spaces.keys().chain(raw.weight_offset.keys()) {
        poset.index_of(k)?;
    }
    let mut maps = BTreeMap::new();
    for (key, blocks) in &raw.cover_maps {
        let (ys, xs) = key.split_once("<:").ok_or_else(|| schema(format!("cover map key {key:?} is not y<:x")))?;
        let (y, x) = (poset.index_of(ys.trim())?, poset.index_of(xs.trim())?);
        let (sy, sx) = (&spaces[y], &spaces[x]);
        let mut entries = Vec::new();
        for (d, rows) in blocks {
            // "d" is a degree-preserving block; "d->e" maps degree d to degree e
            let (ds, es) = d.split_once("->").unwrap_or((d, d));
            let (ds, es) = (parse_deg(ds)?, parse_deg(es)?);
            let (ry, rx) = (sy.block(es), sx.block(ds));
            if rows.len() != ry.len() || rows.iter().any(|r| r.len() != rx.len()) {
                return Err(schema(format!("cover map {key} block {d} has the wrong shape")));
            }
            for (i, row) in rows.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    entries.push((ry.start + i, rx.start + j, parse_q_json(c)?));
                }
            }
        }
        maps.insert((y, x), RatMatrix::from_entries(sy.dim(), sx.dim(), entries));
    }
    let mut products: BTreeMap<(usize, usize, usize), ProductTable> = BTreeMap::new();
    for (key, blocks) in &raw.products {
        let (xy, ts) = key.split_once("->").ok_or_else(|| schema(format!("product key {key:?} is not x*y->t")))?;
        let (xs, ys) = xy.split_once('*').ok_or_else(|| schema(format!("product key {key:?} is not x*y->t")))?;
        let (x, y, t) = (poset.index_of(xs.trim())?, poset.index_of(ys.trim())?, poset.index_of(ts.trim())?);
        let mut pairs: Vec<(usize, usize, usize, crate::exactla::Q)> = Vec::new();
        for (dk, list) in blocks {
            let (da, db) = dk.split_once(',').ok_or_else(|| schema(format!("product degree key {dk:?} is not da,db")))?;
            let (da, db) = (parse_deg(da)?, parse_deg(db)?);
            let (ba, bb, bt) = (spaces[x].block(da), spaces[y].block(db), spaces[t].block(da + db));
            for e in list {
                if e.len() != 4 {
                    return Err(schema(format!("product entry in {key} must be [i, j, k, c]")));
                }
                let (i, j, k) = (parse_index(&e[0])?, parse_index(&e[1])?, parse_index(&e[2])?);
                if i >= ba.len() || j >= bb.len() || k >= bt.len() {
                    return Err(schema(format!("product entry [{i},{j},{k}] in {key} degree {dk} is out of range")));
                }
                pairs.push((ba.start + i, bb.start + j, bt.start + k, parse_q_json(&e[3])?));
            }
        }
        let tab = products.entry((x, y, t)).or_default();
        for (i, j, k, c) in pairs {
            tab.entry((i, j)).or_default().add_scaled(&SparseVec::unit(k), &c);
        }
        tab.retain(|_, v| !v.is_zero());
    }
    let given: Vec<(usize, usize, usize)> = products.keys().copied().collect();
    for (x, y, t) in given {
        if x != y && !products.contains_key(&(y, x, t)) {
            let mirrored: ProductTable = products[&(x, y, t)]
                .iter()
                .map(|((i, j), v)| {
                    let odd = spaces[x].degrees[*i] * spaces[y].degrees[*j] % 2 != 0;
                    ((*j, *i), if odd { v.scaled(&-q_one()) } else { v.clone() })
                })
                .collect();
            products.insert((y, x, t), mirrored);
        }
    }
    let offsets = (0..poset.len()).map(|x| raw.weight_offset.get(poset.id(x)).copied().unwrap_or(0)).collect();
    SupportModule::new(poset, spaces, maps, products, offsets)
}

impl SupportModule {
    pub fn to_json(&self) -> String {
        let l = &self.poset;
        let mut spaces = BTreeMap::new();
        let mut labels = BTreeMap::new();
        for x in 0..l.len() {
            let s = &self.spaces[x];
            spaces.insert(l.id(x).to_string(), s.dims_by_degree().into_iter().map(|(d, n)| (d.to_string(), n)).collect());
            labels.insert(l.id(x).to_string(), s.labels.clone());
        }
        let mut cover_maps = BTreeMap::new();
        for ((y, x), m) in &self.cover_maps {
            let mut blocks = BTreeMap::new();
            for d in self.spaces[*x].dims_by_degree().keys() {
                let (ry, rx) = (self.spaces[*y].block(*d), self.spaces[*x].block(*d));
                if ry.is_empty() {
                    continue;
                }
                let rows: Vec<Vec<Value>> =
                    ry.clone().map(|i| rx.clone().map(|j| Value::String(fmt_q(&m.get(i, j)))).collect()).collect();
                blocks.insert(d.to_string(), rows);
            }
            if !blocks.is_empty() {
                cover_maps.insert(format!("{}<:{}", l.id(*y), l.id(*x)), blocks);
            }
        }
        let mut products = BTreeMap::new();
        for ((x, y, t), tab) in &self.products {
            let mut blocks: BTreeMap<String, Vec<Vec<Value>>> = BTreeMap::new();
            for ((i, j), v) in tab {
                let (da, db) = (self.spaces[*x].degrees[*i], self.spaces[*y].degrees[*j]);
                let (ba, bb, bt) = (self.spaces[*x].block(da), self.spaces[*y].block(db), self.spaces[*t].block(da + db));
                for (k, c) in v.iter() {
                    blocks.entry(format!("{da},{db}")).or_default().push(vec![
                        Value::from(i - ba.start),
                        Value::from(j - bb.start),
                        Value::from(k - bt.start),
                        Value::String(fmt_q(c)),
                    ]);
                }
            }
            products.insert(format!("{}*{}->{}", l.id(*x), l.id(*y), l.id(*t)), blocks);
        }
        let raw = ModuleJson {
            poset: serde_json::from_str(&l.to_json()).expect("poset JSON is valid"),
            spaces,
            labels,
            cover_maps,
            products,
            weight_offset: (0..l.len()).map(|x| (l.id(x).to_string(), self.weight_offset[x])).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("serializable")
    }
}
