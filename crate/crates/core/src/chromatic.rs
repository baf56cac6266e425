//! Chromatic configuration spaces `F(M, G)`: the E1 model over the partition
//! lattice of `G`, the generators-and-relations presentation with one odd
//! generator `Δ̃_ab` per edge, and the chromatic-polynomial Euler check.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactla::{fmt_q, q_one, rank, RatMatrix, SparseVec};
use crate::graph::Graph;
use crate::mvss::{build_e1_lattice, cohomology, E1Algebra};
use crate::oscomplex::{koszul_partial, mask_of, members, os_algebra, wedge_sign, Mask};
use crate::poset::{partition_blocks, GradedPoset};
use crate::supportcoh::{diagonal_support, GradedRing, SupportModule, TensorPower};

#[derive(Clone, Debug)]
pub struct ChromaticModel {
    pub graph: Graph,
    pub ring: GradedRing,
    pub support: SupportModule,
    pub e1: E1Algebra,
    pub presentation: Presentation,
}

/// Relations of the model, expanded over the basis of `H*(M)`.
#[derive(Clone, Debug, Serialize)]
pub struct Presentation {
    /// `(a, b)` with `a < b`, one per edge.
    pub generators: Vec<(usize, usize)>,
    pub generator_degree: u32,
    /// `dΔ̃_ab = [Δ_ab]` written in the Künneth basis of `H*(M^n)`.
    pub differentials: Vec<String>,
    pub relations: Vec<String>,
    pub cycles: Vec<Vec<usize>>,
}

pub fn chromatic_model(ring: &GradedRing, graph: &Graph) -> Result<ChromaticModel> {
    let support = diagonal_support(ring, graph)?;
    let os = os_algebra(support.poset())?;
    let e1 = build_e1_lattice(&os, &support)?;
    let presentation = presentation(ring, graph)?;
    Ok(ChromaticModel { graph: graph.clone(), ring: ring.clone(), support, e1, presentation })
}

/// Simple cycles up to rotation and reflection: each starts at its smallest
/// vertex and its second vertex is smaller than its last.
pub fn simple_cycles(g: &Graph) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let (s, last) = (path[0], *path.last().unwrap());
        for w in g.neighbours(last) {
            if w == s && path.len() >= 3 && path[1] < last {
                out.push(path.clone());
            } else if w > s && !path.contains(&w) {
                path.push(w);
                extend(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..g.vertices {
        extend(g, &mut vec![s], &mut out);
    }
    out.sort();
    out
}

/// Coefficients (constant term first) of the chromatic polynomial, by
/// deletion and contraction.
pub fn chromatic_polynomial(g: &Graph) -> Vec<i64> {
    fn rec(n: usize, edges: &BTreeSet<(usize, usize)>) -> Vec<i64> {
        let Some(&(a, b)) = edges.iter().next() else {
            let mut p = vec![0; n + 1];
            p[n] = 1;
            return p;
        };
        let mut deleted = edges.clone();
        deleted.remove(&(a, b));
        // contract b into a and renumber vertices above b
        let relabel = |v: usize| {
            let v = if v == b { a } else { v };
            if v > b {
                v - 1
            } else {
                v
            }
        };
        let contracted: BTreeSet<(usize, usize)> = deleted
            .iter()
            .map(|(u, v)| (relabel(*u), relabel(*v)))
            .filter(|(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        let mut p = rec(n, &deleted);
        for (i, c) in rec(n - 1, &contracted).into_iter().enumerate() {
            p[i] -= c;
        }
        p
    }
    rec(g.vertices, &g.edges.iter().map(|e| (e[0], e[1])).collect())
}

pub fn eval_polynomial(p: &[i64], x: i64) -> i64 {
    p.iter().rev().fold(0, |acc, c| acc * x + c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

/// `χ` from the Betti numbers of the model against `p_G(χ(M))`.
pub fn chromatic_euler_check(model: &ChromaticModel) -> Result<EulerCheck> {
    let lhs = cohomology(&model.e1)?.euler_characteristic();
    let rhs = eval_polynomial(&chromatic_polynomial(&model.graph), model.ring.euler_characteristic());
    Ok(EulerCheck { lhs, rhs, equal: lhs == rhs })
}

fn tensor_label(tp: &TensorPower, v: &SparseVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter()
        .map(|(i, c)| {
            let l = tp.label(*i);
            if *c == q_one() {
                l
            } else {
                format!("{}·{l}", fmt_q(c))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Class of the diagonal `{x_a = x_b}` in `H*(M^n)`.
fn diagonal_class(ring: &GradedRing, n: usize, a: usize, b: usize) -> Result<SparseVec> {
    let pair = diagonal_support(ring, &Graph::complete(2))?;
    let two = TensorPower::new(ring, 2);
    let big = TensorPower::new(ring, n);
    let class = pair.cover_map(0, 1).expect("K2 has one cover").column(0);
    let mut out = SparseVec::new();
    for (p, c) in class.iter() {
        let f = two.factors_of(*p);
        let mut t = vec![ring.unit(); n];
        t[a] = f[0];
        t[b] = f[1];
        out.add_scaled(&SparseVec::unit(big.position(&t)), c);
    }
    Ok(out)
}

fn presentation(ring: &GradedRing, g: &Graph) -> Result<Presentation> {
    let top = ring.top_degree().ok_or(Error::NoPairing)?;
    let n = g.vertices;
    let tp = TensorPower::new(ring, n);
    let gens: Vec<(usize, usize)> = g.edges.iter().map(|e| (e[0], e[1])).collect();
    let name = |(a, b): (usize, usize)| format!("Δ̃_{a}{b}");
    let mut differentials = Vec::new();
    for e in &gens {
        differentials.push(format!("d{} = {}", name(*e), tensor_label(&tp, &diagonal_class(ring, n, e.0, e.1)?)));
    }
    let mut relations = Vec::new();
    for e in &gens {
        relations.push(format!("{} = {}", name(*e), name((e.1, e.0))));
        relations.push(format!("{}² = 0", name(*e)));
    }
    let cycles = simple_cycles(g);
    for c in &cycles {
        let k = c.len();
        let edges: Vec<String> = (0..k).map(|i| name((c[i], c[(i + 1) % k]))).collect();
        let terms: Vec<String> = (0..k)
            .map(|i| {
                let rest: Vec<&str> = (0..k).filter(|j| *j != i).map(|j| edges[j].as_str()).collect();
                format!("{}{}", if i % 2 == 0 { "+ " } else { "- " }, rest.join("·"))
            })
            .collect();
        relations.push(format!("{} = 0", terms.join(" ").trim_start_matches("+ ")));
    }
    for e in &gens {
        for gamma in 0..ring.dim() {
            if ring.degree(gamma) == 0 {
                continue;
            }
            let lab = ring.label(gamma);
            relations.push(format!("{lab}_{}·{} = {lab}_{}·{}", e.0, name(*e), e.1, name(*e)));
        }
    }
    Ok(Presentation { generators: gens, generator_degree: top - 1, differentials, relations, cycles })
}

/// Partition of the vertices spanned by an edge set, as a lattice id.
fn closure_id(g: &Graph, edges: Mask) -> String {
    let mut parent: Vec<usize> = (0..g.vertices).collect();
    fn find(p: &mut Vec<usize>, v: usize) -> usize {
        if p[v] != v {
            let r = find(p, p[v]);
            p[v] = r;
        }
        p[v]
    }
    for e in members(edges) {
        let (a, b) = (find(&mut parent, g.edges[e][0]), find(&mut parent, g.edges[e][1]));
        parent[a.max(b)] = a.min(b);
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..g.vertices {
        let r = find(&mut parent, v);
        blocks.entry(r).or_default().push(v);
    }
    blocks
        .values()
        .map(|b| format!("{{{}}}", b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect()
}

/// Dimensions of `H*(M)^{⊗n} ⊗ Λ[Δ̃_e] / (relations)` graded by lattice
/// label and total degree, computed by linear algebra on each graded piece.
pub fn presentation_dims(ring: &GradedRing, g: &Graph, poset: &GradedPoset) -> Result<BTreeMap<(usize, i32), usize>> {
    let top = ring.top_degree().ok_or(Error::NoPairing)? as i32;
    let n = g.vertices;
    let ne = g.edges.len();
    if ne > 16 {
        return Err(Error::Schema("presentation dimensions are limited to 16 edges".into()));
    }
    let tp = TensorPower::new(ring, n);
    let label_of: Vec<usize> =
        (0..1u64 << ne).map(|s| poset.index_of(&closure_id(g, s))).collect::<Result<_>>()?;
    let cycle_masks: Vec<Mask> = simple_cycles(g)
        .iter()
        .map(|c| {
            let k = c.len();
            mask_of(&(0..k).map(|i| g.edge_index(c[i], c[(i + 1) % k]).unwrap()).collect::<Vec<_>>())
        })
        .collect();
    // pieces keyed by (label, |S|, degree of the H part)
    let mut pieces: BTreeMap<(usize, u32, u32), Vec<(Mask, usize)>> = BTreeMap::new();
    for s in 0..1u64 << ne {
        for h in 0..tp.dim() {
            pieces.entry((label_of[s as usize], s.count_ones(), tp.degree(h))).or_default().push((s, h));
        }
    }
    // p_a^*(γ) as an element of H*(M^n)
    let pull = |a: usize, gamma: usize| -> SparseVec {
        let mut t = vec![ring.unit(); n];
        t[a] = gamma;
        SparseVec::unit(tp.position(&t))
    };
    let mut out: BTreeMap<(usize, i32), usize> = BTreeMap::new();
    for ((x, k, d), basis) in &pieces {
        let pos: BTreeMap<(Mask, usize), usize> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut gens: Vec<SparseVec> = Vec::new();
        let sets: BTreeSet<Mask> = basis.iter().map(|b| b.0).collect();
        for s in &sets {
            for e in members(*s) {
                let (a, b) = (g.edges[e][0], g.edges[e][1]);
                for gamma in (0..ring.dim()).filter(|c| ring.degree(*c) > 0) {
                    let dg = ring.degree(gamma);
                    if dg > *d {
                        continue;
                    }
                    let diff = pull(a, gamma).sub(&pull(b, gamma));
                    for h2 in (0..tp.dim()).filter(|h| tp.degree(*h) == d - dg) {
                        let v = tp.mul(&diff, &SparseVec::unit(h2));
                        gens.push(SparseVec::from_pairs(v.iter().map(|(h, c)| (pos[&(*s, *h)], c.clone()))));
                    }
                }
            }
        }
        // cycle relation ∂Δ̃_C times Δ̃_T
        for c in &cycle_masks {
            let len = c.count_ones();
            if len > k + 1 {
                continue;
            }
            for t in 0..1u64 << ne {
                if t.count_ones() != k + 1 - len {
                    continue;
                }
                let terms: Vec<(Mask, i32)> = koszul_partial(*c)
                    .into_iter()
                    .filter_map(|(m, sg)| wedge_sign(m, t).map(|w| (m | t, sg * w)))
                    .filter(|(m, _)| label_of[*m as usize] == *x)
                    .collect();
                if terms.is_empty() {
                    continue;
                }
                for h in (0..tp.dim()).filter(|h| tp.degree(*h) == *d) {
                    gens.push(SparseVec::from_pairs(
                        terms.iter().map(|(m, sg)| (pos[&(*m, h)], crate::exactla::q(*sg as i64))),
                    ));
                }
            }
        }
        let r = rank(&RatMatrix::from_columns(basis.len(), gens));
        let dim = basis.len() - r;
        if dim > 0 {
            *out.entry((*x, *d as i32 + *k as i32 * (top - 1))).or_insert(0) += dim;
        }
    }
    Ok(out)
}

/// E1 dimensions graded by lattice label and total degree.
pub fn e1_dims_by_label(e1: &E1Algebra) -> BTreeMap<(usize, i32), usize> {
    let mut out = BTreeMap::new();
    for c in e1.cells() {
        *out.entry((c.x, c.p + c.q)).or_insert(0) += 1;
    }
    out
}

/// Action of a vertex permutation of `G` on the E1 model.
pub fn automorphism_action(model: &ChromaticModel, vertex_perm: &[usize]) -> Result<RatMatrix> {
    let g = &model.graph;
    if !g.is_automorphism(vertex_perm) {
        return Err(Error::NotAutomorphism("vertex permutation is not a graph automorphism".into()));
    }
    let l = model.e1.poset();
    let blocks: Vec<Vec<Vec<usize>>> = l.ids().iter().map(|s| partition_blocks(s)).collect();
    let mut elem_perm = Vec::with_capacity(l.len());
    for b in &blocks {
        let mut img: Vec<Vec<usize>> = b
            .iter()
            .map(|blk| {
                let mut v: Vec<usize> = blk.iter().map(|u| vertex_perm[*u]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        img.sort();
        let id: String = img
            .iter()
            .map(|blk| format!("{{{}}}", blk.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        elem_perm.push(l.index_of(&id)?);
    }
    let atoms = l.atoms();
    let atom_perm: Vec<usize> =
        atoms.iter().map(|a| atoms.iter().position(|b| *b == elem_perm[*a]).expect("atoms go to atoms")).collect();
    let ring = &model.ring;
    let mut maps = Vec::with_capacity(l.len());
    for x in 0..l.len() {
        let src = TensorPower::new(ring, blocks[x].len());
        let y = elem_perm[x];
        // factor i of x lands on the block of y containing the image of block i
        let pi: Vec<usize> = blocks[x]
            .iter()
            .map(|blk| blocks[y].iter().position(|c| c.contains(&vertex_perm[blk[0]])).unwrap())
            .collect();
        let cols = (0..src.dim())
            .map(|p| {
                let a = src.factors_of(p);
                let mut odd = 0;
                for i in 0..a.len() {
                    for j in i + 1..a.len() {
                        if pi[i] > pi[j] {
                            odd += ring.degree(a[i]) * ring.degree(a[j]);
                        }
                    }
                }
                let mut t = vec![0; a.len()];
                for (i, b) in a.iter().enumerate() {
                    t[pi[i]] = *b;
                }
                let c = if odd % 2 == 1 { -q_one() } else { q_one() };
                SparseVec::single(src.position(&t), c)
            })
            .collect();
        maps.push(RatMatrix::from_columns(src.dim(), cols));
    }
    model.e1.group_action(&elem_perm, &atom_perm, &maps)
}

pub fn export_presentation_text(model: &ChromaticModel) -> String {
    let p = &model.presentation;
    let mut s = format!(
        "F(M, G) with M = {}, G on {} vertices\ngenerators ({}), degree {}:\n",
        model.ring.name,
        model.graph.vertices,
        p.generators.len(),
        p.generator_degree
    );
    for (a, b) in &p.generators {
        s.push_str(&format!("  Δ̃_{a}{b}\n"));
    }
    s.push_str("differential:\n");
    for d in &p.differentials {
        s.push_str(&format!("  {d}\n"));
    }
    s.push_str("relations:\n");
    for r in &p.relations {
        s.push_str(&format!("  {r}\n"));
    }
    s
}

pub fn export_presentation_json(model: &ChromaticModel) -> Value {
    json!({
        "space": model.ring.name,
        "graph": model.graph,
        "presentation": model.presentation,
    })
}
