//! Small simple graphs on vertices `0..n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Graph {
    /// Normalizes edge order and orientation; rejects loops and out-of-range ends.
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut es = Vec::new();
        for &(a, b) in edges {
            if a == b || a >= vertices || b >= vertices {
                return Err(Error::Schema(format!("bad edge {a}-{b} on {vertices} vertices")));
            }
            es.push([a.min(b), a.max(b)]);
        }
        es.sort_unstable();
        es.dedup();
        Ok(Graph { vertices, edges: es })
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (1..n).map(|b| (b - 1, b)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|b| (b - 1, b)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::new(n, &edges).unwrap()
    }

    pub fn star(n: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (1..n).map(|b| (0, b)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn edgeless(n: usize) -> Graph {
        Graph { vertices: n, edges: Vec::new() }
    }

    /// Names: `k<n>`, `path<n>`, `c<n>`, `star<n>`, `empty<n>`.
    pub fn named(spec: &str) -> Result<Graph> {
        let s = spec.trim().to_ascii_lowercase();
        let parse = |prefix: &str| -> Option<usize> { s.strip_prefix(prefix).and_then(|r| r.parse().ok()) };
        let g = if let Some(n) = parse("path") {
            Graph::path(n)
        } else if let Some(n) = parse("star") {
            Graph::star(n)
        } else if let Some(n) = parse("empty") {
            Graph::edgeless(n)
        } else if let Some(n) = parse("k") {
            Graph::complete(n)
        } else if let Some(n) = parse("c") {
            if n < 3 {
                return Err(Error::Schema(format!("cycle needs at least 3 vertices: {spec}")));
            }
            Graph::cycle(n)
        } else {
            return Err(Error::Schema(format!("unknown graph name {spec:?}")));
        };
        if g.vertices == 0 {
            return Err(Error::Schema(format!("graph {spec:?} has no vertices")));
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let raw: Graph = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::new(raw.vertices, &edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&[a.min(b), a.max(b)]).is_ok()
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&[a.min(b), a.max(b)]).ok()
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| if e[0] == v { Some(e[1]) } else if e[1] == v { Some(e[0]) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    /// Whether the induced subgraph on `block` is connected.
    pub fn is_connected_on(&self, block: &[usize]) -> bool {
        if block.len() <= 1 {
            return true;
        }
        let mut seen = vec![block[0]];
        let mut stack = vec![block[0]];
        while let Some(v) = stack.pop() {
            for &w in block {
                if !seen.contains(&w) && self.has_edge(v, w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        seen.len() == block.len()
    }

    /// Image of the graph under a vertex permutation.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (perm[e[0]], perm[e[1]])).collect();
        Graph::new(self.vertices, &edges).unwrap()
    }

    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        let mut seen = perm.to_vec();
        seen.sort_unstable();
        seen == (0..self.vertices).collect::<Vec<_>>() && self.permuted(perm) == *self
    }

    /// All vertex permutations preserving the edge set, in lexicographic order.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..self.vertices).collect();
        loop {
            if self.is_automorphism(&perm) {
                out.push(perm.clone());
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    }
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
