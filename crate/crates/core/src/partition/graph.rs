use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A simple, bipartite, `b`-regular graph on vertices `0..k` whose left side
/// is `0..k/2`. Every edge is stored as `(left, right)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_size: usize,
    degree: usize,
    edges: Vec<(usize, usize)>,
}

/// Circulant construction: left vertex `i` is joined to right vertices
/// `k/2 + ((i + l) mod k/2)` for `l in 0..b`. Edges are ordered by `(i, l)`.
pub fn build_regular_bipartite_graph(k: usize, b: usize) -> Result<BipartiteGraph> {
    if !k.is_multiple_of(2) {
        return Err(Error::precondition(format!("k = {k} must be even")));
    }
    let half = k / 2;
    if b < 1 || b > half {
        return Err(Error::precondition(format!(
            "degree b = {b} must lie in [1, k/2] = [1, {half}]"
        )));
    }
    let edges = (0..half)
        .flat_map(|i| (0..b).map(move |l| (i, half + (i + l) % half)))
        .collect();
    Ok(BipartiteGraph {
        left_size: half,
        degree: b,
        edges,
    })
}

impl BipartiteGraph {
    /// Wraps an explicit edge list, checking bipartiteness across
    /// `0..left_size | left_size..2*left_size`, simplicity and regularity.
    pub fn from_edges(left_size: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let order = 2 * left_size;
        let mut seen = BTreeSet::new();
        let mut deg = vec![0usize; order];
        for &(u, v) in &edges {
            let (lo, hi) = (u.min(v), u.max(v));
            if hi >= order {
                return Err(Error::precondition(format!(
                    "edge ({u}, {v}) leaves vertex range 0..{order}"
                )));
            }
            if lo >= left_size || hi < left_size {
                return Err(Error::precondition(format!(
                    "edge ({u}, {v}) does not cross the bipartition"
                )));
            }
            if !seen.insert((lo, hi)) {
                return Err(Error::precondition(format!("edge ({lo}, {hi}) is repeated")));
            }
            deg[lo] += 1;
            deg[hi] += 1;
        }
        let degree = deg.first().copied().unwrap_or(0);
        if deg.iter().any(|&d| d != degree) {
            return Err(Error::precondition("graph is not regular"));
        }
        let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Ok(BipartiteGraph {
            left_size,
            degree,
            edges,
        })
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.left_size
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        2 * self.left_size
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge indices incident to each vertex, in edge order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::with_capacity(self.degree); self.order()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(e);
            inc[v].push(e);
        }
        inc
    }

    /// The dual hypergraph: one vertex per edge, one hyperedge per graph
    /// vertex holding the incident edge indices.
    pub fn dual(&self) -> Hypergraph {
        Hypergraph {
            vertex_count: self.size(),
            hyperedges: self.incidence(),
        }
    }
}

/// A hypergraph whose edge family may contain repeats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    hyperedges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(vertex_count: usize, hyperedges: Vec<Vec<usize>>) -> Result<Self> {
        for e in &hyperedges {
            if let Some(&v) = e.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::precondition(format!(
                    "hyperedge vertex {v} outside 0..{vertex_count}"
                )));
            }
        }
        let hyperedges = hyperedges
            .into_iter()
            .map(|e| {
                let set: BTreeSet<usize> = e.into_iter().collect();
                set.into_iter().collect()
            })
            .collect();
        Ok(Hypergraph {
            vertex_count,
            hyperedges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    /// Number of hyperedges containing each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.hyperedges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.degrees().iter().all(|&x| x == d)
    }

    pub fn is_uniform(&self, b: usize) -> bool {
        self.hyperedges.iter().all(|e| e.len() == b)
    }

    /// Any two hyperedges at distinct positions share at most one vertex.
    pub fn is_linear(&self) -> bool {
        let sets: Vec<BTreeSet<usize>> = self
            .hyperedges
            .iter()
            .map(|e| e.iter().copied().collect())
            .collect();
        for (p, a) in sets.iter().enumerate() {
            for b in &sets[p + 1..] {
                if a.intersection(b).nth(1).is_some() {
                    return false;
                }
            }
        }
        true
    }

    pub fn has_repeated_edges(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.hyperedges.iter().any(|e| !seen.insert(e.clone()))
    }

    /// Vertex × hyperedge incidence matrix.
    pub fn incidence_matrix(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.hyperedges.len()]; self.vertex_count];
        for (e, members) in self.hyperedges.iter().enumerate() {
            for &v in members {
                m[v][e] = true;
            }
        }
        m
    }

    /// Transposes the incidence structure.
    pub fn dual(&self) -> Hypergraph {
        let mut hyperedges = vec![Vec::new(); self.vertex_count];
        for (e, members) in self.hyperedges.iter().enumerate() {
            for &v in members {
                hyperedges[v].push(e);
            }
        }
        Hypergraph {
            vertex_count: self.hyperedges.len(),
            hyperedges,
        }
    }
}
