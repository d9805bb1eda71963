//! k-uniform hash hypergraphs: construction, peeling and component analysis.
//!
//! Vertex ids are dense in `[0, n)`; edge indices follow construction order.
//! Vertices inside one edge are stored sorted, so two edges are equal as sets
//! iff their slices are equal.

mod components;
mod generate;
mod io;
mod peel;

pub use components::{components, Component, ComponentReport};
pub use generate::{
    binomial, gen_2regular_3uniform, gen_dual_complete, gen_dual_complete_r, gen_erdos_renyi,
    REGULAR_RETRY_BUDGET,
};
pub use io::{parse_edge_list, write_edge_list};
pub use peel::{descendant_closure, peel, DescendantClosure, Level, PeelResult};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    offsets: Vec<usize>,
    vertices: Vec<usize>,
}

impl Hypergraph {
    /// Builds a hypergraph on `n` vertices with edges of order at most `k`.
    ///
    /// Each edge must be non-empty, hold distinct ids below `n`, and have at
    /// most `k` members. Repeated edges are accepted here; the random
    /// generators never produce them.
    pub fn from_edges<I, E>(n: usize, k: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if k == 0 {
            return Err(Error::invalid("edge order k must be at least 1"));
        }
        let mut offsets = vec![0];
        let mut vertices = Vec::new();
        for (idx, edge) in edges.into_iter().enumerate() {
            let edge = edge.as_ref();
            if edge.is_empty() || edge.len() > k {
                return Err(Error::invalid(format!(
                    "edge {idx} has {} vertices, expected 1..={k}",
                    edge.len()
                )));
            }
            let start = vertices.len();
            for &v in edge {
                if v >= n {
                    return Err(Error::VertexOutOfRange { id: v, n });
                }
                vertices.push(v);
            }
            let slot = &mut vertices[start..];
            slot.sort_unstable();
            if slot.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {idx} repeats a vertex")));
            }
            offsets.push(vertices.len());
        }
        Ok(Hypergraph {
            n,
            k,
            offsets,
            vertices,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nominal edge order.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Edge density `m / n`.
    pub fn lambda(&self) -> f64 {
        self.m() as f64 / self.n as f64
    }

    #[inline]
    pub fn edge(&self, e: usize) -> &[usize] {
        &self.vertices[self.offsets[e]..self.offsets[e + 1]]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        (0..self.m()).map(move |e| self.edge(e))
    }

    /// True when every edge has exactly `k` vertices.
    pub fn is_uniform(&self) -> bool {
        self.edges().all(|e| e.len() == self.k)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &v in &self.vertices {
            deg[v] += 1;
        }
        deg
    }

    pub fn incidence(&self) -> Incidence {
        Incidence::new(self)
    }

    /// Edges as sorted vertex lists, sorted; equal for isomorphic-by-identity
    /// edge multisets regardless of edge order.
    pub fn canonical_edge_set(&self) -> Vec<Vec<usize>> {
        let mut edges: Vec<Vec<usize>> = self.edges().map(<[usize]>::to_vec).collect();
        edges.sort();
        edges
    }

    pub fn has_repeated_edges(&self) -> bool {
        self.canonical_edge_set().windows(2).any(|w| w[0] == w[1])
    }

    /// Sub-hypergraph made of the listed edges, on the same vertex set.
    pub fn restrict_edges(&self, edges: &[usize]) -> Result<Hypergraph> {
        let mut picked = Vec::with_capacity(edges.len());
        for &e in edges {
            if e >= self.m() {
                return Err(Error::EdgeOutOfRange {
                    index: e,
                    m: self.m(),
                });
            }
            picked.push(self.edge(e));
        }
        Hypergraph::from_edges(self.n, self.k, picked)
    }
}

/// Vertex → incident edge indices, in CSR layout.
#[derive(Debug, Clone)]
pub struct Incidence {
    offsets: Vec<usize>,
    edges: Vec<usize>,
}

impl Incidence {
    fn new(h: &Hypergraph) -> Self {
        let deg = h.degrees();
        let mut offsets = Vec::with_capacity(h.n() + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut edges = vec![0; h.vertices.len()];
        for (e, edge) in h.edges().enumerate() {
            for &v in edge {
                edges[fill[v]] = e;
                fill[v] += 1;
            }
        }
        Incidence { offsets, edges }
    }

    #[inline]
    pub fn of(&self, v: usize) -> &[usize] {
        &self.edges[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}
