use std::collections::BTreeSet;

use super::Hypergraph;
use crate::error::{Error, Result};

/// Peeling level of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    /// Removed in the given round.
    Peeled(u32),
    /// Survives in the core.
    Core,
    /// Marked vertex; never peeled.
    Marked,
}

impl Level {
    pub fn finite(self) -> Option<u32> {
        match self {
            Level::Peeled(l) => Some(l),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelResult {
    pub levels: Vec<Level>,
    /// Round in which each edge was removed; `None` for core edges.
    pub edge_rounds: Vec<Option<u32>>,
    /// Unmarked vertices left at the fixpoint.
    pub core_vertices: Vec<usize>,
    pub core_edges: Vec<usize>,
    pub peelable: bool,
    /// Number of non-empty rounds executed.
    pub rounds: u32,
}

impl PeelResult {
    pub fn core_fraction(&self) -> f64 {
        self.core_vertices.len() as f64 / self.levels.len().max(1) as f64
    }
}

/// Synchronous peeling. Round `i` removes every unmarked vertex that is a
/// leaf or isolated in the residual hypergraph, together with all residual
/// edges touching it.
pub fn peel(h: &Hypergraph, marked: &[usize]) -> Result<PeelResult> {
    let n = h.n();
    let inc = h.incidence();
    let mut is_marked = vec![false; n];
    for &v in marked {
        if v >= n {
            return Err(Error::VertexOutOfRange { id: v, n });
        }
        is_marked[v] = true;
    }

    let mut degree: Vec<usize> = (0..n).map(|v| inc.degree(v)).collect();
    let mut levels: Vec<Level> = is_marked
        .iter()
        .map(|&mk| if mk { Level::Marked } else { Level::Core })
        .collect();
    let mut edge_rounds = vec![None; h.m()];
    let mut queued = vec![false; n];

    let mut frontier: Vec<usize> = (0..n)
        .filter(|&v| !is_marked[v] && degree[v] <= 1)
        .collect();
    for &v in &frontier {
        queued[v] = true;
    }

    let mut round = 0u32;
    while !frontier.is_empty() {
        for &v in &frontier {
            levels[v] = Level::Peeled(round);
        }
        let mut next = Vec::new();
        for &v in &frontier {
            for &e in inc.of(v) {
                if edge_rounds[e].is_some() {
                    continue;
                }
                edge_rounds[e] = Some(round);
                for &u in h.edge(e) {
                    degree[u] -= 1;
                    if !queued[u] && !is_marked[u] && degree[u] <= 1 {
                        queued[u] = true;
                        next.push(u);
                    }
                }
            }
        }
        next.sort_unstable();
        frontier = next;
        round += 1;
    }

    let core_vertices: Vec<usize> = (0..n).filter(|&v| levels[v] == Level::Core).collect();
    let core_edges: Vec<usize> = (0..h.m()).filter(|&e| edge_rounds[e].is_none()).collect();
    Ok(PeelResult {
        peelable: core_vertices.is_empty(),
        levels,
        edge_rounds,
        core_vertices,
        core_edges,
        rounds: round,
    })
}

/// Descendant closure of a vertex of finite level.
///
/// `members` is `D_v`: `v` plus every vertex reachable from it through
/// shared edges along strictly decreasing levels. `graph` holds the edges
/// touching `D_v` over a compact vertex set; its vertices outside `D_v` are
/// listed in `marked`. Local id `i` corresponds to `original[i]` in the
/// input hypergraph and local edge `j` to `edges[j]`.
#[derive(Debug, Clone)]
pub struct DescendantClosure {
    pub graph: Hypergraph,
    pub marked: Vec<usize>,
    pub members: Vec<usize>,
    pub original: Vec<usize>,
    pub edges: Vec<usize>,
}

pub fn descendant_closure(h: &Hypergraph, v: usize) -> Result<DescendantClosure> {
    if v >= h.n() {
        return Err(Error::VertexOutOfRange { id: v, n: h.n() });
    }
    let peeled = peel(h, &[])?;
    let level = |u: usize| peeled.levels[u].finite();
    if level(v).is_none() {
        return Err(Error::VertexInCore(v));
    }
    let inc = h.incidence();

    let mut members = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        let lx = level(x).expect("members have finite level");
        for &e in inc.of(x) {
            for &u in h.edge(e) {
                if matches!(level(u), Some(lu) if lu < lx) && members.insert(u) {
                    stack.push(u);
                }
            }
        }
    }

    let edges: BTreeSet<usize> = members
        .iter()
        .flat_map(|&u| inc.of(u).iter().copied())
        .collect();
    let mut local_vertices: BTreeSet<usize> = members.clone();
    for &e in &edges {
        local_vertices.extend(h.edge(e));
    }
    let original: Vec<usize> = local_vertices.into_iter().collect();
    let mut local = vec![usize::MAX; h.n()];
    for (i, &u) in original.iter().enumerate() {
        local[u] = i;
    }
    let graph = Hypergraph::from_edges(
        original.len(),
        h.k(),
        edges
            .iter()
            .map(|&e| h.edge(e).iter().map(|&u| local[u]).collect::<Vec<_>>()),
    )?;
    let marked = original
        .iter()
        .enumerate()
        .filter(|(_, u)| !members.contains(u))
        .map(|(i, _)| i)
        .collect();

    Ok(DescendantClosure {
        graph,
        marked,
        members: members.into_iter().collect(),
        original,
        edges: edges.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> Hypergraph {
        Hypergraph::from_edges(3, 2, [[0usize, 1], [1, 2]]).unwrap()
    }

    fn triangle() -> Hypergraph {
        Hypergraph::from_edges(3, 2, [[0usize, 1], [1, 2], [0, 2]]).unwrap()
    }

    #[test]
    fn path_peels_in_two_rounds() {
        let p = peel(&path(), &[]).unwrap();
        assert_eq!(
            p.levels,
            vec![Level::Peeled(0), Level::Peeled(1), Level::Peeled(0)]
        );
        assert!(p.peelable);
        assert_eq!(p.rounds, 2);
        assert_eq!(p.edge_rounds, vec![Some(0), Some(0)]);
    }

    #[test]
    fn triangle_is_its_own_core() {
        let p = peel(&triangle(), &[]).unwrap();
        assert!(!p.peelable);
        assert_eq!(p.core_vertices, vec![0, 1, 2]);
        assert_eq!(p.core_edges, vec![0, 1, 2]);
        assert_eq!(p.rounds, 0);
    }

    #[test]
    fn marked_endpoint_stays() {
        let p = peel(&path(), &[0]).unwrap();
        assert_eq!(
            p.levels,
            vec![Level::Marked, Level::Peeled(1), Level::Peeled(0)]
        );
        assert!(p.peelable);
        assert!(p.core_edges.is_empty());
        assert_eq!(p.edge_rounds, vec![Some(1), Some(0)]);
    }

    #[test]
    fn isolated_vertex_is_level_zero() {
        let h = Hypergraph::from_edges(4, 2, [[0usize, 1], [1, 2], [0, 2]]).unwrap();
        let p = peel(&h, &[]).unwrap();
        assert_eq!(p.levels[3], Level::Peeled(0));
        assert_eq!(p.core_vertices, vec![0, 1, 2]);
        assert!(peel(&h, &[4]).is_err());
    }

    #[test]
    fn leaf_closure_is_single_edge() {
        // triangle with pendant 3 attached to 0
        let h = Hypergraph::from_edges(4, 2, [[0usize, 1], [1, 2], [0, 2], [0, 3]]).unwrap();
        let c = descendant_closure(&h, 3).unwrap();
        assert_eq!(c.members, vec![3]);
        assert_eq!(c.edges, vec![3]);
        assert_eq!(c.graph.m(), 1);
        assert_eq!(c.original, vec![0, 3]);
        assert_eq!(c.marked, vec![0]);
        assert!(peel(&c.graph, &c.marked).unwrap().peelable);
    }

    #[test]
    fn core_vertex_has_no_closure() {
        assert!(matches!(
            descendant_closure(&triangle(), 1),
            Err(Error::VertexInCore(1))
        ));
    }

    #[test]
    fn path_center_closure() {
        let c = descendant_closure(&path(), 1).unwrap();
        assert_eq!(c.members, vec![0, 1, 2]);
        assert!(c.marked.is_empty());
        assert!(peel(&c.graph, &c.marked).unwrap().peelable);
    }
}
