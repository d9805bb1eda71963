use super::Hypergraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Component {
    /// `|E'| - |V'|`; `-1` for a tree component of a graph.
    pub fn excess(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    /// Components in order of their smallest vertex id.
    pub components: Vec<Component>,
    /// Component index of every vertex.
    pub component_of: Vec<usize>,
    /// Largest component by vertex count, lowest index on ties.
    pub giant: Option<usize>,
}

impl ComponentReport {
    pub fn giant_component(&self) -> Option<&Component> {
        self.giant.map(|g| &self.components[g])
    }

    pub fn giant_excess(&self) -> i64 {
        self.giant_component().map_or(0, Component::excess)
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Connected components via union-find over edge incidences.
pub fn components(h: &Hypergraph) -> ComponentReport {
    let n = h.n();
    let mut uf = UnionFind::new(n);
    for edge in h.edges() {
        for w in edge.windows(2) {
            uf.union(w[0], w[1]);
        }
    }

    let mut id_of_root = vec![usize::MAX; n];
    let mut component_of = vec![0; n];
    let mut components: Vec<Component> = Vec::new();
    for (v, slot) in component_of.iter_mut().enumerate() {
        let root = uf.find(v);
        if id_of_root[root] == usize::MAX {
            id_of_root[root] = components.len();
            components.push(Component {
                vertices: Vec::new(),
                edges: Vec::new(),
            });
        }
        let c = id_of_root[root];
        *slot = c;
        components[c].vertices.push(v);
    }
    for (e, edge) in h.edges().enumerate() {
        components[component_of[edge[0]]].edges.push(e);
    }

    let mut giant: Option<usize> = None;
    for (i, c) in components.iter().enumerate() {
        if giant.is_none_or(|g| c.vertices.len() > components[g].vertices.len()) {
            giant = Some(i);
        }
    }
    ComponentReport {
        components,
        component_of,
        giant,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_triangles() {
        let h = Hypergraph::from_edges(6, 2, [[0usize, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]])
            .unwrap();
        let r = components(&h);
        assert_eq!(r.components.len(), 2);
        assert!(r.components.iter().all(|c| c.excess() == 0));
        assert_eq!(r.giant, Some(0));
    }

    #[test]
    fn tree_has_excess_minus_one() {
        let edges: Vec<[usize; 2]> = (1..8).map(|v| [(v - 1) / 2, v]).collect();
        let h = Hypergraph::from_edges(8, 2, edges).unwrap();
        let r = components(&h);
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].excess(), -1);
        assert_eq!(r.giant_excess(), -1);
    }

    #[test]
    fn giant_tie_breaks_low() {
        let h = Hypergraph::from_edges(5, 2, [[3usize, 4], [0, 1]]).unwrap();
        let r = components(&h);
        assert_eq!(r.components.len(), 3);
        assert_eq!(r.components[0].vertices, vec![0, 1]);
        assert_eq!(r.giant, Some(0));
        assert_eq!(r.component_of, vec![0, 0, 1, 2, 2]);
    }

    #[test]
    fn hyperedges_join_all_members() {
        let h = Hypergraph::from_edges(5, 3, [[0usize, 2, 4]]).unwrap();
        let r = components(&h);
        assert_eq!(r.components.len(), 3);
        assert_eq!(r.components[0].vertices, vec![0, 2, 4]);
        assert_eq!(r.components[0].excess(), -2);
    }
}
