//! Simple undirected graphs, multigraphs, admissible pairs and generators.

mod canonical;
mod generators;
mod io;
mod products;

pub use canonical::{canonical_key, canonical_key_with_cap, CanonicalKey};
pub use generators::{
    configuration_model, erdos_renyi, make_grid, make_hypercube, make_named,
    make_projective_incidence, small_graphs, NamedGraph,
};
pub use io::{from_edge_list, to_edge_list};
pub use products::{cartesian_sum, disjoint_union, tensor_product};

use crate::{Error, Result};

pub type Vertex = usize;

/// Finite simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edges: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops and repeated edges.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("repeated edge at vertex {v}")));
            }
        }
        Ok(Graph {
            adj,
            edges: edges.len(),
        })
    }

    /// Builds a graph from edges, silently dropping loops and duplicates.
    pub fn from_edges_lossy(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut total = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            total += list.len();
        }
        Graph {
            adj,
            edges: total / 2,
        }
    }

    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<Vertex>>) -> Self {
        let total: usize = adj.iter().map(Vec::len).sum();
        debug_assert!(total.is_multiple_of(2));
        Graph {
            adj,
            edges: total / 2,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|l| l.len() == d)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Component label per vertex, labels assigned in order of first vertex.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.component_count() == 1
    }

    /// Vertex sets of the connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let (label, count) = self.component_labels();
        let mut parts = vec![Vec::new(); count];
        for (v, &c) in label.iter().enumerate() {
            parts[c].push(v);
        }
        parts
    }

    pub fn is_forest(&self) -> bool {
        self.edges + self.component_count() == self.vertex_count()
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.is_forest()
    }

    /// Proper 2-coloring if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.vertex_count();
        let mut side = vec![u8::MAX; n];
        let mut stack = Vec::new();
        for s in 0..n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        stack.push(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(side)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Induced subgraph on `keep` (relabelled in the given order).
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adj = keep
            .iter()
            .map(|&v| {
                let mut l: Vec<Vertex> = self.adj[v]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect();
                l.sort_unstable();
                l
            })
            .collect();
        Graph::from_sorted_adjacency(adj)
    }

    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Graph {
        let mut adj = self.adj.clone();
        adj[u].retain(|&w| w != v);
        adj[v].retain(|&w| w != u);
        Graph::from_sorted_adjacency(adj)
    }

    /// Removes the listed vertices and relabels the rest in increasing order.
    pub fn without_vertices(&self, drop: &[Vertex]) -> Graph {
        let keep: Vec<Vertex> = (0..self.vertex_count())
            .filter(|v| !drop.contains(v))
            .collect();
        self.induced(&keep)
    }

    /// Relabels vertex `v` to `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Graph {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for (v, list) in self.adj.iter().enumerate() {
            adj[perm[v]] = list.iter().map(|&w| perm[w]).collect();
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        Graph::from_sorted_adjacency(adj)
    }

    /// Checks the representation invariants: symmetric, loopless, sorted, no repeats.
    pub fn check_invariants(&self) -> bool {
        let mut total = 0;
        for (v, l) in self.adj.iter().enumerate() {
            total += l.len();
            if l.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if l.iter()
                .any(|&w| w == v || w >= self.adj.len() || !self.has_edge(w, v))
            {
                return false;
            }
        }
        total % 2 == 0 && total / 2 == self.edges
    }
}

/// Multigraph with loops; a loop at `v` contributes 2 to `deg(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl MultiGraph {
    pub fn new(n: usize, mut edges: Vec<(Vertex, Vertex)>) -> Self {
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        MultiGraph { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|e| e.0 == e.1).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Underlying simple graph: loops removed, parallel edges collapsed.
    pub fn simplify(&self) -> Graph {
        Graph::from_edges_lossy(self.n, self.edges.iter().copied())
    }
}

/// A graph together with a degree bound `d >= 1` that dominates every degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissiblePair {
    pub graph: Graph,
    pub d: u64,
}

impl AdmissiblePair {
    pub fn new(graph: Graph, d: u64) -> Result<Self> {
        if d < 1 {
            return Err(Error::invalid("degree bound d must be at least 1"));
        }
        let max_degree = graph.max_degree();
        if max_degree as u64 > d {
            return Err(Error::Inadmissible { max_degree, d });
        }
        if graph.vertex_count() == 0 {
            return Err(Error::invalid("admissible pair needs at least one vertex"));
        }
        Ok(AdmissiblePair { graph, d })
    }

    /// Pair with `d` equal to the maximum degree (at least 1).
    pub fn tight(graph: Graph) -> Result<Self> {
        let d = graph.max_degree().max(1) as u64;
        AdmissiblePair::new(graph, d)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
}
