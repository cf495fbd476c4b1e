//! Immutable forests with dense vertex ids.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Vertex identifier. Ids are dense in `0..n`.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("vertex {vertex} out of range for a forest on {n} vertices")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {0}-{1} closes a cycle")]
    Cycle(Vertex, Vertex),
    #[error("vertices {0} and {1} lie in different components")]
    Disconnected(Vertex, Vertex),
}

/// An undirected acyclic simple graph on vertices `0..n`.
///
/// Adjacency lists are kept sorted so every traversal visits vertices in
/// ascending id order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Forest {
    adj: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

impl Forest {
    /// Validates an edge list and builds the forest.
    pub fn new(n: usize, edge_list: &[(Vertex, Vertex)]) -> Result<Self, ForestError> {
        let mut adj = vec![Vec::new(); n];
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut sets = DisjointSets((0..n).collect());
        for &(u, v) in edge_list {
            for w in [u, v] {
                if w >= n {
                    return Err(ForestError::OutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(ForestError::SelfLoop(u));
            }
            let (a, b) = (u.min(v), u.max(v));
            if adj[a].contains(&b) {
                return Err(ForestError::DuplicateEdge(a, b));
            }
            let (ra, rb) = (sets.find(a), sets.find(b));
            if ra == rb {
                return Err(ForestError::Cycle(a, b));
            }
            sets.0[ra] = rb;
            adj[a].push(b);
            adj[b].push(a);
            edges.push((a, b));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        edges.sort_unstable();
        Ok(Forest { adj, edges })
    }

    pub fn empty(n: usize) -> Self {
        Forest {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.order()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Hop distances from `source`; `None` for other components.
    pub fn distances_from(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.order()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, x: Vertex, y: Vertex) -> Result<usize, ForestError> {
        self.distances_from(x)[y].ok_or(ForestError::Disconnected(x, y))
    }

    /// The unique `x,y`-path, starting at `x`.
    pub fn path_between(&self, x: Vertex, y: Vertex) -> Result<Vec<Vertex>, ForestError> {
        let mut parent = vec![usize::MAX; self.order()];
        parent[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            if v == y {
                break;
            }
            for &w in &self.adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if parent[y] == usize::MAX {
            return Err(ForestError::Disconnected(x, y));
        }
        let mut path = vec![y];
        let mut v = y;
        while v != x {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        Ok(path)
    }

    /// Number of edges on a longest path.
    ///
    /// Returns `-1` for the forest with no vertices and `0` for an edgeless
    /// one.
    pub fn longest_path_length(&self) -> i64 {
        if self.is_empty() {
            return -1;
        }
        self.components()
            .iter()
            .map(|comp| self.component_diameter(comp[0]) as i64)
            .max()
            .unwrap_or(0)
    }

    /// Diameter (in edges) of the component containing `v`.
    pub fn component_diameter(&self, v: Vertex) -> usize {
        let far = |s: Vertex| {
            self.distances_from(s)
                .iter()
                .enumerate()
                .filter_map(|(w, d)| d.map(|d| (d, w)))
                // farthest, lowest id on ties
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .unwrap()
        };
        let (_, a) = far(v);
        far(a).0
    }

    /// The subgraph induced on `vertices`, relabeled `0..k` in the given
    /// order. Returns the forest and the map new id -> old id.
    pub fn induced(&self, vertices: &[Vertex]) -> (Forest, Vec<Vertex>) {
        let mut index = vec![usize::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|(u, v)| index[*u] != usize::MAX && index[*v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        let forest = Forest::new(vertices.len(), &edges).expect("induced subgraph of a forest");
        (forest, vertices.to_vec())
    }

    /// Disjoint union; vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Forest) -> Forest {
        let shift = self.order();
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Forest::new(shift + other.order(), &edges).expect("union of forests")
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest(n={}, edges={:?})", self.order(), self.edges)
    }
}
