//! Structural views of a partially colored forest: trunks, the reduced
//! graph, edge classes by degree, splitters and dangerous vertices.

use crate::forest::{Forest, Vertex};
use crate::position::{Color, Position};

/// A maximal connected subgraph whose colored vertices are all leaves of it.
///
/// A colored vertex of degree `d` appears in `d` trunks; the trunks are kept
/// separate rather than merged through shared colored vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trunk {
    /// Sorted vertex ids.
    pub vertices: Vec<Vertex>,
    /// Edges `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(Vertex, Vertex)>,
}

impl Trunk {
    pub fn colored<'a>(&'a self, p: &'a Position) -> impl Iterator<Item = Vertex> + 'a {
        self.vertices.iter().copied().filter(|&v| p.is_colored(v))
    }

    pub fn uncolored<'a>(&'a self, p: &'a Position) -> impl Iterator<Item = Vertex> + 'a {
        self.vertices.iter().copied().filter(|&v| !p.is_colored(v))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == v || *b == v)
            .count()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// The trunk as a standalone forest on `0..k` plus the id map.
    pub fn to_forest(&self) -> (Forest, Vec<Vertex>) {
        let idx = |v: Vertex| self.vertices.binary_search(&v).unwrap();
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (idx(u), idx(v))).collect();
        (
            Forest::new(self.vertices.len(), &edges).expect("trunk is a tree"),
            self.vertices.clone(),
        )
    }
}

/// Trunk decomposition, ordered by smallest vertex then by vertex list.
pub fn trunks(p: &Position) -> Vec<Trunk> {
    let f = p.forest();
    let mut seen = vec![false; f.order()];
    let mut out = Vec::new();
    for s in f.vertices() {
        if seen[s] || p.is_colored(s) {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            vertices.push(v);
            for &w in f.neighbors(v) {
                if p.is_colored(w) {
                    vertices.push(w);
                    edges.push((v.min(w), v.max(w)));
                } else {
                    if v < w {
                        edges.push((v, w));
                    }
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
        }
        vertices.sort_unstable();
        edges.sort_unstable();
        out.push(Trunk { vertices, edges });
    }
    for &(u, v) in f.edges() {
        if p.is_colored(u) && p.is_colored(v) {
            out.push(Trunk {
                vertices: vec![u, v],
                edges: vec![(u, v)],
            });
        }
    }
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    out
}

/// One connected piece of the reduced graph.
///
/// Degrees are local: a colored vertex has degree at most 1 here even when it
/// has higher degree in the forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedTrunk {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

/// Result of asking for a vertex incident to every `E>>2` edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cover {
    /// No `E>>2` edges at all.
    Trivial,
    Vertex(Vertex),
    /// Two `E>>2` edges share no endpoint.
    None,
}

impl Cover {
    pub fn exists(self) -> bool {
        !matches!(self, Cover::None)
    }
}

impl ReducedTrunk {
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == v || *b == v)
            .count()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn colored<'a>(&'a self, p: &'a Position) -> impl Iterator<Item = Vertex> + 'a {
        self.vertices.iter().copied().filter(|&v| p.is_colored(v))
    }

    /// Edges with both endpoints of degree greater than 2.
    pub fn heavy_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(a, b)| self.degree(a) > 2 && self.degree(b) > 2)
            .collect()
    }

    pub fn covering_vertex(&self) -> Cover {
        covering_vertex(&self.heavy_edges())
    }

    /// Colored vertices, counting same-colored leaves hanging off the same
    /// neighbor once. Such leaves constrain the game exactly like one leaf.
    pub fn effective_colored(&self, p: &Position) -> Vec<Vertex> {
        let mut seen: Vec<(Option<Vertex>, Option<Color>)> = Vec::new();
        let mut out = Vec::new();
        for v in self.colored(p) {
            let anchor = self.edges.iter().find_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            });
            let key = (anchor, p.color(v));
            if anchor.is_none() || !seen.contains(&key) {
                seen.push(key);
                out.push(v);
            }
        }
        out
    }

    /// The unique path inside this trunk.
    pub fn path(&self, x: Vertex, y: Vertex) -> Vec<Vertex> {
        let (forest, map) = self.to_forest();
        let idx = |v| self.vertices.binary_search(&v).unwrap();
        forest
            .path_between(idx(x), idx(y))
            .expect("trunk is connected")
            .into_iter()
            .map(|i| map[i])
            .collect()
    }

    pub fn to_forest(&self) -> (Forest, Vec<Vertex>) {
        let idx = |v: Vertex| self.vertices.binary_search(&v).unwrap();
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (idx(u), idx(v))).collect();
        (
            Forest::new(self.vertices.len(), &edges).expect("reduced trunk is a tree"),
            self.vertices.clone(),
        )
    }
}

/// A vertex covering all `edges`, lowest id on ties.
pub fn covering_vertex(edges: &[(Vertex, Vertex)]) -> Cover {
    let Some(&(a, b)) = edges.first() else {
        return Cover::Trivial;
    };
    let mut candidates = [a.min(b), a.max(b)];
    candidates.sort_unstable();
    candidates
        .into_iter()
        .find(|&c| edges.iter().all(|&(x, y)| x == c || y == c))
        .map_or(Cover::None, Cover::Vertex)
}

/// The reduced graph: every trunk with the edges dropped whose endpoints
/// both have trunk-degree at most 2, split into connected pieces.
///
/// Pieces consisting of a lone colored vertex are omitted; isolated
/// uncolored vertices are kept as one-vertex pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGraph {
    pub trunks: Vec<ReducedTrunk>,
}

impl ReducedGraph {
    pub fn of(p: &Position) -> Self {
        let mut pieces = Vec::new();
        for trunk in trunks(p) {
            let deg = |v| trunk.degree(v);
            let kept: Vec<_> = trunk
                .edges
                .iter()
                .copied()
                .filter(|&(a, b)| deg(a) > 2 || deg(b) > 2)
                .collect();
            // Connected pieces of (trunk.vertices, kept).
            let mut label: Vec<usize> = (0..trunk.vertices.len()).collect();
            let idx = |v: Vertex| trunk.vertices.binary_search(&v).unwrap();
            fn find(l: &mut [usize], mut x: usize) -> usize {
                while l[x] != x {
                    l[x] = l[l[x]];
                    x = l[x];
                }
                x
            }
            for &(a, b) in &kept {
                let (ra, rb) = (find(&mut label, idx(a)), find(&mut label, idx(b)));
                label[ra.max(rb)] = ra.min(rb);
            }
            let mut groups: Vec<(usize, ReducedTrunk)> = Vec::new();
            for (i, &v) in trunk.vertices.iter().enumerate() {
                let r = find(&mut label, i);
                match groups.iter_mut().find(|(g, _)| *g == r) {
                    Some((_, t)) => t.vertices.push(v),
                    None => groups.push((
                        r,
                        ReducedTrunk {
                            vertices: vec![v],
                            edges: Vec::new(),
                        },
                    )),
                }
            }
            for &(a, b) in &kept {
                let r = find(&mut label, idx(a));
                groups
                    .iter_mut()
                    .find(|(g, _)| *g == r)
                    .unwrap()
                    .1
                    .edges
                    .push((a, b));
            }
            for (_, t) in groups {
                if t.edges.is_empty() && p.is_colored(t.vertices[0]) {
                    continue;
                }
                pieces.push(t);
            }
        }
        pieces.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        ReducedGraph { trunks: pieces }
    }

    /// Union of all reduced edges: a spanning subforest of the source with
    /// the same vertex ids.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut e: Vec<_> = self
            .trunks
            .iter()
            .flat_map(|t| t.edges.iter().copied())
            .collect();
        e.sort_unstable();
        e
    }

    pub fn as_forest(&self, n: usize) -> Forest {
        Forest::new(n, &self.edges()).expect("subforest")
    }

    /// Materializes the reduced graph as a position in which every colored
    /// vertex gets one copy per piece it belongs to. Returns the position and
    /// the map new id -> source id.
    pub fn materialize(&self, source: &Position) -> (Position, Vec<Vertex>) {
        let mut origin = Vec::new();
        let mut edges = Vec::new();
        for t in &self.trunks {
            let base = origin.len();
            origin.extend(t.vertices.iter().copied());
            let idx = |v: Vertex| base + t.vertices.binary_search(&v).unwrap();
            edges.extend(t.edges.iter().map(|&(a, b)| (idx(a), idx(b))));
        }
        let forest = Forest::new(origin.len(), &edges).expect("disjoint trees");
        let mut p = Position::new(forest);
        for (new, &old) in origin.iter().enumerate() {
            if let Some(c) = source.color(old) {
                p.set_color(new, c)
                    .expect("reduced pieces keep a proper coloring");
            }
            for c in source.external(old).iter() {
                p.add_external(new, c).expect("external colors carry over");
            }
        }
        (p, origin)
    }
}

pub fn reduced_graph(p: &Position) -> ReducedGraph {
    ReducedGraph::of(p)
}

/// Edges with at least one endpoint of degree greater than 2.
pub fn light_or_heavy_edges(f: &Forest) -> Vec<(Vertex, Vertex)> {
    f.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| f.degree(a) > 2 || f.degree(b) > 2)
        .collect()
}

/// Edges with both endpoints of degree greater than 2.
pub fn heavy_edges(f: &Forest) -> Vec<(Vertex, Vertex)> {
    f.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| f.degree(a) > 2 && f.degree(b) > 2)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Splitter {
    pub vertex: Vertex,
    /// Order of the largest component left after deleting `vertex`.
    pub largest_component: usize,
}

impl Splitter {
    /// Whether the small-tree bound (all pieces at most 6) holds.
    pub fn within_six(&self) -> bool {
        self.largest_component <= 6
    }
}

/// The vertex of `component` whose deletion leaves the smallest largest
/// piece, lowest id on ties. `component` must be one tree of `f`.
pub fn find_splitter(f: &Forest, component: &[Vertex]) -> Splitter {
    assert!(!component.is_empty(), "splitter of an empty component");
    let mut best: Option<Splitter> = None;
    let mut sorted = component.to_vec();
    sorted.sort_unstable();
    for &v in &sorted {
        let largest = f
            .neighbors(v)
            .iter()
            .map(|&w| subtree_size(f, w, v))
            .max()
            .unwrap_or(0);
        if best.is_none_or(|b| largest < b.largest_component) {
            best = Some(Splitter {
                vertex: v,
                largest_component: largest,
            });
        }
    }
    best.unwrap()
}

fn subtree_size(f: &Forest, root: Vertex, parent: Vertex) -> usize {
    let mut stack = vec![(root, parent)];
    let mut count = 0;
    while let Some((v, p)) = stack.pop() {
        count += 1;
        stack.extend(f.neighbors(v).iter().filter(|&&w| w != p).map(|&w| (w, v)));
    }
    count
}

/// Uncolored vertices with at least as many uncolored neighbors as legal
/// colors.
pub fn dangerous_vertices(p: &Position, palette: usize) -> Vec<Vertex> {
    p.uncolored_vertices()
        .filter(|&v| p.uncolored_degree(v) >= p.legal_colors(v, palette).len())
        .collect()
}
