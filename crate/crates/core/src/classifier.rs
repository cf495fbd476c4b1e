//! Closed-form classification of the game chromatic number, with a solver
//! fallback where no closed form applies.

use std::fmt;

use crate::forest::{Forest, Vertex};
use crate::game::{SolveError, Solver};
use crate::position::{Color, Position};
use crate::structure::{Cover, ReducedGraph, ReducedTrunk};

/// Why [`is_chi_g_2`] answered as it did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoColorReason {
    /// Longest path has length 1 or 2.
    ShortPaths,
    /// Longest path has length 3, the order is odd and every component of
    /// diameter 3 is a path.
    OddOrderPathsOfLengthThree,
    /// No edges, so fewer than two colors suffice.
    Edgeless,
    /// A path of length at least 4 (given as its vertices).
    LongPath(Vec<Vertex>),
    /// A component of diameter 3 that is not a path.
    BranchedDiameterThree(Vec<Vertex>),
    /// Longest path has length 3 and the order is even.
    EvenOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoColorTest {
    pub holds: bool,
    pub longest_path: i64,
    pub reason: TwoColorReason,
}

fn longest_path_vertices(f: &Forest) -> Vec<Vertex> {
    let mut best: Vec<Vertex> = Vec::new();
    for comp in f.components() {
        let far = |s: Vertex| {
            let d = f.distances_from(s);
            *comp
                .iter()
                .max_by_key(|&&v| (d[v], std::cmp::Reverse(v)))
                .unwrap()
        };
        let a = far(comp[0]);
        let b = far(a);
        let p = f.path_between(a, b).expect("same component");
        if p.len() > best.len() {
            best = p;
        }
    }
    best
}

/// Whether the game chromatic number is exactly 2.
pub fn is_chi_g_2(f: &Forest) -> TwoColorTest {
    let l = f.longest_path_length();
    let (holds, reason) = match l {
        -1 | 0 => (false, TwoColorReason::Edgeless),
        1 | 2 => (true, TwoColorReason::ShortPaths),
        3 => {
            let branched = f
                .components()
                .into_iter()
                .find(|c| f.component_diameter(c[0]) == 3 && c.iter().any(|&v| f.degree(v) > 2));
            match branched {
                Some(c) => (false, TwoColorReason::BranchedDiameterThree(c)),
                None if f.order() % 2 == 0 => (false, TwoColorReason::EvenOrder),
                None => (true, TwoColorReason::OddOrderPathsOfLengthThree),
            }
        }
        _ => (false, TwoColorReason::LongPath(longest_path_vertices(f))),
    };
    TwoColorTest {
        holds,
        longest_path: l,
        reason,
    }
}

/// A reduced piece that breaks the safety condition after coloring a
/// candidate vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub piece: Vec<Vertex>,
    pub colored: usize,
    pub heavy_edges: Vec<(Vertex, Vertex)>,
}

/// A piece is safe when it has one colored vertex and no edge between two
/// vertices of degree above 2, or no colored vertex and a vertex touching
/// every such edge.
pub fn piece_is_safe(piece: &ReducedTrunk, colored: usize) -> bool {
    match colored {
        0 => piece.covering_vertex().exists(),
        1 => piece.heavy_edges().is_empty(),
        _ => false,
    }
}

/// Checks the safety condition on every reduced piece after coloring `b`.
pub fn check_b_vertex(f: &Forest, b: Vertex) -> Result<(), Violation> {
    let p = Position::new(f.clone())
        .with_color(b, Color(0))
        .expect("uncolored forest");
    check_position(&p)
}

/// Checks the safety condition on every reduced piece of `p`.
pub fn check_position(p: &Position) -> Result<(), Violation> {
    for piece in ReducedGraph::of(p).trunks {
        let colored = piece.colored(p).count();
        if !piece_is_safe(&piece, colored) {
            return Err(Violation {
                piece: piece.vertices.clone(),
                colored,
                heavy_edges: piece.heavy_edges(),
            });
        }
    }
    Ok(())
}

/// Vertices of the shortest path joining two vertex-disjoint edges.
fn joining_path(piece: &ReducedTrunk, e: (Vertex, Vertex), g: (Vertex, Vertex)) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = [(e.0, g.0), (e.0, g.1), (e.1, g.0), (e.1, g.1)]
        .into_iter()
        .flat_map(|(x, y)| piece.path(x, y))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// A vertex whose coloring leaves every reduced piece safe, if one exists.
///
/// Pieces of the uncolored forest with two disjoint heavy edges narrow the
/// search: with none, the covering vertex of the first piece that has heavy
/// edges works; with two or more, nothing works; with one, the vertex must
/// lie on every path joining two disjoint heavy edges.
pub fn b_vertex_search(f: &Forest) -> Option<Vertex> {
    if f.is_empty() {
        return None;
    }
    let uncolored = Position::new(f.clone());
    let pieces = ReducedGraph::of(&uncolored).trunks;
    let split: Vec<&ReducedTrunk> = pieces
        .iter()
        .filter(|t| t.covering_vertex() == Cover::None)
        .collect();
    match split.len() {
        0 => {
            let b = pieces
                .iter()
                .find_map(|t| match t.covering_vertex() {
                    Cover::Vertex(v) => Some(v),
                    _ => None,
                })
                .unwrap_or(0);
            check_b_vertex(f, b).ok().map(|_| b)
        }
        1 => {
            let piece = split[0];
            let heavy = piece.heavy_edges();
            let mut candidates: Option<Vec<Vertex>> = None;
            for (i, &e) in heavy.iter().enumerate() {
                for &g in &heavy[i + 1..] {
                    if e.0 == g.0 || e.0 == g.1 || e.1 == g.0 || e.1 == g.1 {
                        continue;
                    }
                    let path = joining_path(piece, e, g);
                    candidates = Some(match candidates {
                        None => path,
                        Some(c) => c
                            .into_iter()
                            .filter(|v| path.binary_search(v).is_ok())
                            .collect(),
                    });
                }
            }
            candidates
                .unwrap_or_default()
                .into_iter()
                .find(|&b| check_b_vertex(f, b).is_ok())
        }
        _ => None,
    }
}

/// Reference search trying every vertex.
pub fn b_vertex_brute_force(f: &Forest) -> Option<Vertex> {
    f.vertices().find(|&b| check_b_vertex(f, b).is_ok())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    /// Alice loses with three colors and no forest needs more than four.
    TheoremCapped,
    SolverFallback,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed-form",
            Method::TheoremCapped => "theorem-capped",
            Method::SolverFallback => "solver",
        })
    }
}

/// The rule that decided a classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    NoVertices,
    NoEdges,
    TwoColors(TwoColorReason),
    /// Coloring this vertex first leaves every reduced piece safe.
    SafeFirstMove(Vertex),
    /// No first move leaves every reduced piece safe, and no vertex has
    /// degree exactly 3.
    NoSafeFirstMove(Violation),
    /// At most 13 vertices and not two-colorable.
    SmallOrder,
    Solver,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::NoVertices => f.write_str("empty forest"),
            Rule::NoEdges => f.write_str("no edges"),
            Rule::TwoColors(r) => match r {
                TwoColorReason::ShortPaths => f.write_str("longest path of length at most 2"),
                _ => f.write_str("odd order, longest path of length 3, paths only"),
            },
            Rule::SafeFirstMove(b) => write!(f, "safe first move at vertex {b}"),
            Rule::NoSafeFirstMove(v) => {
                write!(
                    f,
                    "no safe first move, no degree-3 vertex; piece {:?} stays unsafe",
                    v.piece
                )
            }
            Rule::SmallOrder => f.write_str("at most 13 vertices"),
            Rule::Solver => f.write_str("exact search"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub value: usize,
    pub method: Method,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("vertex {0} has degree 3")]
    DegreeThree(Vertex),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

fn trivial(f: &Forest) -> Option<Classification> {
    let closed = |value, rule| {
        Some(Classification {
            value,
            method: Method::ClosedForm,
            rule,
        })
    };
    if f.is_empty() {
        return closed(0, Rule::NoVertices);
    }
    if f.edges().is_empty() {
        return closed(1, Rule::NoEdges);
    }
    let two = is_chi_g_2(f);
    if two.holds {
        return closed(2, Rule::TwoColors(two.reason));
    }
    None
}

/// Exact value for forests without vertices of degree 3.
pub fn classify_no_deg3(f: &Forest) -> Result<Classification, ClassifyError> {
    if let Some(v) = f.vertices().find(|&v| f.degree(v) == 3) {
        return Err(ClassifyError::DegreeThree(v));
    }
    if let Some(c) = trivial(f) {
        return Ok(c);
    }
    Ok(match b_vertex_search(f) {
        Some(b) => Classification {
            value: 3,
            method: Method::ClosedForm,
            rule: Rule::SafeFirstMove(b),
        },
        None => {
            let violation = check_b_vertex(f, 0).expect_err("no safe first move");
            Classification {
                value: 4,
                method: Method::ClosedForm,
                rule: Rule::NoSafeFirstMove(violation),
            }
        }
    })
}

/// Game chromatic number by the first applicable closed form, falling back
/// to exact search.
pub fn classify(f: &Forest) -> Result<Classification, SolveError> {
    classify_with(f, &mut Solver::default())
}

/// [`classify`] using `solver` for the exact-search fallback.
pub fn classify_with(f: &Forest, solver: &mut Solver) -> Result<Classification, SolveError> {
    if let Some(c) = trivial(f) {
        return Ok(c);
    }
    if f.vertices().all(|v| f.degree(v) != 3) {
        return classify_no_deg3(f).map_err(|e| match e {
            ClassifyError::Solve(s) => s,
            ClassifyError::DegreeThree(_) => unreachable!(),
        });
    }
    if let Some(b) = b_vertex_search(f) {
        return Ok(Classification {
            value: 3,
            method: Method::ClosedForm,
            rule: Rule::SafeFirstMove(b),
        });
    }
    if f.order() <= 13 {
        return Ok(Classification {
            value: 3,
            method: Method::ClosedForm,
            rule: Rule::SmallOrder,
        });
    }
    let g = solver.game_chromatic_number(f)?;
    let method = if g.theorem_capped {
        Method::TheoremCapped
    } else {
        Method::SolverFallback
    };
    Ok(Classification {
        value: g.value,
        method,
        rule: Rule::Solver,
    })
}
