//! Deterministic Alice policies and an exhaustive verifier.
//!
//! Wherever a strategy leaves a free choice, the policies take the lowest
//! vertex id and the lowest legal color.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::classifier::is_chi_g_2;
use crate::forest::Vertex;
use crate::format::write_position;
use crate::game::{GameState, Move, Player, Verdict};
use crate::position::{Color, ColorSet, Position};
use crate::structure::{dangerous_vertices, trunks, Cover, ReducedGraph, ReducedTrunk};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("{reason} (state: {state})")]
    Precondition { state: String, reason: String },
    #[error("policy chose illegal move `{mv}`: {reason} (state: {state})")]
    IllegalMove {
        state: String,
        mv: Move,
        reason: String,
    },
}

fn describe(s: &GameState) -> String {
    format!(
        "{} to move; {}",
        s.to_move,
        write_position(&s.position).trim_end().replace('\n', "; ")
    )
}

fn precondition(s: &GameState, reason: impl Into<String>) -> StrategyError {
    StrategyError::Precondition {
        state: describe(s),
        reason: reason.into(),
    }
}

/// A move chooser for one side.
pub trait Policy {
    fn side(&self) -> Player;
    fn choose(&self, s: &GameState) -> Result<Move, StrategyError>;
}

/// A policy given by a plain function.
#[derive(Clone, Copy)]
pub struct FnPolicy<F> {
    pub side: Player,
    pub choose: F,
}

impl<F: Fn(&GameState) -> Result<Move, StrategyError>> FnPolicy<F> {
    pub fn alice(choose: F) -> Self {
        FnPolicy {
            side: Player::Alice,
            choose,
        }
    }
}

impl<F: Fn(&GameState) -> Result<Move, StrategyError>> Policy for FnPolicy<F> {
    fn side(&self) -> Player {
        self.side
    }

    fn choose(&self, s: &GameState) -> Result<Move, StrategyError> {
        (self.choose)(s)
    }
}

fn lowest_legal(s: &GameState, v: Vertex) -> Result<Move, StrategyError> {
    match s.legal_colors(v).first() {
        Some(c) => Ok(Move::ColorVertex(v, c)),
        None => Err(precondition(s, format!("vertex {v} has no legal color"))),
    }
}

fn with_color(s: &GameState, v: Vertex, c: Color) -> Result<Move, StrategyError> {
    if s.legal_colors(v).contains(c) {
        Ok(Move::ColorVertex(v, c))
    } else {
        Err(precondition(
            s,
            format!("color {c} is not legal at vertex {v}"),
        ))
    }
}

fn require_alice(s: &GameState) -> Result<(), StrategyError> {
    if s.to_move != Player::Alice {
        return Err(precondition(s, "Alice is not to move"));
    }
    Ok(())
}

/// Four-color modified game: keep every trunk at two or fewer colored
/// vertices.
pub fn alice_4mcg(s: &GameState) -> Result<Move, StrategyError> {
    require_alice(s)?;
    let p = &s.position;
    let ts = trunks(p);
    for t in &ts {
        let colored: Vec<Vertex> = t.colored(p).collect();
        if colored.len() > 3 {
            return Err(precondition(
                s,
                "a trunk has more than three colored vertices",
            ));
        }
        if colored.len() == 3 {
            let (forest, map) = t.to_forest();
            let idx = |v: Vertex| t.vertices.binary_search(&v).unwrap();
            let ab = forest
                .path_between(idx(colored[0]), idx(colored[1]))
                .unwrap();
            let bc = forest
                .path_between(idx(colored[1]), idx(colored[2]))
                .unwrap();
            let ac = forest
                .path_between(idx(colored[0]), idx(colored[2]))
                .unwrap();
            let median = ab
                .iter()
                .find(|v| bc.contains(v) && ac.contains(v))
                .map(|&i| map[i])
                .unwrap();
            return lowest_legal(s, median);
        }
    }
    let Some(first) = p.uncolored_vertices().next() else {
        return Err(precondition(s, "no trunk has an uncolored vertex"));
    };
    let t = ts.iter().find(|t| t.contains(first)).unwrap();
    let colored: Vec<Vertex> = t.colored(p).collect();
    if colored.len() == 2 {
        let (forest, map) = t.to_forest();
        let idx = |v: Vertex| t.vertices.binary_search(&v).unwrap();
        let path = forest
            .path_between(idx(colored[0]), idx(colored[1]))
            .unwrap();
        let inner = path[1..path.len() - 1].iter().map(|&i| map[i]).min();
        if let Some(v) = inner {
            return lowest_legal(s, v);
        }
    }
    lowest_legal(s, first)
}

fn colored_neighbors(p: &Position, v: Vertex) -> Vec<Vertex> {
    p.forest()
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| p.is_colored(w))
        .collect()
}

/// Three-color modified game on a small trunk, by the number of dangerous
/// vertices and their colored neighbors.
pub fn alice_small_trunk_3mcg(s: &GameState) -> Result<Move, StrategyError> {
    require_alice(s)?;
    let p = &s.position;
    let f = p.forest();
    let danger = dangerous_vertices(p, s.ruleset.palette);
    match danger.as_slice() {
        [] => match p.uncolored_vertices().next() {
            Some(v) => lowest_legal(s, v),
            None => Err(precondition(s, "no uncolored vertex")),
        },
        [v] => lowest_legal(s, *v),
        &[a, b] => {
            let cn = |v| colored_neighbors(p, v);
            if let Some(&v) = [a, b].iter().find(|&&v| cn(v).is_empty()) {
                let other = if v == a { b } else { a };
                return lowest_legal(s, other);
            }
            if let Some(&v) = [a, b].iter().find(|&&v| cn(v).len() >= 2) {
                return lowest_legal(s, v);
            }
            let Some(&x) = [a, b].iter().find(|&&v| f.degree(v) == 3) else {
                return Err(precondition(s, "neither dangerous vertex has degree 3"));
            };
            let y = if x == a { b } else { a };
            if !f.has_edge(x, y) {
                return lowest_legal(s, x);
            }
            let u = f.neighbors(x).iter().copied().find(|&u| {
                u != y
                    && !p.is_colored(u)
                    && !f.has_edge(u, y)
                    && colored_neighbors(p, u).is_empty()
            });
            let Some(u) = u else {
                return Err(precondition(
                    s,
                    "no uncolored neighbor of the degree-3 dangerous vertex is free",
                ));
            };
            let c = p.color(cn(x)[0]).unwrap();
            with_color(s, u, c)
        }
        _ => Err(precondition(s, "more than two dangerous vertices")),
    }
}

/// Whether a reduced piece meets the invariant the reduced-game strategy
/// maintains, counting same-colored leaves on one vertex once.
fn piece_ok(piece: &ReducedTrunk, p: &Position, relevant: &dyn Fn(Vertex) -> bool) -> bool {
    if !piece
        .vertices
        .iter()
        .any(|&v| !p.is_colored(v) && relevant(v))
    {
        return true;
    }
    match piece.effective_colored(p).len() {
        0 => piece.covering_vertex().exists(),
        1 => piece.heavy_edges().is_empty(),
        _ => false,
    }
}

fn piece_neighbor(piece: &ReducedTrunk, x: Vertex) -> Option<Vertex> {
    piece.edges.iter().find_map(|&(a, b)| {
        if a == x {
            Some(b)
        } else if b == x {
            Some(a)
        } else {
            None
        }
    })
}

/// Three-color reduced game, played on the reduced graph itself.
pub fn alice_rcg(s: &GameState) -> Result<Move, StrategyError> {
    require_alice(s)?;
    let p = &s.position;
    let relevant = |v: Vertex| s.is_relevant(v);
    let pieces = ReducedGraph::of(p).trunks;
    let open = |t: &ReducedTrunk| t.vertices.iter().any(|&v| !p.is_colored(v) && relevant(v));
    match pieces.iter().find(|t| !piece_ok(t, p, &relevant)) {
        None => {
            for t in pieces
                .iter()
                .filter(|t| open(t) && t.effective_colored(p).is_empty())
            {
                let v = match t.covering_vertex() {
                    Cover::Vertex(v) => v,
                    _ => *t
                        .vertices
                        .iter()
                        .find(|&&v| !p.is_colored(v) && relevant(v))
                        .unwrap(),
                };
                return lowest_legal(s, v);
            }
            for t in pieces.iter().filter(|t| open(t)) {
                let x = t.effective_colored(p)[0];
                if let Some(x1) = piece_neighbor(t, x).filter(|&w| !p.is_colored(w) && relevant(w))
                {
                    return lowest_legal(s, x1);
                }
            }
            match p.uncolored_vertices().find(|&v| relevant(v)) {
                Some(v) => lowest_legal(s, v),
                None => Err(precondition(s, "no uncolored vertex of high degree")),
            }
        }
        Some(t) => {
            let colored = t.effective_colored(p);
            let heavy = t.heavy_edges();
            match (colored.len(), heavy.is_empty()) {
                (2, true) => {
                    let x = colored[0];
                    let x1 = piece_neighbor(t, x).unwrap();
                    lowest_legal(s, x1)
                }
                (1, false) => {
                    let b = colored[0];
                    let (forest, map) = t.to_forest();
                    let idx = |v: Vertex| t.vertices.binary_search(&v).unwrap();
                    let dist = |v: Vertex| forest.distance(idx(b), idx(v)).unwrap();
                    let v = match (heavy.as_slice(), t.covering_vertex()) {
                        ([(x, y)], _) => {
                            if dist(*x) <= dist(*y) {
                                *x
                            } else {
                                *y
                            }
                        }
                        (_, Cover::Vertex(v)) => v,
                        _ => {
                            return Err(precondition(
                                s,
                                "heavy edges of the piece have no common vertex",
                            ))
                        }
                    };
                    match dist(v) {
                        0 => Err(precondition(s, "covering vertex is already colored")),
                        1 => lowest_legal(s, v),
                        2 => with_color(s, v, p.color(b).unwrap()),
                        _ => {
                            let path = forest.path_between(idx(b), idx(v)).unwrap();
                            lowest_legal(s, map[path[1]])
                        }
                    }
                }
                _ => Err(precondition(
                    s,
                    "a reduced piece is beyond repair in one move",
                )),
            }
        }
    }
}

/// Two-color game on a forest whose components have paths of length at
/// most 3: mirror Bob inside 4-vertex paths, otherwise secure star centers.
pub fn alice_2color(s: &GameState) -> Result<Move, StrategyError> {
    require_alice(s)?;
    let p = &s.position;
    let f = p.forest();
    if !is_chi_g_2(f).holds {
        return Err(precondition(s, "two colors do not suffice on this forest"));
    }
    let comps = f.components();
    let is_p4 = |c: &Vec<Vertex>| c.len() == 4 && c.iter().all(|&v| f.degree(v) <= 2);
    for c in comps.iter().filter(|c| is_p4(c)) {
        let colored: Vec<Vertex> = c.iter().copied().filter(|&v| p.is_colored(v)).collect();
        match colored.len() {
            1 => {
                let w = colored[0];
                let d = f.distances_from(w);
                let mirror = c.iter().copied().find(|&v| d[v] == Some(2)).unwrap();
                return with_color(s, mirror, p.color(w).unwrap());
            }
            3 => {
                let v = c.iter().copied().find(|&v| !p.is_colored(v)).unwrap();
                return lowest_legal(s, v);
            }
            _ => {}
        }
    }
    let rest: Vec<&Vec<Vertex>> = comps.iter().filter(|c| !is_p4(c)).collect();
    let center = |c: &Vec<Vertex>| c.iter().copied().find(|&v| f.degree(v) >= 2);
    for c in &rest {
        if let Some(z) = center(c) {
            if !p.is_colored(z) && c.iter().any(|&v| p.is_colored(v)) {
                return lowest_legal(s, z);
            }
        }
    }
    let open_center = rest
        .iter()
        .filter_map(|c| center(c))
        .filter(|&z| !p.is_colored(z))
        .min();
    if let Some(z) = open_center {
        return lowest_legal(s, z);
    }
    let in_rest = rest
        .iter()
        .flat_map(|c| c.iter().copied())
        .filter(|&v| !p.is_colored(v))
        .min();
    match in_rest.or_else(|| p.uncolored_vertices().next()) {
        Some(v) => lowest_legal(s, v),
        None => Err(precondition(s, "no uncolored vertex")),
    }
}

#[derive(Hash, PartialEq, Eq)]
struct ExactState {
    coloring: Vec<Option<Color>>,
    external: Vec<ColorSet>,
    to_move: Player,
}

/// Whether `policy` wins from `s` against every sequence of opponent
/// moves. States are memoized exactly, since a policy need not treat
/// color-permuted states alike.
pub fn verify_policy(policy: &dyn Policy, s: &GameState) -> Result<bool, StrategyError> {
    let mut memo = FxHashMap::default();
    explore(policy, s, &mut memo)
}

fn explore(
    policy: &dyn Policy,
    s: &GameState,
    memo: &mut FxHashMap<ExactState, bool>,
) -> Result<bool, StrategyError> {
    let side = policy.side();
    let wins = |v: Verdict| v.winner() == side;
    if let Some(v) = s.terminal() {
        return Ok(wins(v));
    }
    let key = ExactState {
        coloring: s.position.coloring().to_vec(),
        external: (0..s.position.order())
            .map(|v| s.position.external(v))
            .collect(),
        to_move: s.to_move,
    };
    if let Some(&r) = memo.get(&key) {
        return Ok(r);
    }
    let result = if s.to_move == side {
        let mv = policy.choose(s)?;
        let next = s.apply_move(mv).map_err(|e| StrategyError::IllegalMove {
            state: describe(s),
            mv,
            reason: e.to_string(),
        })?;
        explore(policy, &next, memo)?
    } else {
        let mut all = true;
        for m in s.legal_moves() {
            let next = s.apply_move(m).expect("generated move is legal");
            if !explore(policy, &next, memo)? {
                all = false;
                break;
            }
        }
        all
    };
    memo.insert(key, result);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::Forest;
    use crate::game::Ruleset;

    fn forest(n: usize, e: &[(usize, usize)]) -> Forest {
        Forest::new(n, e).unwrap()
    }

    fn path(n: usize) -> Forest {
        forest(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>())
    }

    #[test]
    fn four_color_examples() {
        let spider = forest(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        let p = Position::new(spider)
            .with_color(2, Color(0))
            .unwrap()
            .with_color(4, Color(1))
            .unwrap()
            .with_color(6, Color(2))
            .unwrap();
        let s = GameState::new(p, Ruleset::modified(4))
            .unwrap()
            .with_to_move(Player::Alice);
        assert_eq!(alice_4mcg(&s), Ok(Move::ColorVertex(0, Color(0))));

        let p = Position::new(path(5))
            .with_color(0, Color(0))
            .unwrap()
            .with_color(4, Color(1))
            .unwrap();
        let s = GameState::new(p, Ruleset::modified(4))
            .unwrap()
            .with_to_move(Player::Alice);
        assert_eq!(alice_4mcg(&s), Ok(Move::ColorVertex(1, Color(1))));

        let p = Position::new(path(2))
            .with_color(0, Color(0))
            .unwrap()
            .with_color(1, Color(1))
            .unwrap();
        let s = GameState::new(p, Ruleset::modified(4))
            .unwrap()
            .with_to_move(Player::Alice);
        assert!(matches!(
            alice_4mcg(&s),
            Err(StrategyError::Precondition { .. })
        ));
    }

    #[test]
    fn two_color_examples() {
        let f = path(4).disjoint_union(&Forest::empty(1));
        let s = GameState::start(f.clone(), Ruleset::standard(2)).unwrap();
        assert!(verify_policy(&FnPolicy::alice(alice_2color), &s).unwrap());
        let p = Position::new(f).with_color(0, Color(0)).unwrap();
        let s = GameState::new(p, Ruleset::standard(2)).unwrap();
        assert_eq!(alice_2color(&s), Ok(Move::ColorVertex(2, Color(0))));
    }

    #[test]
    fn naive_policy_fails() {
        let naive = FnPolicy::alice(|s: &GameState| {
            let v = s.position.uncolored_vertices().next().unwrap();
            Ok(Move::ColorVertex(v, Color(0)))
        });
        let s = GameState::start(path(2), Ruleset::standard(1)).unwrap();
        assert_eq!(verify_policy(&naive, &s), Ok(false));
    }

    #[test]
    fn illegal_choice_is_reported() {
        let bad = FnPolicy::alice(|_: &GameState| Ok(Move::Pass));
        let s = GameState::start(path(2), Ruleset::standard(2)).unwrap();
        assert!(matches!(
            verify_policy(&bad, &s),
            Err(StrategyError::IllegalMove { .. })
        ));
    }
}
