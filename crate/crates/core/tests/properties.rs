mod common;

use std::sync::OnceLock;

use gamechrom::constructions::glue_at_vertex;
use gamechrom::enumeration::{forests_of_order, trees_of_order};
use gamechrom::game::{bob_wins_within, solve};
use gamechrom::strategies::{alice_4mcg, verify_policy, FnPolicy};
use gamechrom::structure::{find_splitter, reduced_graph, trunks};
use gamechrom::{Color, Forest, GameState, Player, Position, Ruleset, Verdict};
use proptest::prelude::*;

fn forests_upto(n: usize) -> &'static [Forest] {
    static CACHE: OnceLock<Vec<Forest>> = OnceLock::new();
    let all = CACHE.get_or_init(|| (0..=10).flat_map(forests_of_order).collect());
    let end = all.iter().position(|f| f.order() > n).unwrap_or(all.len());
    &all[..end]
}

/// Applies the legal ones among `attempts` (vertex, color) to an uncolored
/// copy of `f`.
fn colored(f: &Forest, t: usize, attempts: &[(usize, u8)]) -> Position {
    let mut p = Position::new(f.clone());
    if f.order() == 0 || t == 0 {
        return p;
    }
    for &(v, c) in attempts {
        let v = v % f.order();
        let c = Color(c % t as u8);
        if !p.is_colored(v) && p.legal_colors(v, t).contains(c) {
            p.set_color(v, c).unwrap();
        }
    }
    p
}

fn ruleset(kind: u8, t: usize) -> Ruleset {
    common::rulesets(t)[kind as usize % 4]
}

fn attempts(max: usize) -> impl Strategy<Value = Vec<(usize, u8)>> {
    prop::collection::vec((0usize..64, 0u8..8), 0..max)
}

fn state(max_n: usize) -> impl Strategy<Value = GameState> {
    (
        any::<prop::sample::Index>(),
        1usize..=4,
        any::<u8>(),
        attempts(8),
        any::<bool>(),
    )
        .prop_map(move |(i, t, kind, a, bob)| {
            let fs = forests_upto(max_n);
            let f = &fs[i.index(fs.len())];
            let mover = if bob { Player::Bob } else { Player::Alice };
            GameState::new(colored(f, t, &a), ruleset(kind, t))
                .unwrap()
                .with_to_move(mover)
        })
}

fn uncolored_trunk_position(
    p: &Position,
    vertices: &[usize],
    edges: &[(usize, usize)],
) -> Position {
    let idx = |v: usize| vertices.binary_search(&v).unwrap();
    let local: Vec<_> = edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
    let mut q = Position::new(Forest::new(vertices.len(), &local).unwrap());
    for (i, &v) in vertices.iter().enumerate() {
        if let Some(c) = p.color(v) {
            q.set_color(i, c).unwrap();
        }
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verdict_is_invariant_under_color_permutation(s in state(8), perm in Just([0u8, 1, 2, 3]).prop_shuffle()) {
        let t = s.ruleset.palette;
        let mut p: Vec<u8> = perm.iter().copied().filter(|&c| (c as usize) < t).collect();
        p.resize(8, 0);
        let moved = GameState::new(s.position.permute_colors(&p), s.ruleset).unwrap().with_to_move(s.to_move);
        prop_assert_eq!(solve(&s).unwrap(), solve(&moved).unwrap());
    }

    #[test]
    fn certification_is_sound(s in state(8), depth in 0u32..4) {
        if bob_wins_within(&s, depth).unwrap() {
            prop_assert_eq!(solve(&s).unwrap(), Verdict::BobWin);
        }
    }

    #[test]
    fn trunk_wins_compose_in_the_modified_game(i in any::<prop::sample::Index>(), t in 2usize..=4, a in attempts(6)) {
        let fs = forests_upto(7);
        let p = colored(&fs[i.index(fs.len())], t, &a);
        let ts = trunks(&p);
        prop_assume!(ts.len() <= 2);
        let r = Ruleset::modified(t);
        let each = ts.iter().all(|tr| {
            let q = uncolored_trunk_position(&p, &tr.vertices, &tr.edges);
            solve(&GameState::new(q, r).unwrap()).unwrap() == Verdict::AliceWin
        });
        if each {
            prop_assert_eq!(solve(&GameState::new(p, r).unwrap()).unwrap(), Verdict::AliceWin);
        }
    }

    #[test]
    fn expanded_game_loss_lifts_to_the_whole_forest(
        i in any::<prop::sample::Index>(),
        t in 2usize..=3,
        root in 0usize..64,
        keep in prop::collection::vec(any::<bool>(), 8),
    ) {
        let fs = forests_upto(7);
        let f = &fs[i.index(fs.len())];
        prop_assume!(f.order() > 0);
        let root = root % f.order();
        let mut sub = vec![root];
        let mut k = 0;
        while k < sub.len() {
            for &w in f.neighbors(sub[k]) {
                if !sub.contains(&w) && keep[w % keep.len()] {
                    sub.push(w);
                }
            }
            k += 1;
        }
        sub.sort_unstable();
        let (part, _) = f.induced(&sub);
        let local = GameState::start(part, Ruleset::expanded(t)).unwrap();
        if solve(&local).unwrap() == Verdict::BobWin {
            prop_assert_eq!(solve(&GameState::start(f.clone(), Ruleset::standard(t)).unwrap()).unwrap(), Verdict::BobWin);
        }
    }

    #[test]
    fn trunks_cover_vertices_as_stated(i in any::<prop::sample::Index>(), t in 1usize..=4, a in attempts(10)) {
        let fs = forests_upto(10);
        let p = colored(&fs[i.index(fs.len())], t, &a);
        let f = p.forest();
        let ts = trunks(&p);
        for v in f.vertices() {
            let count = ts.iter().filter(|tr| tr.contains(v)).count();
            let expected = if p.is_colored(v) { f.degree(v) } else { 1 };
            prop_assert_eq!(count, expected, "vertex {}", v);
        }
        for tr in &ts {
            for v in tr.colored(&p) {
                prop_assert_eq!(tr.degree(v), 1);
            }
        }
    }

    #[test]
    fn reduced_graph_edges_are_heavy_trunk_edges(i in any::<prop::sample::Index>(), t in 1usize..=4, a in attempts(10)) {
        let fs = forests_upto(10);
        let p = colored(&fs[i.index(fs.len())], t, &a);
        let ts = trunks(&p);
        for piece in &reduced_graph(&p).trunks {
            for &(x, y) in &piece.edges {
                let tr = ts.iter().find(|tr| tr.edges.contains(&(x.min(y), x.max(y))));
                prop_assert!(tr.is_some(), "edge {:?} is not a trunk edge", (x, y));
                let tr = tr.unwrap();
                prop_assert!(!(p.is_colored(x) && p.is_colored(y)));
                prop_assert!(tr.degree(x) >= 3 || tr.degree(y) >= 3);
            }
        }
    }

    #[test]
    fn gluing_counts(i in any::<prop::sample::Index>(), u in 0usize..16, k in 1usize..=4) {
        let trees: Vec<Forest> = (1..=7).flat_map(trees_of_order).collect();
        let g = &trees[i.index(trees.len())];
        let u = u % g.order();
        let glued = glue_at_vertex(g, u, k);
        prop_assert_eq!(glued.order(), k * g.order() - (k - 1));
        prop_assert_eq!(glued.degree(0), k * g.degree(u));
    }
}

#[test]
fn splitter_leaves_pieces_of_at_most_six() {
    for n in 7..=13 {
        for f in trees_of_order(n) {
            let all: Vec<usize> = f.vertices().collect();
            assert!(find_splitter(&f, &all).within_six(), "{:?}", f.edges());
        }
    }
}

#[test]
fn small_trees_have_few_branch_vertices() {
    for n in 1..=7 {
        for f in trees_of_order(n) {
            let over2 = f.vertices().filter(|&v| f.degree(v) > 2).count();
            let over3 = f.vertices().filter(|&v| f.degree(v) > 3).count();
            assert!(over2 <= 2 && over3 <= 1, "{:?}", f.edges());
        }
    }
}

fn brute_force_longest_path(f: &Forest) -> i64 {
    let mut best = -1;
    for x in f.vertices() {
        for (y, d) in f.distances_from(x).into_iter().enumerate() {
            if y >= x {
                if let Some(d) = d {
                    best = best.max(d as i64);
                }
            }
        }
    }
    best
}

#[test]
fn longest_path_matches_brute_force() {
    for n in 0..=9 {
        for f in forests_of_order(n) {
            assert_eq!(
                f.longest_path_length(),
                brute_force_longest_path(&f),
                "{:?}",
                f.edges()
            );
        }
    }
}

#[test]
fn b_vertex_check_ignores_the_color_of_b() {
    for n in 1..=10 {
        for f in trees_of_order(n) {
            for b in f.vertices() {
                let zero = Position::new(f.clone()).with_color(b, Color(0)).unwrap();
                let one = Position::new(f.clone()).with_color(b, Color(1)).unwrap();
                assert_eq!(reduced_graph(&zero), reduced_graph(&one));
            }
        }
    }
}

#[test]
fn verified_policies_agree_with_the_solver() {
    let policy = FnPolicy::alice(alice_4mcg);
    for n in 1..=6 {
        for f in trees_of_order(n) {
            let s = GameState::start(f, Ruleset::modified(4)).unwrap();
            if verify_policy(&policy, &s).unwrap() {
                assert_eq!(solve(&s).unwrap(), Verdict::AliceWin);
            }
        }
    }
}
