#![allow(dead_code)]

use gamechrom::enumeration::forests_of_order;
use gamechrom::game::{minimax, Solver};
use gamechrom::{Forest, GameState, Player, Position, Ruleset};

pub fn rulesets(t: usize) -> [Ruleset; 4] {
    [
        Ruleset::standard(t),
        Ruleset::modified(t),
        Ruleset::expanded(t),
        Ruleset::reduced(t),
    ]
}

/// Every proper partial coloring of `f` with at most `t` colors.
pub fn partial_colorings(f: &Forest, t: usize) -> Vec<Position> {
    let mut out = vec![Position::new(f.clone())];
    for v in f.vertices() {
        let mut next = Vec::new();
        for p in out {
            for c in p.legal_colors(v, t).iter() {
                next.push(p.with_color(v, c).unwrap());
            }
            next.push(p);
        }
        out = next;
    }
    out
}

/// Solver against plain minimax on every partial coloring, mover and
/// ruleset of every forest up to `max_n` vertices with up to `max_t`
/// colors. Returns the number of states compared and the mismatches.
pub fn oracle_sweep(max_n: usize, max_t: usize) -> (u64, Vec<String>) {
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for n in 0..=max_n {
        for f in forests_of_order(n) {
            for t in 0..=max_t {
                for r in rulesets(t) {
                    let mut solver = Solver::default();
                    for p in partial_colorings(&f, t) {
                        for mover in [Player::Alice, Player::Bob] {
                            let s = GameState::new(p.clone(), r).unwrap().with_to_move(mover);
                            let fast = solver.solve(&s).unwrap().to_string();
                            let slow = minimax(&s).to_string();
                            if fast != slow {
                                bad.push(format!("{s:?}: solver {fast}, minimax {slow}"));
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    (checked, bad)
}

/// Leaves of `f`, ascending.
pub fn leaves(f: &Forest) -> Vec<usize> {
    f.vertices().filter(|&v| f.degree(v) == 1).collect()
}
