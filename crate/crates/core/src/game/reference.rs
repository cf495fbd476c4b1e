//! Plain minimax over the public move interface, without memoization or
//! pruning beyond short-circuiting. Exponential; meant as an oracle for
//! small instances.

use super::{GameState, Player, Verdict};

/// Exact verdict by exhaustive game-tree search. A player with no legal
/// move loses.
pub fn minimax(s: &GameState) -> Verdict {
    if let Some(v) = s.terminal() {
        return v;
    }
    let mover_wins = match s.to_move {
        Player::Alice => Verdict::AliceWin,
        Player::Bob => Verdict::BobWin,
    };
    let moves = s.legal_moves();
    for m in moves {
        let next = s.apply_move(m).expect("generated move is legal");
        if minimax(&next) == mover_wins {
            return mover_wins;
        }
    }
    match mover_wins {
        Verdict::AliceWin => Verdict::BobWin,
        Verdict::BobWin => Verdict::AliceWin,
    }
}
