//! Canonical state keys.
//!
//! A key records, per vertex, either "colored" or the set of colors it may no
//! longer take, after relabeling the palette into a canonical order, plus the
//! player to move. Two states whose keys agree (on the same forest under the
//! same rules) have the same verdict: colored vertices influence the rest of
//! the game only through their neighbors' forbidden sets, and the verdict is
//! invariant under palette permutations.

use std::fmt::Write as _;

use smallvec::SmallVec;

use super::board::{bits_iter, Bits, Board};
use super::{forest_fingerprint, GameState, Player};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateKey(SmallVec<[u64; 4]>);

impl StateKey {
    pub fn words(&self) -> &[u64] {
        &self.0
    }

    pub fn from_words(words: &[u64]) -> Self {
        StateKey(words.iter().copied().collect())
    }
}

impl Board {
    pub(crate) fn state_key(&self, to_move: Player) -> StateKey {
        let t = self.t;
        // Order colors by the set of uncolored vertices that forbid them;
        // colors with equal signatures are interchangeable.
        let mut sig: [Bits; 8] = [0; 8];
        for v in bits_iter(self.uncolored) {
            let mut m = self.forb[v] & self.full;
            while m != 0 {
                let c = m.trailing_zeros() as usize;
                m &= m - 1;
                sig[c] |= 1 << v;
            }
        }
        let mut order: [u8; 8] = [0, 1, 2, 3, 4, 5, 6, 7];
        order[..t].sort_by(|&a, &b| sig[b as usize].cmp(&sig[a as usize]));
        let mut perm = [0u8; 8];
        for (rank, &c) in order[..t].iter().enumerate() {
            perm[c as usize] = rank as u8;
        }
        let width = t + 1;
        let colored_code = 1u64 << t;
        let mut words: SmallVec<[u64; 4]> = SmallVec::new();
        let mut cur = 0u64;
        let mut used = 0;
        let mut push = |value: u64, bits: usize| {
            if used + bits > 64 {
                words.push(cur);
                cur = 0;
                used = 0;
            }
            cur |= value << used;
            used += bits;
        };
        for v in 0..self.n {
            let code = if self.is_uncolored(v) {
                let mut m = self.forb[v] & self.full;
                let mut out = 0u64;
                while m != 0 {
                    let c = m.trailing_zeros() as usize;
                    m &= m - 1;
                    out |= 1 << perm[c];
                }
                out
            } else {
                colored_code
            };
            push(code, width);
        }
        push((to_move == Player::Bob) as u64, 1);
        words.push(cur);
        StateKey(words)
    }
}

/// A state key qualified by the forest and the ruleset it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalKey {
    pub forest: u64,
    pub ruleset: u64,
    pub state: StateKey,
}

impl CanonicalKey {
    pub fn to_hex(&self) -> String {
        let mut s = format!("{:016x}{:016x}", self.forest, self.ruleset);
        for w in self.state.words() {
            write!(s, "{w:016x}").unwrap();
        }
        s
    }

    pub fn from_hex(hex: &str) -> Option<Self> {
        if hex.len() < 48 || hex.len() % 16 != 0 || !hex.is_ascii() {
            return None;
        }
        let word = |i: usize| u64::from_str_radix(&hex[16 * i..16 * i + 16], 16).ok();
        let words: Option<Vec<u64>> = (2..hex.len() / 16).map(word).collect();
        Some(CanonicalKey {
            forest: word(0)?,
            ruleset: word(1)?,
            state: StateKey::from_words(&words?),
        })
    }
}

/// Canonical key of a state. Equal for states that differ by a palette
/// permutation; includes the player to move and the ruleset digest.
///
/// Panics if the forest has more than 128 vertices.
pub fn canonical_key(s: &GameState) -> CanonicalKey {
    let board = Board::from_state(s).expect("forest too large for state keys");
    CanonicalKey {
        forest: forest_fingerprint(s.forest()),
        ruleset: s.ruleset.stable_hash(),
        state: board.state_key(s.to_move),
    }
}
