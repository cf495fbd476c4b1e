//! The coloring game and its variants.
//!
//! A [`Ruleset`] fixes the palette, who moves first, pass rights, whether
//! Alice may attach external colored leaves, an optional degree restriction on
//! Alice's moves and the win condition. The four named variants are the
//! standard game, the modified game (Bob first, Bob may pass), the expanded
//! game (Alice may pass or add a colored leaf) and the reduced game (modified
//! game where Alice colors only high-degree vertices and wins once those are
//! colored).

mod board;
mod key;
mod reference;
mod solver;
mod table;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::forest::{Forest, Vertex};
use crate::position::{Color, ColorSet, Position, PositionError, MAX_PALETTE};

pub use key::{canonical_key, CanonicalKey, StateKey};
pub use reference::minimax;
pub use solver::{
    bob_wins_within, game_chromatic_number, solve, GameChromatic, SolveError, SolveStats, Solver,
    SolverConfig,
};
pub use table::{CacheError, SharedTable, TranspositionTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "Alice",
            Player::Bob => "Bob",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WinCondition {
    AllColored,
    /// Alice wins once every vertex of at least this degree is colored; only
    /// those vertices count for Bob's win as well.
    AllDegreeAtLeast(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RulesetError {
    #[error("palette of {0} colors exceeds the supported maximum of {MAX_PALETTE}")]
    PaletteTooLarge(usize),
    #[error("leaf addition is only available as an alternative to passing")]
    LeafWithoutPass,
    #[error("both players may pass, so play need not terminate")]
    BothMayPass,
    #[error("a degree restriction on Alice requires the matching degree win condition")]
    RestrictionMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ruleset {
    pub palette: usize,
    pub first_mover: Player,
    pub alice_may_pass: bool,
    pub alice_may_add_leaf: bool,
    pub bob_may_pass: bool,
    pub alice_min_degree: Option<usize>,
    pub win_condition: WinCondition,
}

impl Ruleset {
    /// The `t`-coloring game: Alice first, no passes.
    pub fn standard(t: usize) -> Self {
        Ruleset {
            palette: t,
            first_mover: Player::Alice,
            alice_may_pass: false,
            alice_may_add_leaf: false,
            bob_may_pass: false,
            alice_min_degree: None,
            win_condition: WinCondition::AllColored,
        }
    }

    /// Modified game: Bob moves first and may pass.
    pub fn modified(t: usize) -> Self {
        Ruleset {
            first_mover: Player::Bob,
            bob_may_pass: true,
            ..Self::standard(t)
        }
    }

    /// Expanded game: Alice may pass, and instead of passing may attach a
    /// colored leaf.
    pub fn expanded(t: usize) -> Self {
        Ruleset {
            alice_may_pass: true,
            alice_may_add_leaf: true,
            ..Self::standard(t)
        }
    }

    /// Reduced game with `k` colors: Alice colors only vertices of degree at
    /// least `k` and wins once all of them are colored.
    pub fn reduced(k: usize) -> Self {
        Ruleset {
            alice_min_degree: Some(k),
            win_condition: WinCondition::AllDegreeAtLeast(k),
            ..Self::modified(k)
        }
    }

    pub fn with_first_mover(self, p: Player) -> Self {
        Ruleset {
            first_mover: p,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), RulesetError> {
        if self.palette > MAX_PALETTE {
            return Err(RulesetError::PaletteTooLarge(self.palette));
        }
        if self.alice_may_add_leaf && !self.alice_may_pass {
            return Err(RulesetError::LeafWithoutPass);
        }
        if self.alice_may_pass && self.bob_may_pass {
            return Err(RulesetError::BothMayPass);
        }
        if let Some(k) = self.alice_min_degree {
            if self.win_condition != WinCondition::AllDegreeAtLeast(k) {
                return Err(RulesetError::RestrictionMismatch);
            }
        }
        Ok(())
    }

    pub fn may_pass(&self, p: Player) -> bool {
        match p {
            Player::Alice => self.alice_may_pass,
            Player::Bob => self.bob_may_pass,
        }
    }

    /// Stable 64-bit FNV-1a digest of the ruleset.
    pub fn stable_hash(&self) -> u64 {
        let (wc, wk) = match self.win_condition {
            WinCondition::AllColored => (0u64, 0u64),
            WinCondition::AllDegreeAtLeast(k) => (1, k as u64),
        };
        let fields = [
            self.palette as u64,
            (self.first_mover == Player::Bob) as u64,
            self.alice_may_pass as u64,
            self.alice_may_add_leaf as u64,
            self.bob_may_pass as u64,
            self.alice_min_degree.map_or(u64::MAX, |k| k as u64),
            wc,
            wk,
        ];
        fnv1a(fields.iter().flat_map(|x| x.to_le_bytes()))
    }
}

pub(crate) fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    bytes.into_iter().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Stable digest of a forest's edge list.
pub fn forest_fingerprint(f: &Forest) -> u64 {
    let words = std::iter::once(f.order() as u64)
        .chain(f.edges().iter().flat_map(|&(u, v)| [u as u64, v as u64]));
    fnv1a(words.flat_map(u64::to_le_bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    ColorVertex(Vertex, Color),
    Pass,
    AddExternal(Vertex, Color),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::ColorVertex(v, c) => write!(f, "color {v} with {c}"),
            Move::Pass => f.write_str("pass"),
            Move::AddExternal(v, c) => write!(f, "attach leaf colored {c} at {v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    AliceWin,
    BobWin,
}

impl Verdict {
    pub fn winner(self) -> Player {
        match self {
            Verdict::AliceWin => Player::Alice,
            Verdict::BobWin => Player::Bob,
        }
    }

    pub fn for_alice(alice_wins: bool) -> Self {
        if alice_wins {
            Verdict::AliceWin
        } else {
            Verdict::BobWin
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::AliceWin => "AliceWin",
            Verdict::BobWin => "BobWin",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("invalid ruleset: {0}")]
    Ruleset(#[from] RulesetError),
    #[error("invalid position: {0}")]
    Position(#[from] PositionError),
    #[error("illegal move `{mv}`: {reason}")]
    IllegalMove { mv: Move, reason: &'static str },
}

/// A position, the player to move and the rules in force.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    pub position: Position,
    pub to_move: Player,
    pub ruleset: Ruleset,
}

impl GameState {
    /// Validates the ruleset and the position against its palette. The first
    /// mover of the ruleset is to move.
    pub fn new(position: Position, ruleset: Ruleset) -> Result<Self, GameError> {
        ruleset.validate()?;
        position.validate(ruleset.palette)?;
        Ok(GameState {
            to_move: ruleset.first_mover,
            position,
            ruleset,
        })
    }

    /// The uncolored forest under `ruleset`.
    pub fn start(forest: Forest, ruleset: Ruleset) -> Result<Self, GameError> {
        Self::new(Position::new(forest), ruleset)
    }

    pub fn with_to_move(mut self, p: Player) -> Self {
        self.to_move = p;
        self
    }

    pub fn forest(&self) -> &Forest {
        self.position.forest()
    }

    pub fn shared_forest(&self) -> &Arc<Forest> {
        self.position.shared_forest()
    }

    /// Whether `v` counts for the win condition.
    pub fn is_relevant(&self, v: Vertex) -> bool {
        match self.ruleset.win_condition {
            WinCondition::AllColored => true,
            WinCondition::AllDegreeAtLeast(k) => self.forest().degree(v) >= k,
        }
    }

    pub fn alice_may_color(&self, v: Vertex) -> bool {
        self.ruleset
            .alice_min_degree
            .is_none_or(|k| self.forest().degree(v) >= k)
    }

    pub fn legal_colors(&self, v: Vertex) -> ColorSet {
        self.position.legal_colors(v, self.ruleset.palette)
    }

    /// Every legal move for the player to move, without duplicates, in a
    /// fixed order: colorings by vertex then color, then pass, then leaf
    /// additions.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut moves = Vec::new();
        let alice = self.to_move == Player::Alice;
        for v in self.position.uncolored_vertices() {
            if alice && !self.alice_may_color(v) {
                continue;
            }
            moves.extend(self.legal_colors(v).iter().map(|c| Move::ColorVertex(v, c)));
        }
        if self.ruleset.may_pass(self.to_move) {
            moves.push(Move::Pass);
        }
        if alice && self.ruleset.alice_may_add_leaf {
            let full = ColorSet::full(self.ruleset.palette);
            for v in self.position.uncolored_vertices() {
                moves.extend(
                    full.minus(self.position.external(v))
                        .iter()
                        .map(|c| Move::AddExternal(v, c)),
                );
            }
        }
        moves
    }

    pub fn check_move(&self, m: Move) -> Result<(), GameError> {
        let illegal = |reason| Err(GameError::IllegalMove { mv: m, reason });
        let n = self.position.order();
        match m {
            Move::ColorVertex(v, c) => {
                if v >= n {
                    return illegal("vertex out of range");
                }
                if self.position.is_colored(v) {
                    return illegal("vertex already colored");
                }
                if c.index() >= self.ruleset.palette {
                    return illegal("color outside the palette");
                }
                if !self.legal_colors(v).contains(c) {
                    return illegal("color used by a neighbor or attached leaf");
                }
                if self.to_move == Player::Alice && !self.alice_may_color(v) {
                    return illegal("vertex degree below Alice's restriction");
                }
            }
            Move::Pass => {
                if !self.ruleset.may_pass(self.to_move) {
                    return illegal("passing not allowed for this player");
                }
            }
            Move::AddExternal(v, c) => {
                if self.to_move != Player::Alice || !self.ruleset.alice_may_add_leaf {
                    return illegal("leaf addition not allowed for this player");
                }
                if v >= n {
                    return illegal("vertex out of range");
                }
                if self.position.is_colored(v) {
                    return illegal("leaves are only attached to uncolored vertices");
                }
                if c.index() >= self.ruleset.palette {
                    return illegal("color outside the palette");
                }
                if self.position.external(v).contains(c) {
                    return illegal("a leaf of that color is already attached");
                }
            }
        }
        Ok(())
    }

    pub fn apply_move(&self, m: Move) -> Result<GameState, GameError> {
        self.check_move(m)?;
        let mut next = self.clone();
        match m {
            Move::ColorVertex(v, c) => next.position.set_color(v, c)?,
            Move::AddExternal(v, c) => next.position.add_external(v, c)?,
            Move::Pass => {}
        }
        next.to_move = self.to_move.other();
        Ok(next)
    }

    /// The verdict if the game is over.
    pub fn terminal(&self) -> Option<Verdict> {
        let mut open = false;
        for v in self.position.uncolored_vertices() {
            if !self.is_relevant(v) {
                continue;
            }
            if self.legal_colors(v).is_empty() {
                return Some(Verdict::BobWin);
            }
            open = true;
        }
        (!open).then_some(Verdict::AliceWin)
    }

    /// Bob colorings (ignoring whose turn it is) after which some relevant
    /// vertex has no legal color.
    pub fn find_winning_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        let f = self.forest();
        for v in self.position.uncolored_vertices() {
            for c in self.legal_colors(v).iter() {
                let kills = f.neighbors(v).iter().any(|&w| {
                    !self.position.is_colored(w)
                        && self.is_relevant(w)
                        && self.legal_colors(w) == ColorSet::EMPTY.with(c)
                });
                if kills {
                    out.push(Move::ColorVertex(v, c));
                }
            }
        }
        out
    }

    /// Two winning moves whose target vertices are more than distance 2
    /// apart, if any.
    pub fn disjoint_winning_moves(&self) -> Option<(Move, Move)> {
        let w = self.find_winning_moves();
        for (i, &a) in w.iter().enumerate() {
            for &b in &w[i + 1..] {
                if moves_disjoint(self.forest(), a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// Whether two coloring moves target vertices at distance more than 2
/// (vertices in different components count as disjoint).
pub fn moves_disjoint(f: &Forest, a: Move, b: Move) -> bool {
    match (a, b) {
        (Move::ColorVertex(x, _), Move::ColorVertex(y, _)) => {
            f.distance(x, y).map_or(true, |d| d > 2)
        }
        _ => false,
    }
}
