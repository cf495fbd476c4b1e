//! Exact solving and bounded Bob-win certification.

use std::sync::Arc;

use rustc_hash::FxHashMap;
use thiserror::Error;

use super::board::{bits_iter, Bits, Board, MAX_ORDER};
use super::key::{CanonicalKey, StateKey};
use super::table::{
    read_cache, write_cache, CacheError, SharedTable, TranspositionTable, ENTRY_BYTES,
};
use super::{forest_fingerprint, GameError, GameState, Move, Player, Ruleset, Verdict};
use crate::forest::Forest;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("transposition table full at {entries} entries; raise the memory budget or enable lossy mode")]
    CapacityExhausted { entries: usize },
    #[error("forest of order {order} exceeds the solver limit of {MAX_ORDER} vertices")]
    TooLarge { order: usize },
    #[error(transparent)]
    InvalidState(#[from] GameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of memoized states.
    pub memo_capacity: usize,
    /// Drop inserts at capacity instead of failing.
    pub lossy: bool,
}

impl SolverConfig {
    pub fn with_memo_megabytes(mb: usize) -> Self {
        SolverConfig {
            memo_capacity: mb.saturating_mul(1 << 20) / ENTRY_BYTES,
            lossy: false,
        }
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::with_memo_megabytes(1024)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub memo_entries: usize,
    pub max_depth: usize,
}

#[derive(Clone, Copy)]
struct Rules {
    alice_pass: bool,
    alice_leaf: bool,
    bob_pass: bool,
    max_depth: usize,
}

impl Rules {
    fn of(r: &Ruleset, n: usize) -> Self {
        Rules {
            alice_pass: r.alice_may_pass,
            alice_leaf: r.alice_may_add_leaf,
            bob_pass: r.bob_may_pass,
            max_depth: 2 * n + r.palette * n + 1,
        }
    }
}

/// Bounds for the depth-limited search: Bob wins within any budget of at
/// least `true_from`, and does not within any budget up to `false_upto`.
#[derive(Clone, Copy)]
struct Bounds {
    true_from: u32,
    false_upto: i64,
}

/// A single-threaded solver with its own transposition table.
///
/// The table is tied to one forest and ruleset and is cleared when a state
/// from a different game is solved. An optional [`SharedTable`] lets several
/// solvers reuse each other's verdicts.
pub struct Solver {
    table: TranspositionTable,
    bounds: FxHashMap<StateKey, Bounds>,
    context: Option<(Arc<Forest>, Ruleset)>,
    fingerprint: u64,
    ruleset_hash: u64,
    shared: Option<Arc<SharedTable>>,
    stats: SolveStats,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new(SolverConfig::default())
    }
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver {
            table: TranspositionTable::new(config.memo_capacity, config.lossy),
            bounds: FxHashMap::default(),
            context: None,
            fingerprint: 0,
            ruleset_hash: 0,
            shared: None,
            stats: SolveStats::default(),
        }
    }

    pub fn with_shared_table(mut self, shared: Arc<SharedTable>) -> Self {
        self.shared = Some(shared);
        self
    }

    pub fn stats(&self) -> SolveStats {
        SolveStats {
            memo_hits: self.table.hits,
            memo_entries: self.table.len(),
            ..self.stats
        }
    }

    fn enter(&mut self, s: &GameState) -> Result<Board, SolveError> {
        s.ruleset.validate().map_err(GameError::from)?;
        s.position
            .validate(s.ruleset.palette)
            .map_err(GameError::from)?;
        let board = Board::from_state(s).ok_or(SolveError::TooLarge {
            order: s.forest().order(),
        })?;
        let same = self
            .context
            .as_ref()
            .is_some_and(|(f, r)| **f == *s.forest() && *r == s.ruleset);
        if !same {
            self.table.clear();
            self.bounds.clear();
            self.fingerprint = forest_fingerprint(s.forest());
            self.ruleset_hash = s.ruleset.stable_hash();
            self.context = Some((s.shared_forest().clone(), s.ruleset));
        }
        Ok(board)
    }

    /// Exact verdict under optimal play.
    pub fn solve(&mut self, s: &GameState) -> Result<Verdict, SolveError> {
        let mut board = self.enter(s)?;
        let rules = Rules::of(&s.ruleset, board.n);
        if board.any_dead() {
            return Ok(Verdict::BobWin);
        }
        let alice = self.search(&mut board, rules, s.to_move, 0)?;
        Ok(Verdict::for_alice(alice))
    }

    /// A move for the player to move that keeps the game won for them, if
    /// one exists.
    pub fn winning_move(&mut self, s: &GameState) -> Result<Option<Move>, SolveError> {
        if s.terminal().is_some() {
            return Ok(None);
        }
        let want = match s.to_move {
            Player::Alice => Verdict::AliceWin,
            Player::Bob => Verdict::BobWin,
        };
        for m in s.legal_moves() {
            let next = s.apply_move(m)?;
            if self.solve(&next)? == want {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    /// Sound one-sided certificate: `true` means Bob wins using at most
    /// `budget` of his own moves (passes included) against every Alice reply.
    /// `false` is inconclusive.
    pub fn bob_wins_within(&mut self, s: &GameState, budget: u32) -> Result<bool, SolveError> {
        let mut board = self.enter(s)?;
        let rules = Rules::of(&s.ruleset, board.n);
        if board.any_dead() {
            return Ok(true);
        }
        self.certify(&mut board, rules, s.to_move, budget, 0)
    }

    /// Writes the memoized verdicts of the current game in cache format.
    pub fn export_cache(&self) -> String {
        let (fp, rh) = (self.fingerprint, self.ruleset_hash);
        write_cache(
            rh,
            self.table.iter().map(|(k, v)| {
                (
                    CanonicalKey {
                        forest: fp,
                        ruleset: rh,
                        state: k.clone(),
                    },
                    v,
                )
            }),
        )
    }

    fn lookup(&mut self, key: &StateKey) -> Option<bool> {
        if let Some(v) = self.table.get(key) {
            return Some(v);
        }
        let shared = self.shared.as_ref()?;
        let ck = CanonicalKey {
            forest: self.fingerprint,
            ruleset: self.ruleset_hash,
            state: key.clone(),
        };
        shared.get(&ck)
    }

    fn store(&mut self, key: StateKey, alice: bool) -> Result<(), SolveError> {
        if let Some(shared) = &self.shared {
            shared.publish(
                CanonicalKey {
                    forest: self.fingerprint,
                    ruleset: self.ruleset_hash,
                    state: key.clone(),
                },
                alice,
            );
        }
        if self.table.insert(key, alice) {
            Ok(())
        } else {
            Err(SolveError::CapacityExhausted {
                entries: self.table.len(),
            })
        }
    }

    /// Whether Alice wins from `board` with `mover` to move. No relevant
    /// vertex is dead on entry.
    fn search(
        &mut self,
        b: &mut Board,
        rules: Rules,
        mover: Player,
        depth: usize,
    ) -> Result<bool, SolveError> {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        assert!(depth <= rules.max_depth, "play exceeded the length bound");
        if b.open_relevant() == 0 || b.all_safe() {
            return Ok(true);
        }
        if mover == Player::Bob && b.killing_move().is_some() {
            return Ok(false);
        }
        let key = b.state_key(mover);
        if let Some(v) = self.lookup(&key) {
            return Ok(v);
        }
        let result = match mover {
            Player::Alice => self.alice_node(b, rules, depth)?,
            Player::Bob => self.bob_node(b, rules, depth)?,
        };
        self.store(key, result)?;
        Ok(result)
    }

    fn alice_node(
        &mut self,
        b: &mut Board,
        rules: Rules,
        depth: usize,
    ) -> Result<bool, SolveError> {
        let (region, threatened) = alice_region(b);
        for m in alice_moves(b, rules, region, threatened) {
            let alice = match m {
                Step::Color(v, c) => {
                    if b.color(v, c) {
                        b.uncolor(v);
                        continue;
                    }
                    let r = self.search(b, rules, Player::Bob, depth + 1);
                    b.uncolor(v);
                    r?
                }
                Step::Ext(v, c) => {
                    if b.add_ext(v, c) {
                        b.remove_ext(v, c);
                        continue;
                    }
                    let r = self.search(b, rules, Player::Bob, depth + 1);
                    b.remove_ext(v, c);
                    r?
                }
                Step::Pass => self.search(b, rules, Player::Bob, depth + 1)?,
            };
            if alice {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn bob_node(&mut self, b: &mut Board, rules: Rules, depth: usize) -> Result<bool, SolveError> {
        for m in bob_moves(b, rules) {
            let alice = match m {
                Step::Color(v, c) => {
                    b.color(v, c);
                    let r = self.search(b, rules, Player::Alice, depth + 1);
                    b.uncolor(v);
                    r?
                }
                Step::Pass => self.search(b, rules, Player::Alice, depth + 1)?,
                Step::Ext(..) => unreachable!(),
            };
            if !alice {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn certify(
        &mut self,
        b: &mut Board,
        rules: Rules,
        mover: Player,
        budget: u32,
        depth: usize,
    ) -> Result<bool, SolveError> {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        assert!(depth <= rules.max_depth, "play exceeded the length bound");
        if b.open_relevant() == 0 || b.all_safe() {
            return Ok(false);
        }
        if mover == Player::Bob {
            if budget == 0 {
                return Ok(false);
            }
            if b.killing_move().is_some() {
                return Ok(true);
            }
            if budget == 1 {
                return Ok(false);
            }
        }
        let key = b.state_key(mover);
        if let Some(bd) = self.bounds.get(&key) {
            if budget >= bd.true_from {
                return Ok(true);
            }
            if budget as i64 <= bd.false_upto {
                return Ok(false);
            }
        }
        let result = match mover {
            Player::Bob => {
                let mut won = false;
                for m in bob_moves(b, rules) {
                    let r = match m {
                        Step::Color(v, c) => {
                            b.color(v, c);
                            let r = self.certify(b, rules, Player::Alice, budget - 1, depth + 1);
                            b.uncolor(v);
                            r?
                        }
                        Step::Pass => {
                            self.certify(b, rules, Player::Alice, budget - 1, depth + 1)?
                        }
                        Step::Ext(..) => unreachable!(),
                    };
                    if r {
                        won = true;
                        break;
                    }
                }
                won
            }
            Player::Alice => {
                let (region, threatened) = if budget >= 1 {
                    alice_region(b)
                } else {
                    (Bits::MAX, false)
                };
                let mut all = true;
                for m in alice_moves(b, rules, region, threatened) {
                    let r = match m {
                        Step::Color(v, c) => {
                            if b.color(v, c) {
                                b.uncolor(v);
                                continue;
                            }
                            let r = self.certify(b, rules, Player::Bob, budget, depth + 1);
                            b.uncolor(v);
                            r?
                        }
                        Step::Ext(v, c) => {
                            if b.add_ext(v, c) {
                                b.remove_ext(v, c);
                                continue;
                            }
                            let r = self.certify(b, rules, Player::Bob, budget, depth + 1);
                            b.remove_ext(v, c);
                            r?
                        }
                        Step::Pass => self.certify(b, rules, Player::Bob, budget, depth + 1)?,
                    };
                    if !r {
                        all = false;
                        break;
                    }
                }
                all
            }
        };
        let bd = self.bounds.entry(key).or_insert(Bounds {
            true_from: u32::MAX,
            false_upto: -1,
        });
        if result {
            bd.true_from = bd.true_from.min(budget);
        } else {
            bd.false_upto = bd.false_upto.max(budget as i64);
        }
        Ok(result)
    }
}

#[derive(Clone, Copy)]
enum Step {
    Color(usize, u8),
    Ext(usize, u8),
    Pass,
}

/// Vertices where an Alice move can still matter. When Bob already has a
/// killing reply, only moves within distance 2 of every threatened vertex
/// can stop all of them.
fn alice_region(b: &Board) -> (Bits, bool) {
    let threats = b.threats();
    if threats == 0 {
        return (Bits::MAX, false);
    }
    (
        bits_iter(threats).fold(Bits::MAX, |acc, w| acc & b.ball2[w]),
        true,
    )
}

fn alice_moves(b: &Board, rules: Rules, region: Bits, threatened: bool) -> Vec<Step> {
    let used = b.used_colors();
    let mut verts: Vec<usize> = bits_iter(b.uncolored & region)
        .filter(|&v| b.may_color(Player::Alice, v) && b.avail(v) != 0)
        .collect();
    verts.sort_by_key(|&v| (b.avail(v).count_ones(), std::cmp::Reverse(b.udeg[v]), v));
    let mut out = Vec::with_capacity(verts.len() * b.t + 1);
    for &v in &verts {
        let mut cs = b.candidate_colors(v, used);
        while cs != 0 {
            let c = cs.trailing_zeros() as u8;
            cs &= cs - 1;
            out.push(Step::Color(v, c));
        }
    }
    if rules.alice_pass && !threatened {
        out.push(Step::Pass);
    }
    if rules.alice_leaf {
        for v in bits_iter(b.uncolored & region) {
            let mut cs = b.candidate_colors(v, used);
            while cs != 0 {
                let c = cs.trailing_zeros() as u8;
                cs &= cs - 1;
                out.push(Step::Ext(v, c));
            }
        }
    }
    out
}

fn bob_moves(b: &Board, rules: Rules) -> Vec<Step> {
    let used = b.used_colors();
    let mut scored: Vec<(i32, Step)> = Vec::new();
    for v in bits_iter(b.uncolored) {
        let mut cs = b.candidate_colors(v, used);
        while cs != 0 {
            let c = cs.trailing_zeros() as u8;
            cs &= cs - 1;
            let mut score = 0i32;
            for &w in &b.adj[v] {
                let w = w as usize;
                if b.is_uncolored(w) && b.relevant >> w & 1 == 1 && b.forb[w] >> c & 1 == 0 {
                    let left = b.avail(w).count_ones() as i32 - 1;
                    score += 16 - 4 * left + b.udeg[w] as i32;
                }
            }
            scored.push((score, Step::Color(v, c)));
        }
    }
    scored.sort_by_key(|&(s, _)| std::cmp::Reverse(s));
    let mut out: Vec<Step> = scored.into_iter().map(|(_, m)| m).collect();
    if rules.bob_pass {
        out.push(Step::Pass);
    }
    out
}

/// [`Solver::solve`] with a fresh default solver.
pub fn solve(s: &GameState) -> Result<Verdict, SolveError> {
    Solver::default().solve(s)
}

/// [`Solver::bob_wins_within`] with a fresh default solver.
pub fn bob_wins_within(s: &GameState, budget: u32) -> Result<bool, SolveError> {
    Solver::default().bob_wins_within(s, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameChromatic {
    pub value: usize,
    /// The value 4 was inferred from Alice losing with 3 colors, since no
    /// forest needs more than 4.
    pub theorem_capped: bool,
}

/// Least `t` for which Alice wins the standard game on `f`.
pub fn game_chromatic_number(f: &Forest) -> Result<GameChromatic, SolveError> {
    game_chromatic_number_with(f, &mut Solver::default())
}

pub(crate) fn game_chromatic_number_with(
    f: &Forest,
    solver: &mut Solver,
) -> Result<GameChromatic, SolveError> {
    let f = Arc::new(f.clone());
    for t in 0..=3 {
        let s = GameState::new(
            crate::position::Position::from_shared(f.clone()),
            Ruleset::standard(t),
        )?;
        if solver.solve(&s)? == Verdict::AliceWin {
            return Ok(GameChromatic {
                value: t,
                theorem_capped: false,
            });
        }
    }
    Ok(GameChromatic {
        value: 4,
        theorem_capped: true,
    })
}

impl Solver {
    pub fn game_chromatic_number(&mut self, f: &Forest) -> Result<GameChromatic, SolveError> {
        game_chromatic_number_with(f, self)
    }

    /// Loads cached verdicts for the game of `s` into the shared table,
    /// creating one if needed. Fails if the cache belongs to other rules.
    pub fn import_cache(&mut self, s: &GameState, text: &str) -> Result<usize, CacheError> {
        let entries = read_cache(text, s.ruleset.stable_hash())?;
        let shared = self
            .shared
            .get_or_insert_with(|| Arc::new(SharedTable::new()))
            .clone();
        let n = entries.len();
        for (k, v) in entries {
            shared.publish(k, v);
        }
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::{Color, Position};

    fn path(n: usize) -> Forest {
        Forest::new(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
    }

    fn start(f: Forest, r: Ruleset) -> GameState {
        GameState::start(f, r).unwrap()
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve(&start(path(2), Ruleset::standard(1))),
            Ok(Verdict::BobWin)
        );
        assert_eq!(
            solve(&start(path(5), Ruleset::standard(2))),
            Ok(Verdict::BobWin)
        );
        let p4k1 = path(4).disjoint_union(&Forest::empty(1));
        assert_eq!(
            solve(&start(p4k1, Ruleset::standard(2))),
            Ok(Verdict::AliceWin)
        );
    }

    #[test]
    fn chromatic_number_examples() {
        assert_eq!(game_chromatic_number(&Forest::empty(0)).unwrap().value, 0);
        let star = Forest::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(game_chromatic_number(&star).unwrap().value, 2);
        assert_eq!(game_chromatic_number(&path(4)).unwrap().value, 3);
    }

    #[test]
    fn certification_examples() {
        let p = Position::new(path(3)).with_color(0, Color(0)).unwrap();
        let s = GameState::new(p, Ruleset::standard(2))
            .unwrap()
            .with_to_move(Player::Bob);
        assert_eq!(bob_wins_within(&s, 1), Ok(true));
        assert_eq!(bob_wins_within(&s, 0), Ok(false));
        let done = Position::new(path(2))
            .with_color(0, Color(0))
            .unwrap()
            .with_color(1, Color(1))
            .unwrap();
        let s = GameState::new(done, Ruleset::standard(2)).unwrap();
        assert_eq!(bob_wins_within(&s, 5), Ok(false));
    }

    #[test]
    fn capacity_exhaustion_is_reported() {
        let comb = Forest::new(
            10,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
            ],
        )
        .unwrap();
        let s = start(comb, Ruleset::standard(3));
        let v = solve(&s).unwrap();
        let mut solver = Solver::new(SolverConfig {
            memo_capacity: 1,
            lossy: false,
        });
        assert!(matches!(
            solver.solve(&s),
            Err(SolveError::CapacityExhausted { .. })
        ));
        let mut solver = Solver::new(SolverConfig {
            memo_capacity: 1,
            lossy: true,
        });
        assert_eq!(solver.solve(&s), Ok(v));
    }

    #[test]
    fn cache_export_import_round_trip() {
        let s = start(path(6), Ruleset::standard(2));
        let mut a = Solver::default();
        let v = a.solve(&s).unwrap();
        let text = a.export_cache();
        let mut b = Solver::default();
        assert!(b.import_cache(&s, &text).unwrap() > 0);
        assert_eq!(b.solve(&s), Ok(v));
        let other = start(path(6), Ruleset::standard(3));
        assert!(matches!(
            b.import_cache(&other, &text),
            Err(CacheError::RulesetMismatch { .. })
        ));
    }
}
