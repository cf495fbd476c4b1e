//! Verdict tables: the per-solver transposition table, a table shared
//! between solver instances, and the on-disk cache format.

use std::fmt::Write as _;

use dashmap::DashMap;
use rustc_hash::FxHashMap;
use thiserror::Error;

use super::key::{CanonicalKey, StateKey};
use super::Verdict;

/// Capacity-capped map from state keys to verdicts (`true` = Alice wins).
///
/// At capacity the table either refuses the insert (the solve then fails) or,
/// in lossy mode, silently drops it.
#[derive(Debug, Clone)]
pub struct TranspositionTable {
    map: FxHashMap<StateKey, bool>,
    capacity: usize,
    lossy: bool,
    pub hits: u64,
    pub misses: u64,
    pub dropped: u64,
}

/// Rough per-entry footprint used to turn a memory budget into a capacity.
pub(crate) const ENTRY_BYTES: usize = 64;

impl TranspositionTable {
    pub fn new(capacity: usize, lossy: bool) -> Self {
        TranspositionTable {
            map: FxHashMap::default(),
            capacity,
            lossy,
            hits: 0,
            misses: 0,
            dropped: 0,
        }
    }

    pub fn with_megabytes(mb: usize, lossy: bool) -> Self {
        Self::new(mb.saturating_mul(1 << 20) / ENTRY_BYTES, lossy)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn get(&mut self, key: &StateKey) -> Option<bool> {
        let r = self.map.get(key).copied();
        if r.is_some() {
            self.hits += 1;
        } else {
            self.misses += 1;
        }
        r
    }

    /// Returns `false` when the table is full and not lossy.
    pub fn insert(&mut self, key: StateKey, alice_wins: bool) -> bool {
        if self.map.len() >= self.capacity && !self.map.contains_key(&key) {
            if self.lossy {
                self.dropped += 1;
                return true;
            }
            return false;
        }
        self.map.insert(key, alice_wins);
        true
    }

    pub fn clear(&mut self) {
        self.map.clear();
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateKey, bool)> {
        self.map.iter().map(|(k, v)| (k, *v))
    }
}

/// A table several solver instances publish into.
///
/// Publications are idempotent: the same key may be computed and published
/// by several workers, and all published values for a key must agree. A
/// reader that misses an in-flight entry just recomputes it.
#[derive(Debug, Default)]
pub struct SharedTable {
    map: DashMap<CanonicalKey, bool>,
}

impl SharedTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<bool> {
        self.map.get(key).map(|r| *r)
    }

    /// Panics if a different verdict was already published for `key`, since
    /// that can only mean a search bug.
    pub fn publish(&self, key: CanonicalKey, alice_wins: bool) {
        let prev = *self.map.entry(key).or_insert(alice_wins);
        assert_eq!(
            prev, alice_wins,
            "conflicting verdicts published for one state"
        );
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CacheError {
    #[error("line {0}: malformed cache line")]
    Malformed(usize),
    #[error("cache written for ruleset {found:016x}, expected {expected:016x}")]
    RulesetMismatch { expected: u64, found: u64 },
}

pub(crate) const CACHE_MAGIC: &str = "gamechrom-cache";

pub(crate) fn write_cache<'a>(
    ruleset: u64,
    entries: impl Iterator<Item = (CanonicalKey, bool)> + 'a,
) -> String {
    let mut lines: Vec<String> = entries
        .map(|(k, v)| format!("{} {}", k.to_hex(), Verdict::for_alice(v)))
        .collect();
    lines.sort_unstable();
    let mut out = format!("{CACHE_MAGIC} 1 {ruleset:016x}\n");
    for l in lines {
        writeln!(out, "{l}").unwrap();
    }
    out
}

pub(crate) fn read_cache(
    text: &str,
    expected_ruleset: u64,
) -> Result<Vec<(CanonicalKey, bool)>, CacheError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(CacheError::Malformed(1))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 || h[0] != CACHE_MAGIC || h[1] != "1" {
        return Err(CacheError::Malformed(1));
    }
    let found = u64::from_str_radix(h[2], 16).map_err(|_| CacheError::Malformed(1))?;
    if found != expected_ruleset {
        return Err(CacheError::RulesetMismatch {
            expected: expected_ruleset,
            found,
        });
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut f = line.split_whitespace();
        let (Some(k), Some(v), None) = (f.next(), f.next(), f.next()) else {
            return Err(CacheError::Malformed(i + 1));
        };
        let key = CanonicalKey::from_hex(k).ok_or(CacheError::Malformed(i + 1))?;
        let alice = match v {
            "AliceWin" => true,
            "BobWin" => false,
            _ => return Err(CacheError::Malformed(i + 1)),
        };
        if key.ruleset != expected_ruleset {
            return Err(CacheError::RulesetMismatch {
                expected: expected_ruleset,
                found: key.ruleset,
            });
        }
        out.push((key, alice));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(w: u64) -> StateKey {
        StateKey::from_words(&[w])
    }

    #[test]
    fn capped_table_fails_loudly_or_drops() {
        let mut t = TranspositionTable::new(1, false);
        assert!(t.insert(key(1), true));
        assert!(t.insert(key(1), true));
        assert!(!t.insert(key(2), false));
        let mut t = TranspositionTable::new(1, true);
        assert!(t.insert(key(1), true));
        assert!(t.insert(key(2), false));
        assert_eq!((t.len(), t.dropped), (1, 1));
        assert_eq!(t.get(&key(2)), None);
    }

    #[test]
    fn cache_round_trip_and_mismatch() {
        let k = CanonicalKey {
            forest: 7,
            ruleset: 9,
            state: key(42),
        };
        let text = write_cache(9, std::iter::once((k.clone(), false)));
        assert!(text.starts_with("gamechrom-cache 1 0000000000000009\n"));
        assert_eq!(read_cache(&text, 9), Ok(vec![(k, false)]));
        assert_eq!(
            read_cache(&text, 8),
            Err(CacheError::RulesetMismatch {
                expected: 8,
                found: 9
            })
        );
        assert_eq!(
            read_cache("gamechrom-cache 1 9\nzz AliceWin\n", 9),
            Err(CacheError::Malformed(2))
        );
    }

    #[test]
    fn shared_table_accepts_duplicate_publications() {
        let t = SharedTable::new();
        let k = CanonicalKey {
            forest: 1,
            ruleset: 2,
            state: key(3),
        };
        t.publish(k.clone(), true);
        t.publish(k.clone(), true);
        assert_eq!(t.get(&k), Some(true));
        assert_eq!(t.len(), 1);
    }
}
