//! Mutable make/unmake board used by the searches.
//!
//! Only what the game can still observe is tracked: for every uncolored
//! vertex the set of colors it may no longer take. The colors of colored
//! vertices matter only through those sets.

use crate::position::{Color, MAX_PALETTE};

use super::{GameState, Player};

pub(crate) const NONE: u8 = u8::MAX;
/// Largest forest the searches accept.
pub(crate) const MAX_ORDER: usize = 128;

pub(crate) type Bits = u128;

pub(crate) fn bits_iter(mut b: Bits) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (b != 0).then(|| {
            let i = b.trailing_zeros() as usize;
            b &= b - 1;
            i
        })
    })
}

#[derive(Clone)]
pub(crate) struct Board {
    pub n: usize,
    pub t: usize,
    pub full: u8,
    pub adj: Vec<Vec<u8>>,
    /// Vertices within distance 2, including the vertex itself.
    pub ball2: Vec<Bits>,
    pub relevant: Bits,
    pub alice_ok: Bits,
    pub color: Vec<u8>,
    nb: Vec<[u8; MAX_PALETTE]>,
    pub ext: Vec<u8>,
    pub forb: Vec<u8>,
    pub udeg: Vec<u8>,
    pub uncolored: Bits,
}

impl Board {
    pub fn from_state(s: &GameState) -> Option<Board> {
        let f = s.forest();
        let n = f.order();
        if n > MAX_ORDER {
            return None;
        }
        let t = s.ruleset.palette;
        let adj: Vec<Vec<u8>> = f
            .vertices()
            .map(|v| f.neighbors(v).iter().map(|&w| w as u8).collect())
            .collect();
        let ball2 = f
            .vertices()
            .map(|v| {
                let mut b: Bits = 1 << v;
                for &w in f.neighbors(v) {
                    b |= 1 << w;
                    for &x in f.neighbors(w) {
                        b |= 1 << x;
                    }
                }
                b
            })
            .collect();
        let mut relevant: Bits = 0;
        let mut alice_ok: Bits = 0;
        for v in f.vertices() {
            if s.is_relevant(v) {
                relevant |= 1 << v;
            }
            if s.alice_may_color(v) {
                alice_ok |= 1 << v;
            }
        }
        let mut board = Board {
            n,
            t,
            full: ((1u16 << t) - 1) as u8,
            adj,
            ball2,
            relevant,
            alice_ok,
            color: vec![NONE; n],
            nb: vec![[0; MAX_PALETTE]; n],
            ext: vec![0; n],
            forb: vec![0; n],
            udeg: f.vertices().map(|v| f.degree(v) as u8).collect(),
            uncolored: if n == 0 {
                0
            } else {
                Bits::MAX >> (MAX_ORDER - n)
            },
        };
        for v in f.vertices() {
            for c in s.position.external(v).iter() {
                board.add_ext(v, c.0);
            }
        }
        for v in f.vertices() {
            if let Some(Color(c)) = s.position.color(v) {
                board.color(v, c);
            }
        }
        Some(board)
    }

    #[inline]
    pub fn avail(&self, v: usize) -> u8 {
        self.full & !self.forb[v]
    }

    #[inline]
    pub fn is_uncolored(&self, v: usize) -> bool {
        self.uncolored >> v & 1 == 1
    }

    #[inline]
    fn is_relevant(&self, v: usize) -> bool {
        self.relevant >> v & 1 == 1
    }

    /// Colors `v`; returns whether some relevant uncolored neighbor is left
    /// without a legal color.
    pub fn color(&mut self, v: usize, c: u8) -> bool {
        debug_assert!(self.color[v] == NONE);
        self.color[v] = c;
        self.uncolored &= !(1 << v);
        let mut killed = false;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i] as usize;
            self.udeg[w] -= 1;
            self.nb[w][c as usize] += 1;
            self.forb[w] |= 1 << c;
            if self.is_uncolored(w) && self.is_relevant(w) && self.forb[w] & self.full == self.full
            {
                killed = true;
            }
        }
        killed
    }

    pub fn uncolor(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = NONE;
        self.uncolored |= 1 << v;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i] as usize;
            self.udeg[w] += 1;
            self.nb[w][c as usize] -= 1;
            if self.nb[w][c as usize] == 0 && self.ext[w] >> c & 1 == 0 {
                self.forb[w] &= !(1 << c);
            }
        }
    }

    /// Attaches an external color at `v`; returns whether `v` is a relevant
    /// uncolored vertex left without a legal color.
    pub fn add_ext(&mut self, v: usize, c: u8) -> bool {
        self.ext[v] |= 1 << c;
        self.forb[v] |= 1 << c;
        self.is_uncolored(v) && self.is_relevant(v) && self.forb[v] & self.full == self.full
    }

    pub fn remove_ext(&mut self, v: usize, c: u8) {
        self.ext[v] &= !(1 << c);
        if self.nb[v][c as usize] == 0 {
            self.forb[v] &= !(1 << c);
        }
    }

    pub fn open_relevant(&self) -> Bits {
        self.uncolored & self.relevant
    }

    pub fn any_dead(&self) -> bool {
        bits_iter(self.open_relevant()).any(|v| self.avail(v) == 0)
    }

    /// No relevant uncolored vertex can ever run out of colors unless Alice
    /// attaches leaves herself.
    pub fn all_safe(&self) -> bool {
        bits_iter(self.open_relevant()).all(|v| {
            (self.forb[v] & self.full).count_ones() as usize + (self.udeg[v] as usize) < self.t
        })
    }

    /// Colors present in some uncolored vertex's forbidden set. Colors
    /// outside this set are interchangeable.
    pub fn used_colors(&self) -> u8 {
        bits_iter(self.uncolored).fold(0, |acc, v| acc | self.forb[v]) & self.full
    }

    /// Relevant vertices Bob can kill with one coloring.
    pub fn threats(&self) -> Bits {
        let mut out = 0;
        for w in bits_iter(self.open_relevant()) {
            let a = self.avail(w);
            if a.count_ones() != 1 {
                continue;
            }
            if self.adj[w]
                .iter()
                .any(|&u| self.is_uncolored(u as usize) && self.forb[u as usize] & a == 0)
            {
                out |= 1 << w;
            }
        }
        out
    }

    /// A coloring move that kills some relevant vertex, if Bob has one.
    pub fn killing_move(&self) -> Option<(usize, u8)> {
        for w in bits_iter(self.open_relevant()) {
            let a = self.avail(w);
            if a.count_ones() != 1 {
                continue;
            }
            for &u in &self.adj[w] {
                let u = u as usize;
                if self.is_uncolored(u) && self.forb[u] & a == 0 {
                    return Some((u, a.trailing_zeros() as u8));
                }
            }
        }
        None
    }

    /// Colors to try at `v` for the mover: legal ones, with all unused colors
    /// collapsed onto the lowest.
    pub fn candidate_colors(&self, v: usize, used: u8) -> u8 {
        let avail = self.avail(v);
        let fresh = avail & !used;
        (avail & used) | (fresh & fresh.wrapping_neg())
    }

    pub fn may_color(&self, p: Player, v: usize) -> bool {
        p == Player::Bob || self.alice_ok >> v & 1 == 1
    }
}
