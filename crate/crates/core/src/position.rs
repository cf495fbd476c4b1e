//! Partial colorings of a forest.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::forest::{Forest, Vertex};

/// Largest palette the engine supports. Color sets are one byte.
pub const MAX_PALETTE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color(pub u8);

impl Color {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of colors from a palette of at most [`MAX_PALETTE`] colors.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(pub u8);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);

    /// All colors `0..t`.
    pub fn full(t: usize) -> Self {
        debug_assert!(t <= MAX_PALETTE);
        ColorSet(((1u16 << t) - 1) as u8)
    }

    pub fn contains(self, c: Color) -> bool {
        self.0 >> c.0 & 1 == 1
    }

    pub fn with(self, c: Color) -> Self {
        ColorSet(self.0 | 1 << c.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ColorSet(self.0 | other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        ColorSet(self.0 & !other.0)
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        (0..MAX_PALETTE as u8)
            .filter(move |i| self.0 >> i & 1 == 1)
            .map(Color)
    }

    pub fn first(self) -> Option<Color> {
        (self.0 != 0).then(|| Color(self.0.trailing_zeros() as u8))
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|c| c.0)).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositionError {
    #[error("vertex {0} out of range")]
    OutOfRange(Vertex),
    #[error("vertex {0} is already colored")]
    AlreadyColored(Vertex),
    #[error("color {color} is not legal for vertex {vertex}")]
    IllegalColor { vertex: Vertex, color: Color },
    #[error("color {color} outside a palette of {palette} colors")]
    OutsidePalette { color: Color, palette: usize },
}

/// A forest with a partial coloring and, per vertex, the set of colors of
/// externally attached colored leaves.
///
/// External colors model leaves added during the expanded game without
/// materializing them: two added leaves of the same color at the same vertex
/// constrain it exactly like one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Position {
    forest: Arc<Forest>,
    coloring: Vec<Option<Color>>,
    external: Vec<ColorSet>,
}

impl Position {
    pub fn new(forest: Forest) -> Self {
        Self::from_shared(Arc::new(forest))
    }

    pub fn from_shared(forest: Arc<Forest>) -> Self {
        let n = forest.order();
        Position {
            forest,
            coloring: vec![None; n],
            external: vec![ColorSet::EMPTY; n],
        }
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn shared_forest(&self) -> &Arc<Forest> {
        &self.forest
    }

    pub fn order(&self) -> usize {
        self.forest.order()
    }

    pub fn color(&self, v: Vertex) -> Option<Color> {
        self.coloring[v]
    }

    pub fn coloring(&self) -> &[Option<Color>] {
        &self.coloring
    }

    pub fn external(&self, v: Vertex) -> ColorSet {
        self.external[v]
    }

    pub fn is_colored(&self, v: Vertex) -> bool {
        self.coloring[v].is_some()
    }

    pub fn colored_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.forest.vertices().filter(|&v| self.is_colored(v))
    }

    pub fn uncolored_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.forest.vertices().filter(|&v| !self.is_colored(v))
    }

    pub fn uncolored_count(&self) -> usize {
        self.coloring.iter().filter(|c| c.is_none()).count()
    }

    /// Colors a vertex may not take: neighbor colors plus external colors.
    pub fn forbidden(&self, v: Vertex) -> ColorSet {
        self.forest
            .neighbors(v)
            .iter()
            .filter_map(|&w| self.coloring[w])
            .fold(self.external[v], ColorSet::with)
    }

    pub fn legal_colors(&self, v: Vertex, palette: usize) -> ColorSet {
        ColorSet::full(palette).minus(self.forbidden(v))
    }

    pub fn uncolored_degree(&self, v: Vertex) -> usize {
        self.forest
            .neighbors(v)
            .iter()
            .filter(|&&w| !self.is_colored(w))
            .count()
    }

    /// Colors `v` after checking legality (palette bounds are the caller's
    /// concern; see [`Position::validate`]).
    pub fn with_color(&self, v: Vertex, c: Color) -> Result<Position, PositionError> {
        let mut next = self.clone();
        next.set_color(v, c)?;
        Ok(next)
    }

    pub fn set_color(&mut self, v: Vertex, c: Color) -> Result<(), PositionError> {
        if v >= self.order() {
            return Err(PositionError::OutOfRange(v));
        }
        if self.coloring[v].is_some() {
            return Err(PositionError::AlreadyColored(v));
        }
        if self.forbidden(v).contains(c) {
            return Err(PositionError::IllegalColor {
                vertex: v,
                color: c,
            });
        }
        self.coloring[v] = Some(c);
        Ok(())
    }

    /// Adds an external color at `v`. Colored vertices may carry externals
    /// too, provided the color differs from theirs.
    pub fn add_external(&mut self, v: Vertex, c: Color) -> Result<(), PositionError> {
        if v >= self.order() {
            return Err(PositionError::OutOfRange(v));
        }
        if self.coloring[v] == Some(c) {
            return Err(PositionError::IllegalColor {
                vertex: v,
                color: c,
            });
        }
        self.external[v] = self.external[v].with(c);
        Ok(())
    }

    /// Checks the coloring is proper and every color lies in `0..palette`.
    pub fn validate(&self, palette: usize) -> Result<(), PositionError> {
        let full = ColorSet::full(palette.min(MAX_PALETTE));
        for v in self.forest.vertices() {
            for c in self.external[v].iter() {
                if !full.contains(c) {
                    return Err(PositionError::OutsidePalette { color: c, palette });
                }
            }
            if let Some(c) = self.coloring[v] {
                if !full.contains(c) {
                    return Err(PositionError::OutsidePalette { color: c, palette });
                }
                if self.forbidden(v).contains(c) {
                    return Err(PositionError::IllegalColor {
                        vertex: v,
                        color: c,
                    });
                }
            }
        }
        Ok(())
    }

    /// Applies a palette relabeling `perm[old] = new` to colors and externals.
    pub fn permute_colors(&self, perm: &[u8]) -> Position {
        let mut next = self.clone();
        for c in next.coloring.iter_mut().flatten() {
            *c = Color(perm[c.index()]);
        }
        for set in &mut next.external {
            *set = set
                .iter()
                .fold(ColorSet::EMPTY, |acc, c| acc.with(Color(perm[c.index()])));
        }
        next
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Position({:?}, colors=[", self.forest)?;
        for (v, c) in self.coloring.iter().enumerate() {
            if let Some(c) = c {
                write!(f, " {v}:{c}")?;
            }
        }
        write!(f, " ], externals=[")?;
        for (v, s) in self.external.iter().enumerate() {
            if !s.is_empty() {
                write!(f, " {v}:{s:?}")?;
            }
        }
        write!(f, " ])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legality_includes_externals() {
        let f = Forest::new(3, &[(0, 1), (1, 2)]).unwrap();
        let mut p = Position::new(f);
        p.set_color(0, Color(0)).unwrap();
        p.add_external(1, Color(1)).unwrap();
        assert_eq!(p.forbidden(1), ColorSet(0b11));
        assert_eq!(p.legal_colors(1, 3), ColorSet(0b100));
        assert!(p.with_color(1, Color(1)).is_err());
        assert!(p.with_color(2, Color(0)).is_ok());
        assert_eq!(
            p.with_color(0, Color(2)),
            Err(PositionError::AlreadyColored(0))
        );
    }

    #[test]
    fn validate_catches_palette_overflow() {
        let f = Forest::new(2, &[(0, 1)]).unwrap();
        let mut p = Position::new(f);
        p.set_color(0, Color(2)).unwrap();
        assert!(p.validate(3).is_ok());
        assert!(p.validate(2).is_err());
    }
}
