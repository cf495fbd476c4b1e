//! Exact solver, strategy engine and classification workbench for the vertex
//! coloring game on forests.

pub mod classifier;
pub mod constructions;
pub mod enumeration;
pub mod forest;
pub mod format;
pub mod game;
pub mod position;
pub mod strategies;
pub mod structure;

pub use forest::{Forest, ForestError, Vertex};
pub use game::{GameState, Move, Player, Ruleset, Verdict};
pub use position::{Color, ColorSet, Position};
