//! Plain-text graph format.
//!
//! ```text
//! # comment
//! n m
//! u v        (m edge lines, 0-based)
//! c v k      (optional: vertex v colored k)
//! x v k      (optional: external color k at v)
//! ```
//!
//! Several graphs may be concatenated with `---` separator lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::forest::{Forest, ForestError};
use crate::position::{Color, Position, PositionError, MAX_PALETTE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Forest { line: usize, source: ForestError },
    #[error("line {line}: {source}")]
    Position { line: usize, source: PositionError },
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, fields: &[&str]) -> Result<Vec<usize>, ParseError> {
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| syntax(line, format!("expected an integer, got `{f}`")))
        })
        .collect()
}

/// Parses one graph. Line numbers in errors are 1-based and count from the
/// start of `text`.
pub fn parse_position(text: &str) -> Result<Position, ParseError> {
    parse_block(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

/// Parses a forest, rejecting any coloring lines.
pub fn parse_forest(text: &str) -> Result<Forest, ParseError> {
    let p = parse_position(text)?;
    if p.colored_vertices().next().is_some()
        || p.forest().vertices().any(|v| !p.external(v).is_empty())
    {
        return Err(syntax(0, "expected an uncolored forest"));
    }
    Ok(p.forest().clone())
}

/// Parses `---`-separated graphs.
pub fn parse_many(text: &str) -> Result<Vec<Position>, ParseError> {
    let mut out = Vec::new();
    let mut block = Vec::new();
    for (i, l) in text.lines().enumerate() {
        if l.trim() == "---" {
            out.push(parse_block(block.drain(..))?);
        } else {
            block.push((i + 1, l));
        }
    }
    if block.iter().any(|(_, l)| is_content(l)) || out.is_empty() {
        out.push(parse_block(block.into_iter())?);
    }
    Ok(out)
}

fn is_content(l: &str) -> bool {
    let t = l.trim();
    !t.is_empty() && !t.starts_with('#')
}

fn parse_block<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Position, ParseError> {
    let mut lines = lines.filter(|(_, l)| is_content(l));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(0, "missing `n m` header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(syntax(hline, "header must be `n m`"));
    }
    let nm = numbers(hline, &head)?;
    let (n, m) = (nm[0], nm[1]);
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for _ in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| syntax(last_line + 1, format!("expected {m} edge lines")))?;
        last_line = ln;
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 2 {
            return Err(syntax(ln, "edge line must be `u v`"));
        }
        let uv = numbers(ln, &f)?;
        edges.push((uv[0], uv[1]));
        // Validate incrementally so errors carry the offending line.
        Forest::new(n, &edges).map_err(|source| ParseError::Forest { line: ln, source })?;
    }
    let forest = Forest::new(n, &edges).map_err(|source| ParseError::Forest {
        line: last_line,
        source,
    })?;
    let mut position = Position::new(forest);
    for (ln, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 3 || !(f[0] == "c" || f[0] == "x") {
            return Err(syntax(ln, "expected `c v k` or `x v k`"));
        }
        let vk = numbers(ln, &f[1..])?;
        let (v, k) = (vk[0], vk[1]);
        if k >= MAX_PALETTE {
            return Err(syntax(
                ln,
                format!("color {k} exceeds the supported palette"),
            ));
        }
        let c = Color(k as u8);
        let r = if f[0] == "c" {
            position.set_color(v, c)
        } else {
            position.add_external(v, c)
        };
        r.map_err(|source| ParseError::Position { line: ln, source })?;
    }
    Ok(position)
}

pub fn write_forest(f: &Forest) -> String {
    let mut s = format!("{} {}\n", f.order(), f.edges().len());
    for (u, v) in f.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn write_position(p: &Position) -> String {
    let mut s = write_forest(p.forest());
    for v in p.forest().vertices() {
        if let Some(c) = p.color(v) {
            writeln!(s, "c {v} {c}").unwrap();
        }
    }
    for v in p.forest().vertices() {
        for c in p.external(v).iter() {
            writeln!(s, "x {v} {c}").unwrap();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_colors_and_externals() {
        let text = "# P3\n3 2\n0 1\n\n1 2\nc 1 0\nx 0 2\n";
        let p = parse_position(text).unwrap();
        assert_eq!(p.order(), 3);
        assert_eq!(p.color(1), Some(Color(0)));
        assert!(p.external(0).contains(Color(2)));
        assert_eq!(parse_position(&write_position(&p)).unwrap(), p);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_position("3 3\n0 1\n1 2\n2 0\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Forest {
                line: 4,
                source: ForestError::Cycle(0, 2)
            }
        );
        let err = parse_position("2 1\n0 x\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
        let err = parse_position("2 1\n0 1\nc 0 1\nc 1 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Position { line: 4, .. }));
    }

    #[test]
    fn separated_blocks() {
        let text = "1 0\n---\n2 1\n0 1\n---\n0 0\n";
        let all = parse_many(text).unwrap();
        assert_eq!(
            all.iter().map(Position::order).collect::<Vec<_>>(),
            vec![1, 2, 0]
        );
    }
}
