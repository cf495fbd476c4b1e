use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// Writes `rows` in the chosen format. `text` renders one row as a line.
pub fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    rows: &[T],
    summary: Option<&Summary>,
    text: impl Fn(&T) -> String,
) -> Result<()> {
    match format {
        Format::Text => {
            for r in rows {
                writeln!(out, "{}", text(r))?;
            }
            if let Some(s) = summary {
                writeln!(
                    out,
                    "summary: {} instances, {} failed, {} errors",
                    s.instances, s.failed, s.errors
                )?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(
                &mut *out,
                &Document {
                    results: rows,
                    summary,
                },
            )?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Document<'a, T> {
    results: &'a [T],
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<&'a Summary>,
}

/// Whether `e` came from writing into a closed pipe.
pub fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let kind = if let Some(io) = c.downcast_ref::<std::io::Error>() {
            Some(io.kind())
        } else if let Some(j) = c.downcast_ref::<serde_json::Error>() {
            j.io_error_kind()
        } else if let Some(w) = c.downcast_ref::<csv::Error>() {
            match w.kind() {
                csv::ErrorKind::Io(io) => Some(io.kind()),
                _ => None,
            }
        } else {
            None
        };
        kind == Some(std::io::ErrorKind::BrokenPipe)
    })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub instances: usize,
    pub failed: usize,
    pub errors: usize,
}

pub fn edge_list(edges: &[(usize, usize)]) -> String {
    edges
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}
