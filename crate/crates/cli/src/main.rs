mod report;
mod verify;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use gamechrom::classifier::classify_with;
use gamechrom::enumeration::{forests_of_order, trees_of_order};
use gamechrom::format::{parse_many, write_forest};
use gamechrom::game::{SolveError, Solver, SolverConfig};
use gamechrom::{GameState, Player, Ruleset, Verdict};
use serde::Serialize;

use report::{emit, Format, Summary};
use verify::Suite;

/// Game chromatic number workbench for forests.
#[derive(Debug, Parser)]
#[command(name = "gamechrom", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads for independent instances.
    #[arg(long, global = true, env = "GAMECHROM_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Memoization budget per solver, in megabytes.
    #[arg(long, global = true, env = "GAMECHROM_MEMO_MB", default_value_t = 1024)]
    memo_mb: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Game chromatic number of every forest in a file.
    Chig { input: PathBuf },
    /// Winner of one position under the given rules.
    Solve {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "std")]
        rules: Rules,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "alice")]
        first: First,
        /// Certify a Bob win within this many Bob moves instead of solving.
        #[arg(long)]
        depth: Option<u32>,
        /// Verdict cache file, read before and written after the solve.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Print every tree (or forest) on n vertices up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        forests: bool,
        /// Write one file per graph into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Rules {
    Std,
    Mcg,
    Ecg,
    Rcg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum First {
    Alice,
    Bob,
}

enum Failure {
    Usage(anyhow::Error),
    Verification,
    Exhausted(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::CapacityExhausted { .. } | SolveError::TooLarge { .. } => {
            Failure::Exhausted(e.into())
        }
        SolveError::InvalidState(_) => Failure::Usage(e.into()),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

#[derive(Serialize)]
struct ChigRow {
    graph: usize,
    order: usize,
    value: usize,
    method: String,
    witness: String,
    seconds: f64,
}

fn chig(cli: &Cli, input: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let text = read(input)?;
    let graphs = parse_many(&text).map_err(|e| anyhow!("{}: {e}", input.display()))?;
    let mut solver = Solver::new(SolverConfig::with_memo_megabytes(cli.memo_mb));
    let mut rows = Vec::new();
    for (i, p) in graphs.iter().enumerate() {
        if p.colored_vertices().next().is_some() {
            return Err(anyhow!("{}: graph {i} is partially colored", input.display()).into());
        }
        let t0 = Instant::now();
        let c = classify_with(p.forest(), &mut solver).map_err(solve_failure)?;
        rows.push(ChigRow {
            graph: i,
            order: p.order(),
            value: c.value,
            method: c.method.to_string(),
            witness: c.rule.to_string(),
            seconds: t0.elapsed().as_secs_f64(),
        });
    }
    emit(out, cli.format, &rows, None, |r| {
        format!(
            "{} ({}: {}) [{:.3}s]",
            r.value, r.method, r.witness, r.seconds
        )
    })?;
    Ok(())
}

#[derive(Serialize)]
struct SolveRow {
    verdict: String,
    certified: Option<bool>,
    depth: Option<u32>,
    nodes: u64,
    memo_hits: u64,
    memo_entries: usize,
    max_depth: usize,
    seconds: f64,
}

struct SolveArgs<'a> {
    input: &'a Path,
    rules: Rules,
    t: usize,
    first: First,
    depth: Option<u32>,
    cache: Option<&'a Path>,
}

fn solve(cli: &Cli, args: SolveArgs<'_>, out: &mut dyn Write) -> Result<(), Failure> {
    let text = read(args.input)?;
    let graphs = parse_many(&text).map_err(|e| anyhow!("{}: {e}", args.input.display()))?;
    let [p] = graphs.as_slice() else {
        return Err(anyhow!(
            "{}: expected exactly one graph, found {}",
            args.input.display(),
            graphs.len()
        )
        .into());
    };
    let ruleset = match args.rules {
        Rules::Std => Ruleset::standard(args.t),
        Rules::Mcg => Ruleset::modified(args.t),
        Rules::Ecg => Ruleset::expanded(args.t),
        Rules::Rcg => Ruleset::reduced(args.t),
    };
    let mover = match args.first {
        First::Alice => Player::Alice,
        First::Bob => Player::Bob,
    };
    let state = GameState::new(p.clone(), ruleset)
        .map_err(|e| anyhow!("inconsistent flags: {e}"))?
        .with_to_move(mover);
    let mut solver = Solver::new(SolverConfig::with_memo_megabytes(cli.memo_mb));
    if let Some(path) = args.cache.filter(|p| p.exists()) {
        let text = read(path)?;
        solver
            .import_cache(&state, &text)
            .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    }
    let t0 = Instant::now();
    let (verdict, certified) = match args.depth {
        Some(d) => {
            let ok = solver.bob_wins_within(&state, d).map_err(solve_failure)?;
            (
                if ok {
                    Verdict::BobWin.to_string()
                } else {
                    "inconclusive".to_string()
                },
                Some(ok),
            )
        }
        None => (
            solver.solve(&state).map_err(solve_failure)?.to_string(),
            None,
        ),
    };
    let seconds = t0.elapsed().as_secs_f64();
    if let (Some(path), None) = (args.cache, args.depth) {
        std::fs::write(path, solver.export_cache())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let st = solver.stats();
    let row = SolveRow {
        verdict,
        certified,
        depth: args.depth,
        nodes: st.nodes,
        memo_hits: st.memo_hits,
        memo_entries: st.memo_entries,
        max_depth: st.max_depth,
        seconds,
    };
    emit(out, cli.format, std::slice::from_ref(&row), None, |r| {
        let head = match (r.certified, r.depth) {
            (Some(true), Some(d)) => format!("certified {} within {d} Bob moves", r.verdict),
            (Some(false), Some(d)) => format!("inconclusive within {d} Bob moves"),
            _ => r.verdict.clone(),
        };
        format!(
            "{head}\nnodes: {}\nmemo hits: {}\nmemo entries: {}\nmax depth: {}\ntime: {:.3}s",
            r.nodes, r.memo_hits, r.memo_entries, r.max_depth, r.seconds
        )
    })?;
    Ok(())
}

fn verify(
    cli: &Cli,
    suite: Suite,
    max_n: Option<usize>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let max_n = max_n.unwrap_or(suite.default_max_n());
    let config = SolverConfig::with_memo_megabytes(cli.memo_mb);
    let outcome = verify::run(suite, max_n, cli.jobs, config)?;
    let summary = Summary {
        instances: outcome.records.len(),
        failed: outcome
            .records
            .iter()
            .filter(|r| r.status == "fail")
            .count(),
        errors: outcome
            .records
            .iter()
            .filter(|r| r.status == "error")
            .count(),
    };
    emit(out, cli.format, &outcome.records, Some(&summary), |r| {
        r.text()
    })?;
    if outcome.exhausted {
        return Err(Failure::Exhausted(anyhow!(
            "solver memory exhausted; raise --memo-mb"
        )));
    }
    if outcome.records.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn enumerate(
    n: usize,
    forests: bool,
    dir: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let graphs = if forests {
        forests_of_order(n)
    } else {
        trees_of_order(n)
    };
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let kind = if forests { "forest" } else { "tree" };
            for (i, g) in graphs.iter().enumerate() {
                let path = dir.join(format!("{kind}-n{n}-{i:06}.forest"));
                std::fs::write(&path, write_forest(g))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None => {
            for (i, g) in graphs.iter().enumerate() {
                if i > 0 {
                    writeln!(out, "---").map_err(anyhow::Error::from)?;
                }
                out.write_all(write_forest(g).as_bytes())
                    .map_err(anyhow::Error::from)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Chig { input } => chig(&cli, input, &mut out),
        Command::Solve {
            input,
            rules,
            t,
            first,
            depth,
            cache,
        } => {
            let args = SolveArgs {
                input,
                rules: *rules,
                t: *t,
                first: *first,
                depth: *depth,
                cache: cache.as_deref(),
            };
            solve(&cli, args, &mut out)
        }
        Command::Verify { suite, max_n } => verify(&cli, *suite, *max_n, &mut out),
        Command::Enumerate {
            n,
            forests,
            out: dir,
        } => enumerate(*n, *forests, dir.as_deref(), &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) if report::is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Exhausted(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
