use clap::ValueEnum;
use gamechrom::classifier::{classify_no_deg3, is_chi_g_2};
use gamechrom::constructions::{gadget_suite, p4_plus, path};
use gamechrom::enumeration::{canonical_form, forests_of_order, trees_of_order};
use gamechrom::game::{SolveError, Solver, SolverConfig};
use gamechrom::strategies::{alice_small_trunk_3mcg, verify_policy, FnPolicy};
use gamechrom::{Color, Forest, GameState, Player, Position, Ruleset, Verdict};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::edge_list;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    ThmGcn2,
    ThmU13,
    LemmaSmallTrunk,
    ThmNodeg3,
    LemmaGadgetsS4,
    LemmaGadgetsS8,
    EnumerationCounts,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::ThmGcn2 => "thm-gcn2",
            Suite::ThmU13 => "thm-u13",
            Suite::LemmaSmallTrunk => "lemma-small-trunk",
            Suite::ThmNodeg3 => "thm-nodeg3",
            Suite::LemmaGadgetsS4 => "lemma-gadgets-s4",
            Suite::LemmaGadgetsS8 => "lemma-gadgets-s8",
            Suite::EnumerationCounts => "enumeration-counts",
        }
    }

    pub fn default_max_n(self) -> usize {
        match self {
            Suite::ThmGcn2 => 8,
            Suite::ThmU13 => 11,
            Suite::LemmaSmallTrunk => 7,
            Suite::ThmNodeg3 => 12,
            Suite::LemmaGadgetsS4 | Suite::LemmaGadgetsS8 => 0,
            Suite::EnumerationCounts => 10,
        }
    }
}

/// Free trees on n = 0..=19 vertices.
pub const TREE_COUNTS: [usize; 20] = [
    0, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320, 48629, 123867, 317955,
];
/// Forests on n = 0..=19 vertices.
pub const FOREST_COUNTS: [usize; 20] = [
    1, 1, 2, 3, 6, 10, 20, 37, 76, 153, 329, 710, 1601, 3658, 8599, 20514, 49905, 122963, 307199,
    775529,
];

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Record {
    pub suite: String,
    pub instance: usize,
    pub order: usize,
    pub graph: String,
    pub expected: String,
    pub actual: String,
    pub status: String,
}

impl Record {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn text(&self) -> String {
        format!(
            "{:<5} {} #{} n={} expected={} actual={} [{}]",
            self.status,
            self.suite,
            self.instance,
            self.order,
            self.expected,
            self.actual,
            self.graph
        )
    }
}

struct Check {
    expected: String,
    actual: String,
    pass: bool,
}

impl Check {
    fn eq(expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check {
            pass: expected == actual,
            expected,
            actual,
        }
    }
}

type Job = Box<dyn Fn(&mut Solver) -> Result<Check, SolveError> + Send + Sync>;

struct Instance {
    order: usize,
    graph: String,
    job: Job,
}

fn describe(p: &Position) -> String {
    let mut s = edge_list(p.forest().edges());
    for v in p.colored_vertices() {
        s.push_str(&format!(" c{v}={}", p.color(v).unwrap()));
    }
    s
}

fn instance(
    p: Position,
    job: impl Fn(&mut Solver, &Position) -> Result<Check, SolveError> + Send + Sync + 'static,
) -> Instance {
    Instance {
        order: p.order(),
        graph: describe(&p),
        job: Box::new(move |s| job(s, &p)),
    }
}

fn forest_instance(
    f: Forest,
    job: impl Fn(&mut Solver, &Forest) -> Result<Check, SolveError> + Send + Sync + 'static,
) -> Instance {
    instance(Position::new(f), move |s, p| job(s, p.forest()))
}

fn leaves(f: &Forest) -> Vec<usize> {
    f.vertices().filter(|&v| f.degree(v) == 1).collect()
}

fn instances(suite: Suite, max_n: usize) -> Vec<Instance> {
    match suite {
        Suite::ThmGcn2 => (0..=max_n)
            .flat_map(forests_of_order)
            .map(|f| {
                forest_instance(f, |solver, f| {
                    let value = solver.game_chromatic_number(f)?.value;
                    Ok(Check::eq(value == 2, is_chi_g_2(f).holds))
                })
            })
            .collect(),
        Suite::ThmU13 => (1..=max_n)
            .flat_map(trees_of_order)
            .map(|f| {
                forest_instance(f, |solver, f| {
                    let value = solver.game_chromatic_number(f)?.value;
                    Ok(Check {
                        expected: "at most 3".into(),
                        actual: value.to_string(),
                        pass: value <= 3,
                    })
                })
            })
            .collect(),
        Suite::LemmaSmallTrunk => (1..=max_n)
            .flat_map(trees_of_order)
            .flat_map(|f| {
                let mut starts = vec![Position::new(f.clone())];
                starts.extend(
                    leaves(&f)
                        .into_iter()
                        .map(|l| Position::new(f.clone()).with_color(l, Color(0)).unwrap()),
                );
                starts
            })
            .map(|p| {
                instance(p, |solver, p| {
                    let s = GameState::new(p.clone(), Ruleset::modified(3))?
                        .with_to_move(Player::Alice);
                    let verdict = solver.solve(&s)?;
                    let policy = match verify_policy(&FnPolicy::alice(alice_small_trunk_3mcg), &s) {
                        Ok(true) => "verified".to_string(),
                        Ok(false) => "refuted".to_string(),
                        Err(e) => format!("error: {e}"),
                    };
                    Ok(Check::eq(
                        "AliceWin, policy verified",
                        format!("{verdict}, policy {policy}"),
                    ))
                })
            })
            .collect(),
        Suite::ThmNodeg3 => (1..=max_n)
            .flat_map(trees_of_order)
            .filter(|f| f.vertices().all(|v| f.degree(v) != 3))
            .map(|f| {
                forest_instance(f, |solver, f| {
                    let expected = solver.game_chromatic_number(f)?.value;
                    let actual = match classify_no_deg3(f) {
                        Ok(c) => c.value.to_string(),
                        Err(e) => format!("error: {e}"),
                    };
                    Ok(Check::eq(expected, actual))
                })
            })
            .collect(),
        Suite::LemmaGadgetsS4 => [path(5), p4_plus()]
            .into_iter()
            .map(|f| {
                forest_instance(f, |solver, f| {
                    let v = solver.solve(&GameState::start(f.clone(), Ruleset::expanded(2))?)?;
                    Ok(Check::eq(Verdict::BobWin, v))
                })
            })
            .collect(),
        Suite::LemmaGadgetsS8 => match gadget_suite() {
            Ok(g) => {
                let certify = |p: Position, mover: Player| {
                    instance(p, move |solver, p| {
                        let s =
                            GameState::new(p.clone(), Ruleset::standard(3))?.with_to_move(mover);
                        let ok = solver.bob_wins_within(&s, 2)?;
                        Ok(Check::eq(
                            "certified",
                            if ok { "certified" } else { "inconclusive" },
                        ))
                    })
                };
                vec![
                    certify(g.t1, Player::Bob),
                    certify(g.surrounded_p4, Player::Alice),
                    certify(g.surrounded_p4_padded, Player::Alice),
                ]
            }
            Err(e) => {
                let message = format!("transcription invalid: {e}");
                vec![Instance {
                    order: 0,
                    graph: String::new(),
                    job: Box::new(move |_| Ok(Check::eq("valid transcription", &message))),
                }]
            }
        },
        Suite::EnumerationCounts => (0..=max_n.min(TREE_COUNTS.len() - 1))
            .map(|n| Instance {
                order: n,
                graph: String::new(),
                job: Box::new(move |_| {
                    let trees = trees_of_order(n);
                    let forests = forests_of_order(n);
                    let mut forms: Vec<_> = forests.iter().map(canonical_form).collect();
                    forms.dedup();
                    Ok(Check::eq(
                        format!(
                            "trees={} forests={} distinct",
                            TREE_COUNTS[n], FOREST_COUNTS[n]
                        ),
                        format!(
                            "trees={} forests={} {}",
                            trees.len(),
                            forests.len(),
                            if forms.len() == forests.len() {
                                "distinct"
                            } else {
                                "duplicated"
                            }
                        ),
                    ))
                }),
            })
            .collect(),
    }
}

pub struct Outcome {
    pub records: Vec<Record>,
    pub exhausted: bool,
}

/// Runs every instance of `suite` on `jobs` threads. Records come back in
/// instance order regardless of scheduling.
pub fn run(
    suite: Suite,
    max_n: usize,
    jobs: usize,
    config: SolverConfig,
) -> anyhow::Result<Outcome> {
    let list = instances(suite, max_n);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()?;
    let name = suite.name();
    let results: Vec<(Record, bool)> = pool.install(|| {
        list.par_iter()
            .enumerate()
            .map_init(
                || Solver::new(config),
                |solver, (i, inst)| {
                    let (expected, actual, status, exhausted) = match (inst.job)(solver) {
                        Ok(c) => (
                            c.expected,
                            c.actual,
                            if c.pass { "pass" } else { "fail" },
                            false,
                        ),
                        Err(e) => {
                            let exhausted = matches!(e, SolveError::CapacityExhausted { .. });
                            (String::new(), e.to_string(), "error", exhausted)
                        }
                    };
                    let record = Record {
                        suite: name.to_string(),
                        instance: i,
                        order: inst.order,
                        graph: inst.graph.clone(),
                        expected,
                        actual,
                        status: status.to_string(),
                    };
                    (record, exhausted)
                },
            )
            .collect()
    });
    let exhausted = results.iter().any(|(_, x)| *x);
    Ok(Outcome {
        records: results.into_iter().map(|(r, _)| r).collect(),
        exhausted,
    })
}
