//! Named graphs and partially colored gadgets.
//!
//! Fixed shapes are checked-in data files (see `constructions/` at the crate
//! root) in the plain-text graph format; each builder parses its file and
//! checks the structural facts the shape is known to satisfy.

use thiserror::Error;

use crate::forest::{Forest, Vertex};
use crate::format::{parse_forest, parse_position};
use crate::game::{GameState, Player, Ruleset, SolveError};
use crate::position::{Color, Position};

const P4_PLUS: &str = include_str!("../../constructions/p4plus.forest");
const T_PRIME: &str = include_str!("../../constructions/tprime.forest");
const TWELVE: &str = include_str!("../../constructions/twelve.forest");
const FIG3: &str = include_str!("../../constructions/fig3.position");
const T1: &str = include_str!("../../constructions/t1.position");
const SURROUNDED_P4: &str = include_str!("../../constructions/surrounded_p4.position");
const SURROUNDED_P4_PADDED: &str =
    include_str!("../../constructions/surrounded_p4_padded.position");
const H: &str = include_str!("../../constructions/h.forest");
const T3: &str = include_str!("../../constructions/t3.position");
const T4: &str = include_str!("../../constructions/t4.position");
const T5: &str = include_str!("../../constructions/t5.position");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{name}: data file does not parse: {message}")]
    Parse { name: &'static str, message: String },
    #[error("{name}: transcription violates `{constraint}`")]
    Transcription {
        name: &'static str,
        constraint: String,
    },
    #[error("vertex {0} is not an allowed site for the extra leaf")]
    InvalidSite(Vertex),
}

fn check(
    name: &'static str,
    ok: bool,
    constraint: impl Into<String>,
) -> Result<(), ConstructionError> {
    if ok {
        Ok(())
    } else {
        Err(ConstructionError::Transcription {
            name,
            constraint: constraint.into(),
        })
    }
}

fn load_forest(name: &'static str, text: &str) -> Result<Forest, ConstructionError> {
    parse_forest(text).map_err(|e| ConstructionError::Parse {
        name,
        message: e.to_string(),
    })
}

fn load_position(name: &'static str, text: &str) -> Result<Position, ConstructionError> {
    parse_position(text).map_err(|e| ConstructionError::Parse {
        name,
        message: e.to_string(),
    })
}

fn sorted_degrees(f: &Forest) -> Vec<usize> {
    let mut d: Vec<usize> = f.vertices().map(|v| f.degree(v)).collect();
    d.sort_unstable();
    d
}

pub fn path(n: usize) -> Forest {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Forest::new(n, &edges).expect("path")
}

/// K1,k with center 0.
pub fn star(k: usize) -> Forest {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    Forest::new(k + 1, &edges).expect("star")
}

/// A spine `0..leaves.len()` where spine vertex `i` carries `leaves[i]`
/// pendant leaves.
pub fn caterpillar(leaves: &[usize]) -> Forest {
    let spine = leaves.len();
    let mut edges: Vec<_> = (1..spine).map(|i| (i - 1, i)).collect();
    let mut next = spine;
    for (i, &k) in leaves.iter().enumerate() {
        for _ in 0..k {
            edges.push((i, next));
            next += 1;
        }
    }
    Forest::new(next, &edges).expect("caterpillar")
}

/// Center 0 with `legs` paths of `leg_length` vertices each.
pub fn spider(legs: usize, leg_length: usize) -> Forest {
    let mut edges = Vec::new();
    let mut next = 1;
    for _ in 0..legs {
        let mut prev = 0;
        for _ in 0..leg_length {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Forest::new(next, &edges).expect("spider")
}

/// `k` copies of `g` with their copies of `u` identified. The shared vertex
/// is 0; the other vertices of copy `i` follow in their original order.
pub fn glue_at_vertex(g: &Forest, u: Vertex, k: usize) -> Forest {
    let n = g.order();
    if k == 0 || n == 0 {
        return Forest::empty(0);
    }
    let order = 1 + k * (n - 1);
    let map = |copy: usize, v: Vertex| -> Vertex {
        if v == u {
            0
        } else {
            let rank = if v < u { v } else { v - 1 };
            1 + copy * (n - 1) + rank
        }
    };
    let mut edges = Vec::with_capacity(k * g.edges().len());
    for copy in 0..k {
        for &(a, b) in g.edges() {
            edges.push((map(copy, a), map(copy, b)));
        }
    }
    Forest::new(order, &edges).expect("glued copies of a tree form a tree")
}

fn validate_p4_plus(f: &Forest) -> Result<(), ConstructionError> {
    check("p4plus", f.order() == 5, "5 vertices")?;
    check(
        "p4plus",
        f.longest_path_length() == 3,
        "longest path has length 3",
    )?;
    check(
        "p4plus",
        sorted_degrees(f) == [1, 1, 1, 2, 3],
        "degrees {1,1,1,2,3}",
    )?;
    check(
        "p4plus",
        f.degree(2) == 3 && f.has_edge(2, 4),
        "x3' hangs off x3",
    )
}

/// x1–x2–x3–x4 as 0..4 with x3′ = 4 on x3.
pub fn p4_plus() -> Forest {
    let f = load_forest("p4plus", P4_PLUS).unwrap();
    validate_p4_plus(&f).unwrap();
    f
}

fn validate_t_prime(f: &Forest) -> Result<(), ConstructionError> {
    check("tprime", f.order() == 14, "14 vertices")?;
    check(
        "tprime",
        f.vertices().all(|v| f.degree(v) != 3),
        "no vertex of degree 3",
    )?;
    check(
        "tprime",
        (0..4).all(|v| f.degree(v) == 4),
        "spine vertices have degree 4",
    )?;
    check(
        "tprime",
        (1..4).all(|v| f.has_edge(v - 1, v)),
        "spine x1-x2-x3-x4",
    )?;
    let heavy: Vec<_> = f
        .edges()
        .iter()
        .filter(|&&(a, b)| f.degree(a) > 2 && f.degree(b) > 2)
        .collect();
    check(
        "tprime",
        heavy.len() == 3,
        "heavy edges are exactly the spine edges",
    )
}

/// Spine x1..x4 = 0..4, every spine vertex of degree 4.
pub fn t_prime() -> Forest {
    let f = load_forest("tprime", T_PRIME).unwrap();
    validate_t_prime(&f).unwrap();
    f
}

/// Whether some four vertices of degree at least 4 form a path whose ends
/// have at least three other neighbors each and whose inner vertices have
/// at least two, i.e. whether `f` contains the 14-vertex tree as a subgraph.
pub fn contains_t_prime(f: &Forest) -> bool {
    for a in f.vertices().filter(|&v| f.degree(v) >= 4) {
        for &b in f.neighbors(a).iter().filter(|&&w| f.degree(w) >= 4) {
            for &c in f
                .neighbors(b)
                .iter()
                .filter(|&&w| w != a && f.degree(w) >= 4)
            {
                if f.neighbors(c).iter().any(|&d| d != b && f.degree(d) >= 4) {
                    return true;
                }
            }
        }
    }
    false
}

fn validate_twelve(f: &Forest) -> Result<(), ConstructionError> {
    check("twelve", f.order() == 12, "12 vertices")?;
    check(
        "twelve",
        (1..5).all(|v| f.has_edge(v - 1, v)),
        "P5 spine 0..5",
    )?;
    check(
        "twelve",
        (0..5).all(|v| f.degree(v) == 3),
        "every spine vertex has degree 3",
    )?;
    check(
        "twelve",
        (5..12).all(|v| f.degree(v) == 1),
        "all other vertices are leaves",
    )
}

/// A P5 with leaves added until every spine vertex has degree 3.
pub fn twelve_vertex_example() -> Forest {
    let f = load_forest("twelve", TWELVE).unwrap();
    validate_twelve(&f).unwrap();
    f
}

pub const FIG3_X1: Vertex = 0;
pub const FIG3_X2: Vertex = 1;
pub const FIG3_X1_PRIME: Vertex = 3;
pub const FIG3_X1_SECOND: Vertex = 4;
pub const FIG3_X2_PRIME: Vertex = 6;
pub const FIG3_X2_SECOND: Vertex = 7;
pub const FIG3_SITES: [Vertex; 4] = [FIG3_X1_PRIME, FIG3_X1_SECOND, FIG3_X2_PRIME, FIG3_X2_SECOND];

fn validate_fig3(p: &Position) -> Result<(), ConstructionError> {
    let f = p.forest();
    check("fig3", f.order() == 8, "8 vertices")?;
    check("fig3", f.has_edge(FIG3_X1, FIG3_X2), "x1 adjacent to x2")?;
    check(
        "fig3",
        f.degree(FIG3_X1) == 4 && f.degree(FIG3_X2) == 4,
        "x1 and x2 have degree 4",
    )?;
    for x in [FIG3_X1, FIG3_X2] {
        let alpha: Vec<_> = f
            .neighbors(x)
            .iter()
            .filter(|&&w| p.color(w) == Some(Color(0)))
            .collect();
        check(
            "fig3",
            alpha.len() == 1 && f.degree(*alpha[0]) == 1,
            "each of x1, x2 has one leaf colored alpha",
        )?;
    }
    check(
        "fig3",
        p.colored_vertices().count() == 2,
        "exactly the two alpha leaves are colored",
    )
}

/// Adjacent x1, x2, each with a leaf colored alpha (color 0) and two
/// uncolored neighbors. With a site, a further leaf colored beta (color 1)
/// hangs off that vertex.
pub fn fig3_position(extra_leaf_site: Option<Vertex>) -> Result<Position, ConstructionError> {
    let base = load_position("fig3", FIG3)?;
    validate_fig3(&base)?;
    let Some(site) = extra_leaf_site else {
        return Ok(base);
    };
    if !FIG3_SITES.contains(&site) {
        return Err(ConstructionError::InvalidSite(site));
    }
    let n = base.order();
    let mut edges = base.forest().edges().to_vec();
    edges.push((site, n));
    let mut p = Position::new(Forest::new(n + 1, &edges).expect("adding a leaf keeps a tree"));
    for v in base.colored_vertices() {
        p.set_color(v, base.color(v).unwrap())
            .expect("copied coloring is proper");
    }
    p.set_color(n, Color(1))
        .expect("beta leaf next to an uncolored vertex");
    Ok(p)
}

/// The gadgets of the final construction. Shapes whose pendant placement is
/// fixed only by drawings are marked provisional and checked against the
/// facts stated in words only.
#[derive(Debug, Clone)]
pub struct GadgetSuite {
    pub t1: Position,
    pub surrounded_p4: Position,
    pub surrounded_p4_padded: Position,
    pub h: Forest,
    pub t_double_prime: Forest,
    pub t3: Position,
    pub t4: Position,
    pub t5: Position,
    pub t: Forest,
}

pub const PROVISIONAL: [&str; 5] = ["h", "t3", "t4", "t5", "t"];

pub const T3_U: Vertex = 0;
pub const T3_V: Vertex = 9;
pub const T3_W: Vertex = 11;
pub const T3_X: Vertex = 12;
pub const T3_Z: Vertex = 14;
pub const T3_Y: Vertex = 15;

fn validate_t1(p: &Position) -> Result<(), ConstructionError> {
    let f = p.forest();
    let (u, x, v, a, b) = (0, 2, 4, 5, 6);
    check("t1", f.order() == 7, "7 vertices")?;
    check(
        "t1",
        f.path_between(u, v).map(|q| q.len()) == Ok(5),
        "u,v path of length 4 through x",
    )?;
    check("t1", p.is_colored(u) && p.is_colored(v), "u and v colored")?;
    check(
        "t1",
        p.colored_vertices().count() == 2,
        "only u and v colored",
    )?;
    check(
        "t1",
        f.distance(u, x) == Ok(2) && f.distance(v, x) == Ok(2),
        "x at distance 2 from u and v",
    )?;
    check("t1", f.distance(a, b) == Ok(4), "a and b far apart")?;
    for leaf in [a, b] {
        let colored_nbr = f.neighbors(leaf).iter().any(|&w| p.is_colored(w));
        check(
            "t1",
            !colored_nbr || p.color(leaf) == Some(Color(2)),
            "a or b next to a colored vertex is colored gamma",
        )?;
    }
    Ok(())
}

fn validate_surrounded(
    name: &'static str,
    p: &Position,
    order: usize,
) -> Result<(), ConstructionError> {
    let f = p.forest();
    check(name, f.order() == order, format!("{order} vertices"))?;
    check(name, order % 2 == 0, "even order")?;
    check(name, (1..4).all(|v| f.has_edge(v - 1, v)), "P4 on 0..4")?;
    for y in 0..4 {
        let alpha = f
            .neighbors(y)
            .iter()
            .filter(|&&w| p.color(w) == Some(Color(0)))
            .count();
        check(
            name,
            alpha == 1 && !p.is_colored(y),
            "every P4 vertex uncolored and next to alpha",
        )?;
    }
    Ok(())
}

fn validate_t3_pattern(
    name: &'static str,
    p: &Position,
    v_side_colored: bool,
) -> Result<(), ConstructionError> {
    let f = p.forest();
    check(
        name,
        f.path_between(T3_U, T3_V).map(|q| q.len()) == Ok(10),
        "u,v path of length 9",
    )?;
    check(name, f.max_degree() <= 3, "maximum degree 3")?;
    let cu = p.color(T3_U);
    check(name, cu.is_some(), "u colored")?;
    check(
        name,
        p.color(T3_V).is_some() && p.color(T3_V) != cu,
        "c(v) differs from c(u)",
    )?;
    check(
        name,
        p.color(T3_W) == cu && p.color(T3_X) == cu,
        "c(u)=c(w)=c(x)",
    )?;
    let cv = p.color(T3_V);
    if v_side_colored {
        check(
            name,
            p.color(T3_Y) == cv && p.color(T3_Z) == cv,
            "c(v)=c(y)=c(z)",
        )?;
    } else {
        check(
            name,
            !p.is_colored(T3_Y) && !p.is_colored(T3_Z),
            "y and z uncolored",
        )?;
    }
    check(
        name,
        p.colored_vertices().all(|c| f.degree(c) == 1),
        "colored vertices are leaves",
    )
}

fn validate_t5(p: &Position) -> Result<(), ConstructionError> {
    let f = p.forest();
    check("t5", f.order() == 32, "|V(T5)| = 32")?;
    check("t5", f.max_degree() <= 3, "maximum degree 3")?;
    check("t5", f.degree(T3_U) == 1, "u is a leaf")?;
    check(
        "t5",
        f.path_between(T3_U, T3_V).map(|q| q.len()) == Ok(10),
        "u,v path of length 9",
    )?;
    check(
        "t5",
        p.colored_vertices().collect::<Vec<_>>() == [T3_U, T3_V],
        "only u and v colored",
    )?;
    check(
        "t5",
        p.color(T3_U) != p.color(T3_V),
        "c(u) differs from c(v)",
    )
}

/// Loads and checks every gadget. Errors identify the gadget and the
/// violated fact.
pub fn gadget_suite() -> Result<GadgetSuite, ConstructionError> {
    let t1 = load_position("t1", T1)?;
    validate_t1(&t1)?;
    let surrounded_p4 = load_position("surrounded_p4", SURROUNDED_P4)?;
    validate_surrounded("surrounded_p4", &surrounded_p4, 8)?;
    let surrounded_p4_padded = load_position("surrounded_p4_padded", SURROUNDED_P4_PADDED)?;
    validate_surrounded("surrounded_p4_padded", &surrounded_p4_padded, 10)?;

    let h = load_forest("h", H)?;
    check(
        "h",
        h.order() == 8 && h.degree(0) == 1,
        "8 vertices with u a leaf",
    )?;
    let t_double_prime = glue_at_vertex(&h, 0, 3);
    check(
        "t_double_prime",
        t_double_prime.order() == 22,
        "22 vertices",
    )?;
    check(
        "t_double_prime",
        t_double_prime.degree(0) == 3,
        "center of degree 3",
    )?;
    check(
        "t_double_prime",
        !contains_t_prime(&t_double_prime),
        "no copy of the 14-vertex tree",
    )?;

    let t3 = load_position("t3", T3)?;
    validate_t3_pattern("t3", &t3, true)?;
    let t4 = load_position("t4", T4)?;
    validate_t3_pattern("t4", &t4, false)?;
    check("t4", t4.forest() == t3.forest(), "same shape as t3")?;
    let t5 = load_position("t5", T5)?;
    validate_t5(&t5)?;

    let t = glue_at_vertex(t5.forest(), T3_U, 3);
    check("t", t.order() == 94, "|V(T)| = 3(32) - 2 = 94")?;
    check("t", t.max_degree() == 3, "maximum degree 3")?;
    check("t", t.order() % 2 == 0, "even order")?;
    Ok(GadgetSuite {
        t1,
        surrounded_p4,
        surrounded_p4_padded,
        h,
        t_double_prime,
        t3,
        t4,
        t5,
        t,
    })
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("transcription invalid: {0}")]
    TranscriptionInvalid(#[from] ConstructionError),
    #[error(
        "certification inconclusive for {name}: Bob does not force a win within {budget} moves"
    )]
    Inconclusive { name: &'static str, budget: u32 },
    #[error("solver failed on {name}: {source}")]
    Solver {
        name: &'static str,
        source: SolveError,
    },
}

/// Certifies the small gadgets: in the 3-color game, Bob to move on T1 and
/// Alice to move on each surrounded P4 host, Bob wins within two of his
/// moves.
pub fn certify_small_gadgets() -> Result<(), CertifyError> {
    let suite = gadget_suite()?;
    let cases: [(&'static str, &Position, Player); 3] = [
        ("t1", &suite.t1, Player::Bob),
        ("surrounded_p4", &suite.surrounded_p4, Player::Alice),
        (
            "surrounded_p4_padded",
            &suite.surrounded_p4_padded,
            Player::Alice,
        ),
    ];
    for (name, p, mover) in cases {
        let s = GameState::new(p.clone(), Ruleset::standard(3))
            .map_err(|e| ConstructionError::Transcription {
                name,
                constraint: e.to_string(),
            })?
            .with_to_move(mover);
        let ok = crate::game::bob_wins_within(&s, 2)
            .map_err(|source| CertifyError::Solver { name, source })?;
        if !ok {
            return Err(CertifyError::Inconclusive { name, budget: 2 });
        }
    }
    Ok(())
}
