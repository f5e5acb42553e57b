//! Double stars, 2-colorings of complete graphs, freeness checks and the
//! exact Ramsey number search.
//!
//! A coloring of `K_p` is stored as its blue class `B`; red is the
//! complement. Neighborhoods are open throughout.

pub mod naive;
pub mod reduction;

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::graph::{io, Graph};
use crate::rng::SeededRng;

pub use naive::{find_free_coloring, for_each_free_coloring, SearchOutcome};
pub use reduction::{
    degree_union_search, reduction_graph_exists, reduction_parameters, verify_reduction_graph, ReductionRun,
    ReductionVerdict,
};

/// `S(n,m)`: centers `u`, `v` joined by the bridge `uv`, with `n` further
/// leaves on `u` and `m` on `v`. `S(n,0)` is the star `K_{1,n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DoubleStar {
    n: usize,
    m: usize,
}

impl DoubleStar {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m > n {
            return Err(usage(format!("double star S(n,m) needs n >= m, got n={n}, m={m}")));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.n + self.m + 2
    }

    /// Burr's tree bound `max(n+2m+2, 2n+1)`.
    pub fn burr_bound(&self) -> usize {
        (self.n + 2 * self.m + 2).max(2 * self.n + 1)
    }

    /// `max(2n+2, n+2m+2)`: from this order on, free colorings correspond
    /// to degree/union graphs.
    pub fn reduction_threshold(&self) -> usize {
        (2 * self.n + 2).max(self.n + 2 * self.m + 2)
    }

    /// The Grossman–Harary–Klawe closed form where it applies:
    /// `max(2n+1, n+2m+2)` for odd `n` and `m <= 2`;
    /// `max(2n+2, n+2m+2)` when `n` is even or `m >= 3`, and
    /// `n <= sqrt(2) m` or `n >= 3m`. `None` outside both cases.
    pub fn closed_form_value(&self) -> Option<usize> {
        let (n, m) = (self.n, self.m);
        if n % 2 == 1 && m <= 2 {
            Some((2 * n + 1).max(n + 2 * m + 2))
        } else if (n % 2 == 0 || m >= 3) && (n * n <= 2 * m * m || n >= 3 * m) {
            Some(self.reduction_threshold())
        } else {
            None
        }
    }
}

impl fmt::Display for DoubleStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S({},{})", self.n, self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

/// A red/blue coloring of `E(K_p)`, stored as the blue graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    blue: Graph,
}

impl EdgeColoring {
    pub fn new(blue: Graph) -> Self {
        Self { blue }
    }

    /// Every edge one color.
    pub fn monochromatic(order: usize, color: Color) -> Result<Self> {
        let blue = match color {
            Color::Blue => Graph::complete(order)?,
            Color::Red => Graph::empty(order)?,
        };
        Ok(Self { blue })
    }

    pub fn order(&self) -> usize {
        self.blue.order()
    }

    pub fn blue(&self) -> &Graph {
        &self.blue
    }

    pub fn red(&self) -> Graph {
        self.blue.complement()
    }

    pub fn class(&self, color: Color) -> Graph {
        match color {
            Color::Blue => self.blue.clone(),
            Color::Red => self.red(),
        }
    }

    pub fn color(&self, u: usize, v: usize) -> Color {
        if self.blue.has_edge(u, v) {
            Color::Blue
        } else {
            Color::Red
        }
    }

    pub fn swapped(&self) -> Self {
        Self { blue: self.red() }
    }

    /// Text format: `p <order>` then the blue edges.
    pub fn to_text(&self) -> String {
        io::to_text(&self.blue)
    }

    /// Accepts the text format or graph6 (of the blue class).
    pub fn parse(input: &str) -> Result<Self> {
        io::parse_any(input).map(Self::new)
    }
}

impl fmt::Debug for EdgeColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdgeColoring(blue = {:?})", self.blue)
    }
}

/// A monochromatic `S(n,m)` located by its bridge: `big` is the center with
/// `n` leaves, `small` the one with `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonochromaticStar {
    pub color: Color,
    pub big: usize,
    pub small: usize,
}

fn star_in_class(g: &Graph, s: DoubleStar) -> Option<(usize, usize)> {
    let need = s.n + s.m + 2;
    for (u, v) in g.edges() {
        let (du, dv) = (g.degree(u), g.degree(v));
        let u_big = du > s.n && dv > s.m;
        let v_big = dv > s.n && du > s.m;
        if (u_big || v_big) && g.union_size(u, v) >= need {
            return Some(if u_big { (u, v) } else { (v, u) });
        }
    }
    None
}

/// First monochromatic `S(n,m)` in bridge order (blue before red).
///
/// Edge `uv` of color `C` is the bridge of one iff one endpoint has
/// `deg_C >= n+1`, the other `deg_C >= m+1`, and `|N_C(u) ∪ N_C(v)| >= n+m+2`:
/// pick the `n` leaves at the big center outside `N_C(small)` where possible.
pub fn find_monochromatic_star(c: &EdgeColoring, s: DoubleStar) -> Option<MonochromaticStar> {
    if let Some((big, small)) = star_in_class(&c.blue, s) {
        return Some(MonochromaticStar {
            color: Color::Blue,
            big,
            small,
        });
    }
    star_in_class(&c.red(), s).map(|(big, small)| MonochromaticStar {
        color: Color::Red,
        big,
        small,
    })
}

/// No monochromatic `S(n,m)`.
pub fn is_free_direct(c: &EdgeColoring, s: DoubleStar) -> bool {
    find_monochromatic_star(c, s).is_none()
}

/// The two-condition characterization, evaluated without its order
/// hypothesis: every edge `uv` of either color has
/// `|N_C(u) ∪ N_C(v)| <= n+m+1`, or `deg_C(u) <= n` and `deg_C(v) <= n`.
///
/// It coincides with freeness for `p >= n+2m+2`; below that it can reject
/// free colorings (an edge with a big endpoint whose partner has degree
/// `<= m` is not a bridge, but fails both conditions).
pub fn lemma22_characterization(c: &EdgeColoring, s: DoubleStar) -> bool {
    let ok = |g: &Graph| {
        g.edges().all(|(u, v)| {
            g.union_size(u, v) <= s.n + s.m + 1 || (g.degree(u) <= s.n && g.degree(v) <= s.n)
        })
    };
    ok(&c.blue) && ok(&c.red())
}

/// [`lemma22_characterization`] with its hypothesis `p >= n+2m+2` enforced.
pub fn is_free_lemma22(c: &EdgeColoring, s: DoubleStar) -> Result<bool> {
    if c.order() < s.n + 2 * s.m + 2 {
        return Err(usage(format!(
            "the characterization needs p >= n+2m+2 = {}, got p = {}",
            s.n + 2 * s.m + 2,
            c.order()
        )));
    }
    Ok(lemma22_characterization(c, s))
}

fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
    Graph::from_edges(a + b, edges).expect("positive order")
}

/// Burr's two extremal colorings: `K_{n+2m+1}` with blue `K_{n+m+1,m}`
/// (omitted when `m = 0`), and `K_{2n}` with blue `K_{n,n}` (omitted when
/// `n = 0`). Both are `(n,m)`-free.
pub fn burr_witnesses(s: DoubleStar) -> Vec<EdgeColoring> {
    let mut out = Vec::new();
    if s.m >= 1 {
        out.push(EdgeColoring::new(complete_bipartite(s.n + s.m + 1, s.m)));
    }
    if s.n >= 1 {
        out.push(EdgeColoring::new(complete_bipartite(s.n, s.n)));
    }
    out
}

/// Node and prune counters of a search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes: u64,
}

/// Which engine settled an order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Exhaustive search over colorings.
    Naive,
    /// Degree/union graph search.
    Reduction,
}

/// Proof that no free coloring of `K_order` exists.
#[derive(Clone, Debug, Serialize)]
pub struct Exhaustion {
    pub order: usize,
    pub engine: Engine,
    pub stats: SearchStats,
    pub wall_ms: u128,
}

#[derive(Clone, Debug)]
pub struct RamseyCertificate {
    pub star: DoubleStar,
    pub value: usize,
    /// Free coloring of `K_{value-1}`.
    pub witness: EdgeColoring,
    pub exhaustion: Exhaustion,
    /// Nodes over every order searched.
    pub total_nodes: u64,
}

/// What is known when the budget runs out.
#[derive(Clone, Debug)]
pub struct RamseyBracket {
    pub star: DoubleStar,
    /// `r >= lower`.
    pub lower: usize,
    /// `r <= upper`, from the table of invalid points.
    pub upper: Option<BigInt>,
    /// Free coloring of `K_{lower-1}`.
    pub witness: EdgeColoring,
    /// Order at which the search gave up.
    pub stalled_at: usize,
    pub reason: String,
    pub total_nodes: u64,
}

#[derive(Clone, Debug)]
pub enum RamseyResult {
    Exact(RamseyCertificate),
    Inconclusive(RamseyBracket),
}

#[derive(Clone, Copy, Debug)]
pub struct RamseyOptions {
    /// Total node budget over all orders.
    pub budget: u64,
    pub threads: usize,
    /// Largest order handed to the naive coloring search.
    pub naive_max_order: usize,
}

/// Default node budget.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

impl Default for RamseyOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            threads: 1,
            naive_max_order: 8,
        }
    }
}

/// Free coloring of `K_{r_B - 1}` from Burr's constructions, or a
/// monochromatic one when `K_{r_B-1}` is too small to hold `S(n,m)`.
fn lower_witness(s: DoubleStar) -> EdgeColoring {
    let order = s.burr_bound() - 1;
    burr_witnesses(s)
        .into_iter()
        .find(|c| c.order() == order)
        .unwrap_or_else(|| EdgeColoring::monochromatic(order.max(1), Color::Blue).expect("small order"))
}

/// Computes `r(S(n,m))` exactly, or a bracket when the budget runs out.
///
/// Starts at Burr's bound `r_B` (witnessed by his coloring of `K_{r_B-1}`)
/// and walks up: below `max(2n+2, n+2m+2)` by naive coloring search, from
/// there on through the degree/union reduction. The first order with no
/// free structure is the value.
pub fn ramsey_exact(s: DoubleStar, opts: &RamseyOptions) -> Result<RamseyResult> {
    let mut witness = lower_witness(s);
    if !is_free_direct(&witness, s) {
        return Err(Error::Internal(format!("lower-bound witness for {s} is not free")));
    }
    let mut total = 0u64;
    let mut p = s.burr_bound();
    loop {
        let remaining = opts.budget.saturating_sub(total);
        let start = Instant::now();
        let (engine, found, done, stats) = if p < s.reduction_threshold() {
            if p > opts.naive_max_order {
                let upper = crate::bounds::table_ramsey_bound(s);
                return Ok(RamseyResult::Inconclusive(RamseyBracket {
                    star: s,
                    lower: p,
                    upper,
                    witness,
                    stalled_at: p,
                    reason: format!(
                        "order {p} is below the reduction threshold {} and above the naive search cap {}",
                        s.reduction_threshold(),
                        opts.naive_max_order
                    ),
                    total_nodes: total,
                }));
            }
            let (outcome, stats) = naive::find_free_coloring(p, s, remaining)?;
            match outcome {
                SearchOutcome::Found(c) => (Engine::Naive, Some(c), true, stats),
                SearchOutcome::Exhausted => (Engine::Naive, None, true, stats),
                SearchOutcome::BudgetExceeded => (Engine::Naive, None, false, stats),
            }
        } else {
            let run = reduction_graph_exists(p, s, remaining, opts.threads)?;
            match run.verdict {
                ReductionVerdict::Found(g) => (Engine::Reduction, Some(EdgeColoring::new(g)), true, run.stats),
                ReductionVerdict::Exhausted => (Engine::Reduction, None, true, run.stats),
                ReductionVerdict::Inconclusive => (Engine::Reduction, None, false, run.stats),
            }
        };
        total += stats.nodes;
        match (found, done) {
            (Some(c), _) => {
                if !is_free_direct(&c, s) {
                    return Err(Error::Internal(format!("search returned a non-free coloring of K_{p} for {s}")));
                }
                witness = c;
                p += 1;
            }
            (None, true) => {
                return Ok(RamseyResult::Exact(RamseyCertificate {
                    star: s,
                    value: p,
                    witness,
                    exhaustion: Exhaustion {
                        order: p,
                        engine,
                        stats,
                        wall_ms: start.elapsed().as_millis(),
                    },
                    total_nodes: total,
                }));
            }
            (None, false) => {
                return Ok(RamseyResult::Inconclusive(RamseyBracket {
                    star: s,
                    lower: p,
                    upper: crate::bounds::table_ramsey_bound(s),
                    witness,
                    stalled_at: p,
                    reason: format!("node budget {} exhausted at order {p}", opts.budget),
                    total_nodes: total,
                }));
            }
        }
    }
}

/// How [`unique_color_property`] draws the colorings it checks.
#[derive(Clone, Copy, Debug)]
pub enum ColoringSource {
    /// Every free coloring, via the naive search (up to color swap).
    Exhaustive { budget: u64 },
    /// Uniform random colorings; only the free ones are checked.
    Sampled { count: u64, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct UniqueColorReport {
    /// Free colorings examined.
    pub free_checked: u64,
    /// Colorings drawn or visited in total.
    pub examined: u64,
    /// First free coloring where both colors have a vertex of degree `> n`.
    pub counterexample: Option<EdgeColoring>,
    /// `false` if an exhaustive run hit its budget.
    pub complete: bool,
}

impl UniqueColorReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Some color class with every degree `<= n`.
pub fn has_low_color(c: &EdgeColoring, n: usize) -> bool {
    c.blue.max_degree() <= n || c.red().max_degree() <= n
}

/// Checks that every `(n,m)`-free coloring of `K_p` has a color class with
/// all degrees at most `n`. Needs `p >= max(2n+2, n+2m+2)`.
pub fn unique_color_property(p: usize, s: DoubleStar, source: ColoringSource) -> Result<UniqueColorReport> {
    if p < s.reduction_threshold() {
        return Err(usage(format!(
            "the property is claimed for p >= max(2n+2, n+2m+2) = {}, got p = {p}",
            s.reduction_threshold()
        )));
    }
    let mut report = UniqueColorReport {
        free_checked: 0,
        examined: 0,
        counterexample: None,
        complete: true,
    };
    match source {
        ColoringSource::Exhaustive { budget } => {
            let (done, _) = for_each_free_coloring(p, s, budget, |c| {
                report.free_checked += 1;
                report.examined += 1;
                if report.counterexample.is_none() && !has_low_color(c, s.n) {
                    report.counterexample = Some(c.clone());
                }
            })?;
            report.complete = done;
        }
        ColoringSource::Sampled { count, seed } => {
            let mut rng = SeededRng::new(seed);
            for _ in 0..count {
                let c = random_coloring(p, &mut rng)?;
                report.examined += 1;
                if is_free_direct(&c, s) {
                    report.free_checked += 1;
                    if !has_low_color(&c, s.n) {
                        report.counterexample = Some(c);
                        break;
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Each pair blue with probability 1/2, pairs in lexicographic order.
pub fn random_coloring(p: usize, rng: &mut SeededRng) -> Result<EdgeColoring> {
    let mut edges = Vec::new();
    for u in 0..p {
        for v in u + 1..p {
            if rng.next_u64() >> 63 == 1 {
                edges.push((u, v));
            }
        }
    }
    Ok(EdgeColoring::new(Graph::from_edges(p, edges)?))
}
