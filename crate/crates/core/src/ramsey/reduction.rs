//! Search for graphs on `p` vertices with minimum degree at least `d` and
//! every edge's neighborhood union at most `s`.
//!
//! For `p >= max(2n+2, n+2m+2)` such a graph with `d = p-n-1`, `s = n+m+1`
//! exists exactly when `K_p` has an `(n,m)`-free coloring (take the graph as
//! one color class), which turns the Ramsey question into this one.
//!
//! The search fixes vertex 0 to have maximum degree `d0` with neighborhood
//! `{1..=d0}` (tried in increasing order), then decides the remaining pairs
//! row by row, trying "non-edge" before "edge". Degrees are nonincreasing
//! within `N(0)` and within the non-neighbors of 0. Every graph has a
//! relabeling of this shape, so exhausting the tree proves nonexistence, and
//! the first leaf reached is the least adjacency matrix of that shape.
//!
//! Work is split at a fixed depth into prefix branches that may run on a
//! worker pool. Branch outcomes are merged in branch order, so the verdict
//! and the witness do not depend on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{DoubleStar, SearchStats};
use crate::error::{usage, Error, Result};
use crate::graph::Graph;

/// Orders above this are refused (adjacency rows are single `u64` words).
pub const REDUCTION_MAX_ORDER: usize = 64;

/// Pairs decided before the tree is cut into branches.
const SPLIT_DEPTH: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionVerdict {
    Found(Graph),
    Exhausted,
    Inconclusive,
}

/// Verdict of a degree/union search plus the work spent on it.
#[derive(Clone, Debug)]
pub struct ReductionRun {
    pub verdict: ReductionVerdict,
    pub stats: SearchStats,
    pub branches: usize,
}

/// Entry point for the exact search: is there a graph on `p` vertices with
/// `deg(v) >= p-n-1` for all `v` and `|N(u) ∪ N(v)| <= n+m+1` for all edges?
/// Only meaningful (and only accepted) for `p >= max(2n+2, n+2m+2)`.
pub fn reduction_graph_exists(p: usize, s: DoubleStar, budget: u64, threads: usize) -> Result<ReductionRun> {
    if p < s.reduction_threshold() {
        return Err(usage(format!(
            "the reduction needs p >= max(2n+2, n+2m+2) = {}, got p = {p}",
            s.reduction_threshold()
        )));
    }
    degree_union_search(p, p - s.n() - 1, s.n() + s.m() + 1, budget, threads)
}

/// Checks a candidate reduction graph: minimum degree at least `p-n-1` and
/// every edge union at most `n+m+1`. The error names the first failure.
pub fn verify_reduction_graph(g: &Graph, s: DoubleStar) -> Result<()> {
    let p = g.order();
    if p < s.reduction_threshold() {
        return Err(Error::Validation(format!(
            "order {p} is below max(2n+2, n+2m+2) = {}",
            s.reduction_threshold()
        )));
    }
    let need = p - s.n() - 1;
    for v in 0..p {
        if g.degree(v) < need {
            return Err(Error::Validation(format!(
                "vertex {v} has degree {} < p-n-1 = {need}",
                g.degree(v)
            )));
        }
    }
    let cap = s.n() + s.m() + 1;
    for (u, v) in g.edges() {
        let union = g.union_size(u, v);
        if union > cap {
            return Err(Error::Validation(format!(
                "edge {u}-{v} has |N(u) ∪ N(v)| = {union} > n+m+1 = {cap}"
            )));
        }
    }
    Ok(())
}

/// The double star with the largest `m` (and then `n`) that `g` certifies a
/// lower bound for, i.e. `n = p - 1 - mindeg`, `m = maxunion - 1 - n`,
/// provided `n >= m >= 0` and `p >= max(2n+2, n+2m+2)`.
pub fn reduction_parameters(g: &Graph) -> Option<DoubleStar> {
    let p = g.order();
    let n = p - 1 - g.min_degree();
    let union = g.max_edge_union().map_or(n + 1, |(u, _)| u);
    let m = union.checked_sub(n + 1)?;
    let s = DoubleStar::new(n, m).ok()?;
    (p >= s.reduction_threshold()).then_some(s)
}

/// The general search: a graph on `p` vertices with every degree at least
/// `min_degree` and every edge union at most `max_union`.
pub fn degree_union_search(p: usize, min_degree: usize, max_union: usize, budget: u64, threads: usize) -> Result<ReductionRun> {
    if p == 0 || p > REDUCTION_MAX_ORDER {
        return Err(Error::Resource(format!(
            "reduction search supports 1 <= p <= {REDUCTION_MAX_ORDER}, got {p}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (1..p).flat_map(|r| (r + 1..p).map(move |c| (r, c))).collect();
    let split = SPLIT_DEPTH.min(pairs.len());

    // Phase 1: enumerate prefix branches for every admissible d0.
    let mut stats = SearchStats::default();
    let mut branches = Vec::new();
    if min_degree < p {
        // an edge 0v has union N(0) ∪ {0}, so d0 + 1 <= max_union unless d0 = 0
        let hi = (p - 1).min(max_union.saturating_sub(1));
        for d0 in min_degree..=hi {
            let mut search = Search::new(p, min_degree, max_union, &pairs, d0, budget.saturating_sub(stats.nodes));
            search.split = Some(split);
            let flow = search.root();
            stats.nodes += search.nodes;
            stats.prunes += search.prunes;
            branches.append(&mut search.branches);
            if matches!(flow, Flow::OutOfBudget) {
                return Ok(ReductionRun {
                    verdict: ReductionVerdict::Inconclusive,
                    stats: SearchStats { nodes: budget, ..stats },
                    branches: branches.len(),
                });
            }
        }
    }
    let count = branches.len();
    let verdict = if threads <= 1 {
        run_sequential(p, min_degree, max_union, &pairs, &branches, budget, &mut stats)
    } else {
        run_parallel(p, min_degree, max_union, &pairs, &branches, budget, threads, &mut stats)
    };
    Ok(ReductionRun {
        verdict,
        stats,
        branches: count,
    })
}

fn run_sequential(
    p: usize,
    dmin: usize,
    cap: usize,
    pairs: &[(usize, usize)],
    branches: &[Snapshot],
    budget: u64,
    stats: &mut SearchStats,
) -> ReductionVerdict {
    for b in branches {
        let remaining = budget.saturating_sub(stats.nodes);
        let (flow, nodes, prunes, graph) = run_branch(p, dmin, cap, pairs, b, remaining, None);
        stats.nodes += nodes;
        stats.prunes += prunes;
        match flow {
            Flow::Continue => {}
            Flow::Found => return ReductionVerdict::Found(graph.expect("found branch carries a graph")),
            Flow::OutOfBudget | Flow::Cancelled => {
                stats.nodes = budget;
                return ReductionVerdict::Inconclusive;
            }
        }
    }
    ReductionVerdict::Exhausted
}

type BranchResult = (Flow, u64, u64, Option<Graph>);

#[allow(clippy::too_many_arguments)]
fn run_parallel(
    p: usize,
    dmin: usize,
    cap: usize,
    pairs: &[(usize, usize)],
    branches: &[Snapshot],
    budget: u64,
    threads: usize,
    stats: &mut SearchStats,
) -> ReductionVerdict {
    let limit = budget.saturating_sub(stats.nodes);
    let next = AtomicUsize::new(0);
    // Smallest branch index whose outcome settles the merge.
    let settled = AtomicUsize::new(usize::MAX);
    let results: Vec<Mutex<Option<BranchResult>>> = branches.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..threads.min(branches.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= branches.len() || i > settled.load(Ordering::Relaxed) {
                    break;
                }
                let result = run_branch(p, dmin, cap, pairs, &branches[i], limit, Some((&settled, i)));
                if matches!(result.0, Flow::Found | Flow::OutOfBudget) {
                    settled.fetch_min(i, Ordering::Relaxed);
                }
                *results[i].lock().expect("result slot") = Some(result);
            });
        }
    });
    for slot in results {
        let (flow, nodes, prunes, graph) = slot
            .into_inner()
            .expect("result slot")
            .expect("every branch before the settling one runs");
        stats.nodes += nodes;
        stats.prunes += prunes;
        if stats.nodes > budget || matches!(flow, Flow::OutOfBudget | Flow::Cancelled) {
            stats.nodes = budget;
            return ReductionVerdict::Inconclusive;
        }
        if let Flow::Found = flow {
            return ReductionVerdict::Found(graph.expect("found branch carries a graph"));
        }
    }
    ReductionVerdict::Exhausted
}

fn run_branch(
    p: usize,
    dmin: usize,
    cap: usize,
    pairs: &[(usize, usize)],
    b: &Snapshot,
    limit: u64,
    cancel: Option<(&AtomicUsize, usize)>,
) -> BranchResult {
    let mut search = Search::new(p, dmin, cap, pairs, b.d0, limit);
    search.adj = b.adj;
    search.deg = b.deg;
    search.cancel = cancel;
    let flow = search.dfs(b.pos);
    let graph = matches!(flow, Flow::Found).then(|| search.graph());
    (flow, search.nodes, search.prunes, graph)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Flow {
    Continue,
    Found,
    OutOfBudget,
    Cancelled,
}

#[derive(Clone)]
struct Snapshot {
    d0: usize,
    pos: usize,
    adj: [u64; 64],
    deg: [usize; 64],
}

struct Search<'a> {
    p: usize,
    dmin: usize,
    cap: usize,
    pairs: &'a [(usize, usize)],
    d0: usize,
    adj: [u64; 64],
    deg: [usize; 64],
    nodes: u64,
    prunes: u64,
    limit: u64,
    split: Option<usize>,
    branches: Vec<Snapshot>,
    cancel: Option<(&'a AtomicUsize, usize)>,
}

fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Vertices strictly greater than `v`, within `0..p`.
fn above(v: usize, p: usize) -> u64 {
    let all = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
    if v >= 63 {
        0
    } else {
        all & !((2u64 << v) - 1)
    }
}

impl<'a> Search<'a> {
    fn new(p: usize, dmin: usize, cap: usize, pairs: &'a [(usize, usize)], d0: usize, limit: u64) -> Self {
        Self {
            p,
            dmin,
            cap,
            pairs,
            d0,
            adj: [0; 64],
            deg: [0; 64],
            nodes: 0,
            prunes: 0,
            limit,
            split: None,
            branches: Vec::new(),
            cancel: None,
        }
    }

    /// 0 for vertex 0, 1 for its neighbors, 2 for its non-neighbors.
    fn group(&self, v: usize) -> u8 {
        match v {
            0 => 0,
            v if v <= self.d0 => 1,
            _ => 2,
        }
    }

    fn root(&mut self) -> Flow {
        for v in 1..=self.d0 {
            self.add(0, v);
        }
        if !self.feasible(0, self.p - 1) {
            self.prunes += 1;
            self.nodes += 1;
            return Flow::Continue;
        }
        self.dfs(0)
    }

    fn add(&mut self, u: usize, v: usize) {
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
        self.deg[u] += 1;
        self.deg[v] += 1;
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
        self.deg[u] -= 1;
        self.deg[v] -= 1;
    }

    fn dfs(&mut self, pos: usize) -> Flow {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Flow::OutOfBudget;
        }
        if self.nodes & 1023 == 0 {
            if let Some((settled, me)) = self.cancel {
                if settled.load(Ordering::Relaxed) < me {
                    return Flow::Cancelled;
                }
            }
        }
        if self.split == Some(pos) {
            self.branches.push(Snapshot {
                d0: self.d0,
                pos,
                adj: self.adj,
                deg: self.deg,
            });
            return Flow::Continue;
        }
        if pos == self.pairs.len() {
            return if (0..self.p).all(|v| self.deg[v] >= self.dmin) {
                Flow::Found
            } else {
                Flow::Continue
            };
        }
        let (r, c) = self.pairs[pos];
        // non-edge first
        if self.row_end_ok(r, c) && self.feasible(r, c) {
            let flow = self.dfs(pos + 1);
            if flow != Flow::Continue {
                return flow;
            }
        } else {
            self.prunes += 1;
        }
        self.add(r, c);
        if self.edge_ok(r, c) && self.row_end_ok(r, c) && self.feasible(r, c) {
            let flow = self.dfs(pos + 1);
            if flow != Flow::Continue {
                self.remove(r, c);
                return flow;
            }
        } else {
            self.prunes += 1;
        }
        self.remove(r, c);
        Flow::Continue
    }

    /// Local checks after inserting edge `rc`.
    fn edge_ok(&self, r: usize, c: usize) -> bool {
        if self.deg[r] > self.d0 || self.deg[c] > self.d0 {
            return false;
        }
        if r >= 2 && self.group(r) == self.group(r - 1) && self.deg[r] > self.deg[r - 1] {
            return false;
        }
        for u in [r, c] {
            let row = self.adj[u];
            let mut rest = row;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if (row | self.adj[x]).count_ones() as usize > self.cap {
                    return false;
                }
            }
        }
        true
    }

    /// When row `r` is complete, its degree is final.
    fn row_end_ok(&self, r: usize, c: usize) -> bool {
        if c + 1 != self.p {
            return true;
        }
        if self.deg[r] < self.dmin {
            return false;
        }
        let next = r + 1;
        !(next < self.p && self.group(next) == self.group(r) && self.deg[next] > self.deg[r])
    }

    /// Pairs still undecided after `(r, c)`, seen from vertex `v >= r`.
    fn undecided(&self, v: usize, r: usize, c: usize) -> u64 {
        if v == r {
            above(c, self.p)
        } else {
            let mut m = above(r, self.p) & !bit(v);
            if v > c {
                m |= bit(r);
            }
            m
        }
    }

    /// Every vertex with open pairs can still reach `dmin`. A pair `vw` can
    /// only become an edge if neither endpoint is at `d0`, the new edge's
    /// union fits, and no saturated edge at `v` (or `w`) would grow. Beyond
    /// that, each edge `vx` must have room in its union for the new
    /// neighbors `v` still needs from outside `N(v) ∪ N(x)`.
    fn feasible(&self, r: usize, c: usize) -> bool {
        let mut allowed = [u64::MAX; 64];
        for v in r..self.p {
            let row = self.adj[v];
            let mut rest = row;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let u = row | self.adj[x];
                if u.count_ones() as usize >= self.cap {
                    allowed[v] &= u;
                }
            }
        }
        for v in r..self.p {
            if self.deg[v] >= self.dmin {
                continue;
            }
            let need = self.dmin - self.deg[v];
            let mut cand = self.undecided(v, r, c) & allowed[v];
            let mut eligible = 0u64;
            while cand != 0 {
                let w = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                if self.deg[w] < self.d0
                    && allowed[w] & bit(v) != 0
                    && (self.adj[v] | self.adj[w] | bit(v) | bit(w)).count_ones() as usize <= self.cap
                {
                    eligible |= bit(w);
                }
            }
            if (eligible.count_ones() as usize) < need {
                return false;
            }
            let row = self.adj[v];
            let mut rest = row;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let u = row | self.adj[x];
                let inside = (eligible & u).count_ones() as usize;
                if need > inside && need - inside > self.cap - u.count_ones() as usize {
                    return false;
                }
            }
        }
        true
    }

    fn graph(&self) -> Graph {
        let edges = (0..self.p).flat_map(|u| {
            let row = self.adj[u] & above(u, self.p);
            (u + 1..self.p).filter(move |&v| row & bit(v) != 0).map(move |v| (u, v))
        });
        Graph::from_edges(self.p, edges).expect("order within cap")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All graphs on `p <= 7` vertices by brute force.
    fn brute_exists(p: usize, d: usize, s: usize) -> bool {
        let pairs: Vec<(usize, usize)> = (0..p).flat_map(|u| (u + 1..p).map(move |v| (u, v))).collect();
        (0u64..1 << pairs.len()).any(|mask| {
            let g = Graph::from_edges(p, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap();
            g.min_degree() >= d && g.edges().all(|(u, v)| g.union_size(u, v) <= s)
        })
    }

    #[test]
    fn agrees_with_brute_force_on_small_orders() {
        for p in 1..=6 {
            for d in 0..p {
                for s in 0..=p {
                    let run = degree_union_search(p, d, s, u64::MAX, 1).unwrap();
                    let expected = brute_exists(p, d, s);
                    match &run.verdict {
                        ReductionVerdict::Found(g) => {
                            assert!(expected, "p={p} d={d} s={s}");
                            assert!(g.min_degree() >= d);
                            assert!(g.edges().all(|(u, v)| g.union_size(u, v) <= s));
                        }
                        ReductionVerdict::Exhausted => assert!(!expected, "p={p} d={d} s={s}"),
                        ReductionVerdict::Inconclusive => unreachable!(),
                    }
                }
            }
        }
    }

    #[test]
    fn worker_count_does_not_change_the_answer() {
        for (p, d, s) in [(10, 4, 6), (12, 5, 7), (15, 6, 9), (10, 5, 6)] {
            let one = degree_union_search(p, d, s, u64::MAX, 1).unwrap();
            let four = degree_union_search(p, d, s, u64::MAX, 4).unwrap();
            assert_eq!(one.verdict, four.verdict, "p={p} d={d} s={s}");
            assert_eq!(one.stats.nodes, four.stats.nodes);
        }
    }

    #[test]
    fn precondition_and_caps() {
        let s = DoubleStar::new(3, 3).unwrap();
        assert!(matches!(reduction_graph_exists(10, s, 10, 1), Err(Error::Usage(_))));
        assert!(matches!(degree_union_search(65, 1, 1, 10, 1), Err(Error::Resource(_))));
        let run = reduction_graph_exists(11, s, u64::MAX, 1).unwrap();
        assert_eq!(run.verdict, ReductionVerdict::Exhausted);
    }

    #[test]
    fn parameters_of_a_blowup() {
        let g = Graph::line_graph_complete(7).unwrap().blowup(3).unwrap();
        // 63 vertices, degree 3*11 - 1 = 32, union 3*15 = 45
        let s = reduction_parameters(&g).unwrap();
        assert_eq!((s.n(), s.m()), (30, 14));
        verify_reduction_graph(&g, s).unwrap();
    }
}
