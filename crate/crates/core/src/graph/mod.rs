//! Simple undirected graphs with bit-packed adjacency rows, the standard
//! constructions (cycles, line graphs of complete graphs, blow-ups) and the
//! `(delta, eta)` profile measurement.

pub mod enumerate;
pub mod io;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::rng::{Bernoulli, SeededRng};
use crate::scalar::{rat, Scalar};

/// Hard cap on the order of any [`Graph`].
pub const MAX_ORDER: usize = 4096;

const WORD: usize = 64;

/// Simple undirected graph on vertices `0..order`.
///
/// Row `v` is a bitset of the open neighborhood `N(v)`. Rows are kept
/// symmetric and irreflexive by every constructor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    order: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    /// Edgeless graph.
    pub fn empty(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(usage("a graph needs at least one vertex"));
        }
        if order > MAX_ORDER {
            return Err(Error::Resource(format!(
                "order {order} exceeds the cap of {MAX_ORDER} vertices"
            )));
        }
        let words = order.div_ceil(WORD);
        Ok(Self {
            order,
            words,
            bits: vec![0; order * words],
        })
    }

    pub fn from_edges<I>(order: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(order)?;
        for (u, v) in edges {
            if u >= order || v >= order {
                return Err(usage(format!("edge {u}-{v} out of range for order {order}")));
            }
            if u == v {
                return Err(usage(format!("self-loop at vertex {u}")));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(order: usize) -> Result<Self> {
        let mut g = Self::empty(order)?;
        for u in 0..order {
            for v in u + 1..order {
                g.insert_edge(u, v);
            }
        }
        Ok(g)
    }

    /// The `n`-cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(usage(format!("a cycle needs at least 3 vertices, got {n}")));
        }
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Line graph of `K_t`: one vertex per pair `{a, b}` of `0..t` (listed
    /// lexicographically), adjacent when the pairs share an element.
    pub fn line_graph_complete(t: usize) -> Result<Self> {
        if t < 2 {
            return Err(usage(format!("L(K_t) needs t >= 2, got {t}")));
        }
        let pairs: Vec<(usize, usize)> = (0..t)
            .flat_map(|a| (a + 1..t).map(move |b| (a, b)))
            .collect();
        let mut g = Self::empty(pairs.len())?;
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for (j, &(c, d)) in pairs.iter().enumerate().skip(i + 1) {
                if a == c || a == d || b == c || b == d {
                    g.insert_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Complement within `K_order`.
    pub fn complement(&self) -> Self {
        let mut g = self.clone();
        for v in 0..self.order {
            let row = g.row_mut(v);
            for w in row.iter_mut() {
                *w = !*w;
            }
            clear_tail(row, self.order);
            row[v / WORD] &= !(1u64 << (v % WORD));
        }
        g
    }

    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.order && v < self.order);
        self.row_mut(u)[v / WORD] |= 1 << (v % WORD);
        self.row_mut(v)[u / WORD] |= 1 << (u % WORD);
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Adjacency row of `v` as packed 64-bit words (bit `w % 64` of word
    /// `w / 64` is set iff `vw` is an edge).
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    fn row_mut(&mut self, v: usize) -> &mut [u64] {
        &mut self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order && v < self.order && self.row(u)[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(0);
        (1..self.order).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(v))
    }

    /// Edges `(u, v)` with `u < v` in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.order).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// `|N(u) ∪ N(v)|` with open neighborhoods and no range checks.
    pub fn union_size(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// `|N(u) ∪ N(v)|` for distinct in-range `u`, `v` (adjacent or not).
    /// Open neighborhoods: when `uv` is an edge both endpoints are counted.
    pub fn neighborhood_union(&self, u: usize, v: usize) -> Result<usize> {
        if u >= self.order || v >= self.order {
            return Err(usage(format!(
                "vertex out of range: {u}, {v} (order {})",
                self.order
            )));
        }
        if u == v {
            return Err(usage("neighborhood_union needs two distinct vertices"));
        }
        Ok(self.union_size(u, v))
    }

    /// Largest `|N(u) ∪ N(v)|` over edges `uv`, with one maximizing edge.
    pub fn max_edge_union(&self) -> Option<(usize, (usize, usize))> {
        let mut best: Option<(usize, (usize, usize))> = None;
        for (u, v) in self.edges() {
            let s = self.union_size(u, v);
            if best.map_or(true, |(b, _)| s > b) {
                best = Some((s, (u, v)));
            }
        }
        best
    }

    /// Integer data behind [`Graph::measure_profile`].
    pub fn profile_counts(&self) -> ProfileCounts {
        ProfileCounts {
            order: self.order,
            min_degree: self.min_degree(),
            max_union: self.max_edge_union().map(|(s, _)| s),
        }
    }

    /// Largest `(delta, eta)` for which this is a `(delta, eta)`-graph:
    /// `delta = (min deg + 1) / order`, `eta = 1 - max_{uv} |N(u) ∪ N(v)| / order`.
    /// An edgeless graph has `eta = 1`.
    pub fn measure_profile(&self) -> Result<DeltaEtaProfile> {
        if self.order < 2 {
            return Err(usage("profiles are defined for graphs with at least 2 vertices"));
        }
        Ok(self.profile_counts().profile())
    }

    /// Blow-up: every vertex becomes a `k`-clique ("blob"), every edge a
    /// complete bipartite graph. Vertex `x` of the result lies in blob `x / k`.
    pub fn blowup(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(usage("blow-up multiplicity must be at least 1"));
        }
        let order = self.checked_blowup_order(k)?;
        let mut g = Self::empty(order)?;
        for a in 0..self.order {
            let mut pattern = vec![0u64; g.words];
            for b in self.neighbors(a).chain(std::iter::once(a)) {
                set_range(&mut pattern, b * k, (b + 1) * k);
            }
            for x in a * k..(a + 1) * k {
                let row = g.row_mut(x);
                row.copy_from_slice(&pattern);
                row[x / WORD] &= !(1u64 << (x % WORD));
            }
        }
        Ok(g)
    }

    fn checked_blowup_order(&self, k: usize) -> Result<usize> {
        match self.order.checked_mul(k) {
            Some(o) if o <= MAX_ORDER => Ok(o),
            _ => Err(Error::Resource(format!(
                "blow-up of a {}-vertex graph by {k} exceeds {MAX_ORDER} vertices",
                self.order
            ))),
        }
    }

    /// Relabels the graph: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.order {
            return Err(usage("permutation length differs from graph order"));
        }
        let mut seen = vec![false; self.order];
        for &p in perm {
            if p >= self.order || std::mem::replace(&mut seen[p], true) {
                return Err(usage("not a permutation"));
            }
        }
        Self::from_edges(self.order, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(p={}, edges=[", self.order)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + b)
            }
        })
    })
}

fn set_range(words: &mut [u64], lo: usize, hi: usize) {
    for x in lo..hi {
        words[x / WORD] |= 1 << (x % WORD);
    }
}

fn clear_tail(words: &mut [u64], order: usize) {
    let used = order % WORD;
    if used != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << used) - 1;
        }
    }
}

/// Minimum degree and maximum edge neighborhood union of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileCounts {
    pub order: usize,
    pub min_degree: usize,
    /// `None` for an edgeless graph.
    pub max_union: Option<usize>,
}

impl ProfileCounts {
    pub fn profile(&self) -> DeltaEtaProfile {
        let p = self.order as i64;
        DeltaEtaProfile {
            delta: rat(self.min_degree as i64 + 1, p),
            eta: match self.max_union {
                Some(s) => BigRational::one() - rat(s as i64, p),
                None => BigRational::one(),
            },
        }
    }
}

/// A pair `(delta, eta)`: realized by a graph, or claimed for one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeltaEtaProfile<S = BigRational> {
    pub delta: S,
    pub eta: S,
}

impl<S: Scalar> DeltaEtaProfile<S> {
    pub fn new(delta: S, eta: S) -> Self {
        Self { delta, eta }
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &Self) -> bool {
        self.delta >= other.delta && self.eta >= other.eta
    }
}

impl fmt::Display for DeltaEtaProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.delta, self.eta)
    }
}

/// A `d`-regular base graph on `n` vertices together with the parameters a
/// sparsified blow-up is predicted from.
///
/// `delta_reg = d / n` is the regular-degree fraction, not the profile's
/// `(d + 1) / n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularBaseSpec {
    pub graph: Graph,
    pub n: usize,
    pub delta_reg: BigRational,
    pub eta: BigRational,
}

impl RegularBaseSpec {
    /// Checks that `graph` is `(delta_reg * n)`-regular and that every edge
    /// satisfies `|N(u) ∪ N(v)| <= (1 - eta) n`.
    pub fn new(graph: Graph, delta_reg: BigRational, eta: BigRational) -> Result<Self> {
        let n = graph.order();
        let nq = BigRational::from_integer(BigInt::from(n));
        let degree = &delta_reg * &nq;
        if !degree.is_integer() || degree < BigRational::zero() {
            return Err(Error::Validation(format!(
                "delta_reg * n = {degree} is not a nonnegative integer"
            )));
        }
        for v in 0..n {
            if BigRational::from_integer(BigInt::from(graph.degree(v))) != degree {
                return Err(Error::Validation(format!(
                    "vertex {v} has degree {}, expected {degree}",
                    graph.degree(v)
                )));
            }
        }
        let cap = (BigRational::one() - &eta) * &nq;
        for (u, v) in graph.edges() {
            let s = graph.union_size(u, v);
            if BigRational::from_integer(BigInt::from(s)) > cap {
                return Err(Error::Validation(format!(
                    "edge {u}-{v} has |N(u) ∪ N(v)| = {s} > (1 - eta) n = {cap}"
                )));
            }
        }
        Ok(Self {
            graph,
            n,
            delta_reg,
            eta,
        })
    }

    /// Derives the tightest parameters of a regular graph.
    pub fn from_graph(graph: Graph) -> Result<Self> {
        let n = graph.order() as i64;
        let d = graph
            .regular_degree()
            .ok_or_else(|| Error::Validation("base graph is not regular".into()))?;
        let eta = match graph.max_edge_union() {
            Some((s, _)) => BigRational::one() - rat(s as i64, n),
            None => BigRational::one(),
        };
        Self::new(graph, rat(d as i64, n), eta)
    }

    /// `C5`: `n = 5`, `delta_reg = 2/5`, `eta = 1/5`.
    pub fn c5() -> Self {
        Self::new(Graph::cycle(5).expect("C5"), rat(2, 5), rat(1, 5)).expect("C5 parameters")
    }

    /// `L(K7)`: `n = 21`, `delta_reg = 10/21`, `eta = 6/21`.
    pub fn lk7() -> Self {
        Self::new(
            Graph::line_graph_complete(7).expect("L(K7)"),
            rat(10, 21),
            rat(6, 21),
        )
        .expect("L(K7) parameters")
    }
}

/// Parameters of a random sparsified blow-up.
#[derive(Clone, Debug)]
pub struct BlowupSpec {
    pub base: RegularBaseSpec,
    pub multiplicity: usize,
    pub prob: BigRational,
    pub seed: u64,
}

impl BlowupSpec {
    pub fn new(base: RegularBaseSpec, multiplicity: usize, prob: BigRational, seed: u64) -> Result<Self> {
        if multiplicity == 0 {
            return Err(usage("blow-up multiplicity must be at least 1"));
        }
        if prob < BigRational::zero() || prob > BigRational::one() {
            return Err(usage(format!("probability {prob} outside [0, 1]")));
        }
        Ok(Self {
            base,
            multiplicity,
            prob,
            seed,
        })
    }
}

/// Random sparsified blow-up of a regular base.
///
/// Vertex `x` lies in blob `x / k`. Same-blob pairs are always adjacent,
/// pairs over base non-edges never are, and each pair over a base edge is
/// kept independently with probability `prob`. Pairs are visited in
/// lexicographic order and only pairs over base edges consume randomness, so
/// `prob = 1` reproduces [`Graph::blowup`] bit for bit.
pub fn sparsified_blowup(spec: &BlowupSpec) -> Result<Graph> {
    let base = &spec.base.graph;
    let k = spec.multiplicity;
    let order = base.checked_blowup_order(k)?;
    let mut g = Graph::empty(order)?;
    let trial = Bernoulli::new(&spec.prob);
    let mut rng = SeededRng::new(spec.seed);
    for x in 0..order {
        let a = x / k;
        for y in x + 1..order {
            let b = y / k;
            let keep = if a == b {
                true
            } else if base.has_edge(a, b) {
                rng.trial(trial)
            } else {
                false
            };
            if keep {
                g.insert_edge(x, y);
            }
        }
    }
    Ok(g)
}
