//! Isomorph-free enumeration of small graphs.
//!
//! Graphs grow one vertex at a time. A child `C = P + v` of a canonical
//! parent `P` is accepted iff deleting the *canonical deletion vertex* of `C`
//! (the maximum-degree vertex placed last by the canonical labeling) leaves a
//! graph isomorphic to `P`; isomorphic children of the same parent are merged
//! through their canonical codes. Every isomorphism class is then produced
//! exactly once, always in canonical form.
//!
//! Canonical labeling is a small individualization-refinement search:
//! equitable partition refinement, branching on the first non-singleton
//! cell, pruning with automorphisms found at equal leaves. The canonical code
//! is the largest upper-triangle bit string (column order: `(0,1), (0,2),
//! (1,2), (0,3), ...`) among the leaves.

use std::collections::HashSet;

use super::Graph;
use crate::error::{Error, Result};

/// Largest order the enumerator handles (the code must fit in 64 bits).
pub const MAX_ENUM_ORDER: usize = 11;

/// Graph on at most [`MAX_ENUM_ORDER`] vertices with `u16` adjacency rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: usize,
    adj: [u16; 16],
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= 16);
        Self { n, adj: [0; 16] }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn row(&self, v: usize) -> u16 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// `max |N(u) ∪ N(v)|` over edges, `None` when edgeless.
    pub fn max_edge_union(&self) -> Option<usize> {
        let mut best = None;
        for u in 0..self.n {
            let mut nb = self.adj[u] & !((2u16 << u) - 1);
            while nb != 0 {
                let v = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                let s = (self.adj[u] | self.adj[v]).count_ones() as usize;
                best = Some(best.map_or(s, |b: usize| b.max(s)));
            }
        }
        best
    }

    /// Upper-triangle bit string in column order under labeling `lab`
    /// (`lab[i]` is the vertex placed at position `i`).
    fn code_under(&self, lab: &[usize]) -> u64 {
        let mut code = 0u64;
        for j in 1..self.n {
            let row = self.adj[lab[j]];
            for &li in &lab[..j] {
                code = (code << 1) | u64::from(row >> li & 1);
            }
        }
        code
    }

    fn relabeled(&self, lab: &[usize]) -> Self {
        let mut pos = [0usize; 16];
        for (i, &v) in lab.iter().enumerate() {
            pos[v] = i;
        }
        let mut out = Self::empty(self.n);
        for u in 0..self.n {
            let mut row = 0u16;
            let mut nb = self.adj[u];
            while nb != 0 {
                let v = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                row |= 1 << pos[v];
            }
            out.adj[pos[u]] = row;
        }
        out
    }

    /// Removes vertex `w`, shifting higher vertices down by one.
    fn without(&self, w: usize) -> Self {
        let mut out = Self::empty(self.n - 1);
        let low = (1u16 << w) - 1;
        let mut k = 0;
        for v in 0..self.n {
            if v == w {
                continue;
            }
            let r = self.adj[v];
            out.adj[k] = (r & low) | ((r >> 1) & !low);
            k += 1;
        }
        out
    }

    /// Canonical code and canonical labeling.
    pub fn canonical(&self) -> Canon {
        Canonizer::new(self).run()
    }

    pub fn canonical_form(&self) -> SmallGraph {
        self.relabeled(&self.canonical().lab)
    }

    pub fn to_graph(&self) -> Graph {
        let edges = (0..self.n).flat_map(|u| (u + 1..self.n).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)));
        Graph::from_edges(self.n.max(1), edges).expect("small graph")
    }

    pub fn from_graph(g: &Graph) -> Result<Self> {
        if g.order() > MAX_ENUM_ORDER {
            return Err(Error::Resource(format!(
                "order {} exceeds the enumerator cap {MAX_ENUM_ORDER}",
                g.order()
            )));
        }
        let mut s = Self::empty(g.order());
        for (u, v) in g.edges() {
            s.add_edge(u, v);
        }
        Ok(s)
    }
}

/// Result of canonical labeling.
#[derive(Clone, Debug)]
pub struct Canon {
    pub code: u64,
    /// `lab[i]` is the vertex placed at canonical position `i`.
    pub lab: Vec<usize>,
}

/// Ordered partition of the vertex set: `cells[i]` is a bitmask.
type Partition = Vec<u16>;

struct Canonizer<'a> {
    g: &'a SmallGraph,
    first: Option<(u64, Vec<usize>)>,
    best: Option<(u64, Vec<usize>)>,
    /// Automorphisms as images `gamma[v]`.
    autos: Vec<Vec<usize>>,
}

enum Walk {
    Continue,
    /// Abandon the search up to (and including) this depth's subtree.
    Unwind(usize),
}

impl<'a> Canonizer<'a> {
    fn new(g: &'a SmallGraph) -> Self {
        Self {
            g,
            first: None,
            best: None,
            autos: Vec::new(),
        }
    }

    fn run(mut self) -> Canon {
        let n = self.g.n;
        if n == 0 {
            return Canon { code: 0, lab: vec![] };
        }
        let all = if n == 16 { u16::MAX } else { (1u16 << n) - 1 };
        let root = self.refine(vec![all]);
        let mut fixed = Vec::new();
        self.search(root, &mut fixed, usize::MAX);
        let (code, lab) = self.best.expect("at least one leaf");
        Canon { code, lab }
    }

    /// Refines to the coarsest equitable partition finer than `cells`.
    /// Split cells keep their position and are ordered by neighbor-count
    /// signature, which makes the result labeling-invariant.
    fn refine(&self, mut cells: Partition) -> Partition {
        loop {
            let before = cells.len();
            let mut next = Vec::with_capacity(n_cells_hint(&cells));
            for &cell in &cells {
                if cell.count_ones() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut keyed: Vec<(Vec<u8>, usize)> = bits16(cell)
                    .map(|v| {
                        let row = self.g.adj[v];
                        let key = cells.iter().map(|&c| (row & c).count_ones() as u8).collect();
                        (key, v)
                    })
                    .collect();
                keyed.sort();
                let mut i = 0;
                while i < keyed.len() {
                    let mut mask = 0u16;
                    let mut j = i;
                    while j < keyed.len() && keyed[j].0 == keyed[i].0 {
                        mask |= 1 << keyed[j].1;
                        j += 1;
                    }
                    next.push(mask);
                    i = j;
                }
            }
            cells = next;
            if cells.len() == before {
                return cells;
            }
        }
    }

    fn search(&mut self, cells: Partition, fixed: &mut Vec<usize>, diverged: usize) -> Walk {
        let depth = fixed.len();
        let target = match cells.iter().position(|c| c.count_ones() > 1) {
            None => return self.leaf(&cells, diverged),
            Some(t) => t,
        };
        let on_first_path = diverged == usize::MAX;
        let mut tried: Vec<usize> = Vec::new();
        for (i, v) in bits16(cells[target]).enumerate() {
            if !tried.is_empty() && self.equivalent_to_tried(v, &tried, fixed) {
                continue;
            }
            tried.push(v);
            let mut child = cells.clone();
            child[target] &= !(1 << v);
            child.insert(target, 1 << v);
            let child = self.refine(child);
            fixed.push(v);
            // A path stays "on the first path" only through the first choice
            // at every level; `diverged` records where it left it.
            let child_diverged = if on_first_path && i == 0 { usize::MAX } else if on_first_path { depth } else { diverged };
            let walk = self.search(child, fixed, child_diverged);
            fixed.pop();
            if let Walk::Unwind(level) = walk {
                if level < depth {
                    return walk;
                }
            }
        }
        Walk::Continue
    }

    fn leaf(&mut self, cells: &Partition, diverged: usize) -> Walk {
        let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let code = self.g.code_under(&lab);
        let Some((first_code, first_lab)) = &self.first else {
            self.first = Some((code, lab.clone()));
            self.best = Some((code, lab));
            return Walk::Continue;
        };
        if code == *first_code {
            let gamma = automorphism(first_lab, &lab);
            self.autos.push(gamma);
            if diverged != usize::MAX {
                return Walk::Unwind(diverged);
            }
            return Walk::Continue;
        }
        let (best_code, best_lab) = self.best.as_ref().expect("best set with first");
        if code == *best_code {
            let gamma = automorphism(best_lab, &lab);
            self.autos.push(gamma);
        } else if code > *best_code {
            self.best = Some((code, lab));
        }
        Walk::Continue
    }

    /// Whether `v` lies in the orbit of an already tried vertex under the
    /// known automorphisms that fix every individualized vertex.
    fn equivalent_to_tried(&self, v: usize, tried: &[usize], fixed: &[usize]) -> bool {
        let n = self.g.n;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let mut any = false;
        for gamma in &self.autos {
            if fixed.iter().all(|&f| gamma[f] == f) {
                any = true;
                for x in 0..n {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, gamma[x]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }
}

fn n_cells_hint(cells: &Partition) -> usize {
    cells.len() + 4
}

fn bits16(mask: u16) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// Permutation mapping the leaf `a` onto the leaf `b` (both produce the same
/// relabeled graph, so it is an automorphism): `gamma[a[i]] = b[i]`.
fn automorphism(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut gamma = vec![0; a.len()];
    for (i, &v) in a.iter().enumerate() {
        gamma[v] = b[i];
    }
    gamma
}

/// Canonical deletion vertex: the maximum-degree vertex placed last by the
/// canonical labeling.
fn deletion_vertex(g: &SmallGraph, canon: &Canon) -> usize {
    let max_deg = (0..g.n).map(|v| g.degree(v)).max().unwrap_or(0);
    *canon
        .lab
        .iter()
        .rev()
        .find(|&&v| g.degree(v) == max_deg)
        .expect("nonempty graph")
}

/// Canonical children of a canonical graph `parent` (with code
/// `parent_code`) on one more vertex, each in canonical form with its code.
pub fn children(parent: &SmallGraph, parent_code: u64) -> Vec<(SmallGraph, u64)> {
    let k = parent.n;
    assert!(k < MAX_ENUM_ORDER);
    let degs: Vec<usize> = (0..k).map(|v| parent.degree(v)).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in 0u32..(1u32 << k) {
        let size = s.count_ones() as usize;
        // the new vertex must have maximum degree in the child
        if (0..k).any(|u| degs[u] + (s >> u & 1) as usize > size) {
            continue;
        }
        let mut child = *parent;
        child.n = k + 1;
        for u in 0..k {
            if s >> u & 1 == 1 {
                child.add_edge(u, k);
            }
        }
        let canon = child.canonical();
        if !seen.insert(canon.code) {
            continue;
        }
        let w = deletion_vertex(&child, &canon);
        let accept = w == k || child.without(w).canonical().code == parent_code;
        if accept {
            out.push((child.relabeled(&canon.lab), canon.code));
        }
    }
    out
}

/// All graphs on `order` vertices up to isomorphism, each in canonical form,
/// in a deterministic order.
pub fn for_each_graph<F: FnMut(&SmallGraph)>(order: usize, mut visit: F) -> Result<()> {
    check_order(order)?;
    if order == 0 {
        return Ok(());
    }
    let root = SmallGraph::empty(1);
    walk(&root, 0, order, &mut visit);
    Ok(())
}

fn walk<F: FnMut(&SmallGraph)>(g: &SmallGraph, code: u64, order: usize, visit: &mut F) {
    if g.n == order {
        visit(g);
        return;
    }
    for (child, child_code) in children(g, code) {
        walk(&child, child_code, order, visit);
    }
}

/// Canonical graphs on `order` vertices (materialized).
pub fn graphs_of_order(order: usize) -> Result<Vec<SmallGraph>> {
    let mut out = Vec::new();
    for_each_graph(order, |g| out.push(*g))?;
    Ok(out)
}

/// Canonical graphs at an intermediate order, with their codes, used to
/// split enumeration into independent subtrees.
pub fn prefixes(order: usize) -> Result<Vec<(SmallGraph, u64)>> {
    check_order(order)?;
    let mut level = vec![(SmallGraph::empty(1), 0u64)];
    for _ in 1..order.max(1) {
        level = level.iter().flat_map(|(g, c)| children(g, *c)).collect();
    }
    Ok(level)
}

/// Visits every graph of order `order` that descends from `prefix`.
pub fn for_each_descendant<F: FnMut(&SmallGraph)>(prefix: &(SmallGraph, u64), order: usize, mut visit: F) {
    walk(&prefix.0, prefix.1, order, &mut visit);
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ENUM_ORDER {
        return Err(Error::Resource(format!(
            "exhaustive enumeration is capped at {MAX_ENUM_ORDER} vertices, got {order}"
        )));
    }
    Ok(())
}
