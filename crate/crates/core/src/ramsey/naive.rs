//! Exhaustive search over 2-colorings of `K_p`.
//!
//! Edges are assigned in column order `(0,1), (0,2), (1,2), (0,3), ...`, so
//! after column `j` the coloring of `K_{j+1}` on `0..=j` is complete and can be
//! checked for a monochromatic double star (which would persist in every
//! extension). Edge `{0,1}` is fixed blue (color swap symmetry). When
//! `p >= n + 2m + 2`, no color degree of a free coloring exceeds `n + m`, and
//! branches violating that are cut.

use super::{Color, DoubleStar, EdgeColoring, SearchStats};
use crate::error::{usage, Result};
use crate::graph::Graph;

/// Orders above this are refused outright (`2^(p choose 2)` leaves).
pub const NAIVE_HARD_CAP: usize = 12;

/// How a bounded search ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Exhausted,
    BudgetExceeded,
}

struct Naive<'a, F> {
    p: usize,
    s: DoubleStar,
    degree_cap: Option<usize>,
    pairs: Vec<(usize, usize)>,
    blue: [u16; 16],
    red: [u16; 16],
    budget: u64,
    stats: SearchStats,
    visit: &'a mut F,
}

enum Flow {
    Go,
    Stop,
    OutOfBudget,
}

impl<F: FnMut(&EdgeColoring) -> bool> Naive<'_, F> {
    fn dfs(&mut self, k: usize) -> Flow {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            return Flow::OutOfBudget;
        }
        if k == self.pairs.len() {
            let coloring = self.coloring();
            return if (self.visit)(&coloring) { Flow::Go } else { Flow::Stop };
        }
        let (i, j) = self.pairs[k];
        let colors: &[Color] = if k == 0 { &[Color::Blue] } else { &[Color::Blue, Color::Red] };
        for &c in colors {
            self.set(i, j, c, true);
            if self.consistent(i, j, c) {
                match self.dfs(k + 1) {
                    Flow::Go => {}
                    other => {
                        self.set(i, j, c, false);
                        return other;
                    }
                }
            } else {
                self.stats.prunes += 1;
            }
            self.set(i, j, c, false);
        }
        Flow::Go
    }

    fn set(&mut self, i: usize, j: usize, c: Color, on: bool) {
        let class = match c {
            Color::Blue => &mut self.blue,
            Color::Red => &mut self.red,
        };
        if on {
            class[i] |= 1 << j;
            class[j] |= 1 << i;
        } else {
            class[i] &= !(1 << j);
            class[j] &= !(1 << i);
        }
    }

    fn consistent(&self, i: usize, j: usize, c: Color) -> bool {
        let class = match c {
            Color::Blue => &self.blue,
            Color::Red => &self.red,
        };
        if let Some(cap) = self.degree_cap {
            if class[i].count_ones() as usize > cap || class[j].count_ones() as usize > cap {
                return false;
            }
        }
        // column j complete: the coloring of 0..=j is final
        if i + 1 == j {
            return !has_mono_star(&self.blue, j + 1, self.s) && !has_mono_star(&self.red, j + 1, self.s);
        }
        true
    }

    fn coloring(&self) -> EdgeColoring {
        let edges = (0..self.p).flat_map(|u| {
            let row = self.blue[u];
            (u + 1..self.p).filter(move |&v| row >> v & 1 == 1).map(move |v| (u, v))
        });
        EdgeColoring::new(Graph::from_edges(self.p, edges).expect("valid order"))
    }
}

/// Monochromatic `S(n,m)` test on one color class given as masks over `0..k`.
fn has_mono_star(class: &[u16; 16], k: usize, s: DoubleStar) -> bool {
    let (n, m) = (s.n(), s.m());
    for u in 0..k {
        let nu = class[u];
        let du = nu.count_ones() as usize;
        let mut later = nu & !((2u16 << u) - 1);
        while later != 0 {
            let v = later.trailing_zeros() as usize;
            later &= later - 1;
            let dv = class[v].count_ones() as usize;
            let union = (nu | class[v]).count_ones() as usize;
            if union >= n + m + 2 && ((du > n && dv > m) || (dv > n && du > m)) {
                return true;
            }
        }
    }
    false
}

fn run<F: FnMut(&EdgeColoring) -> bool>(p: usize, s: DoubleStar, budget: u64, visit: &mut F) -> Result<(bool, SearchStats)> {
    if p < 2 || p > NAIVE_HARD_CAP {
        return Err(usage(format!("naive coloring search supports 2 <= p <= {NAIVE_HARD_CAP}, got {p}")));
    }
    let pairs = (1..p).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    let mut search = Naive {
        p,
        s,
        degree_cap: (p >= s.n() + 2 * s.m() + 2).then_some(s.n() + s.m()),
        pairs,
        blue: [0; 16],
        red: [0; 16],
        budget,
        stats: SearchStats::default(),
        visit,
    };
    let flow = search.dfs(0);
    let stats = search.stats;
    Ok((!matches!(flow, Flow::OutOfBudget), stats))
}

/// First `(n,m)`-free coloring of `K_p` in search order (blue `{0,1}`).
pub fn find_free_coloring(p: usize, s: DoubleStar, budget: u64) -> Result<(SearchOutcome<EdgeColoring>, SearchStats)> {
    let mut found = None;
    let (completed, stats) = run(p, s, budget, &mut |c: &EdgeColoring| {
        found = Some(c.clone());
        false
    })?;
    let outcome = match (found, completed) {
        (Some(c), _) => SearchOutcome::Found(c),
        (None, true) => SearchOutcome::Exhausted,
        (None, false) => SearchOutcome::BudgetExceeded,
    };
    Ok((outcome, stats))
}

/// Calls `visit` on every `(n,m)`-free coloring of `K_p` with `{0,1}` blue
/// (one representative per color-swap pair). Returns whether the search ran
/// to completion within `budget` nodes.
pub fn for_each_free_coloring<F: FnMut(&EdgeColoring)>(p: usize, s: DoubleStar, budget: u64, mut visit: F) -> Result<(bool, SearchStats)> {
    run(p, s, budget, &mut |c: &EdgeColoring| {
        visit(c);
        true
    })
}
