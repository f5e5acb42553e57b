//! Inner and outer approximations of the set of valid `(delta, eta)` points.
//!
//! A graph `G` realizes `(delta, eta)` when `deg(v) + 1 >= delta |G|` for all
//! `v` and `|N(u) ∪ N(v)| <= (1 - eta) |G|` for all edges. The valid set is
//! the closure of the realized points and is downward closed. Points above
//! a row of [`InvalidPointTable`] are known not to be valid.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{usage, Error, Result};
use crate::graph::enumerate::{for_each_descendant, for_each_graph, prefixes, SmallGraph};
use crate::graph::{DeltaEtaProfile, Graph, ProfileCounts, RegularBaseSpec};
use crate::rng::SeededRng;
use crate::scalar::{parse_rational, rat, Scalar};

/// Largest order [`frontier_search`] accepts.
pub const FRONTIER_MAX_ORDER: usize = 10;

/// The ten invalid points: nine computed ones plus `(1/2, 1/3)`.
///
/// The printed decimals are read as exact rationals. The first nine rows
/// are invalid themselves, so everything componentwise above them is too.
/// The last row is only a limit: `(1/2 + e, 1/3 + e)` is invalid for every
/// `e > 0`, while `(1/2, 1/2)` itself is realized by two disjoint cliques.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidPointTable {
    rows: Vec<DeltaEtaProfile>,
}

const TABLE_DECIMALS: [(&str, &str); 9] = [
    ("0.505", "0.3164"),
    ("0.510", "0.3080"),
    ("0.515", "0.3011"),
    ("0.520", "0.2944"),
    ("0.525", "0.2883"),
    ("0.530", "0.2823"),
    ("0.535", "0.2766"),
    ("0.540", "0.2710"),
    ("0.5406", "0.2703"),
];

impl InvalidPointTable {
    pub fn standard() -> Self {
        let mut rows: Vec<DeltaEtaProfile> = TABLE_DECIMALS
            .iter()
            .map(|(d, e)| DeltaEtaProfile::new(parse_rational(d).expect("table"), parse_rational(e).expect("table")))
            .collect();
        rows.push(DeltaEtaProfile::new(rat(1, 2), rat(1, 3)));
        Self { rows }
    }

    pub fn rows(&self) -> &[DeltaEtaProfile] {
        &self.rows
    }

    /// Row `i`, 1-based.
    pub fn row(&self, i: usize) -> Option<&DeltaEtaProfile> {
        i.checked_sub(1).and_then(|k| self.rows.get(k))
    }

    /// Rows that are invalid points in their own right (all but the last).
    pub fn is_attained(&self, i: usize) -> bool {
        i >= 1 && i < self.rows.len()
    }

    /// First row certifying that `point` is invalid: componentwise `>=`
    /// for the computed rows, strictly `>` in both coordinates for the
    /// limit row.
    pub fn invalid_row(&self, point: &DeltaEtaProfile) -> Option<usize> {
        self.rows.iter().enumerate().find_map(|(k, row)| {
            let hit = if self.is_attained(k + 1) {
                point.dominates(row)
            } else {
                point.delta > row.delta && point.eta > row.eta
            };
            hit.then_some(k + 1)
        })
    }

    /// First row with `point >= row` componentwise, i.e. `point` lies in
    /// the closure of the invalid set as certified by the table.
    pub fn closure_row(&self, point: &DeltaEtaProfile) -> Option<usize> {
        self.rows.iter().position(|row| point.dominates(row)).map(|k| k + 1)
    }
}

/// Whether the table certifies `point` as invalid.
pub fn check_invalid_region(point: &DeltaEtaProfile) -> bool {
    InvalidPointTable::standard().invalid_row(point).is_some()
}

/// The two regular bases the explicit families come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    C5,
    LK7,
}

impl Family {
    pub fn base(&self) -> RegularBaseSpec {
        match self {
            Family::C5 => RegularBaseSpec::c5(),
            Family::LK7 => RegularBaseSpec::lk7(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::C5 => "c5",
            Family::LK7 => "lk7",
        }
    }

    /// The family point at `p` in closed form:
    /// C5: `((1+2p)/5, (3-2p)/5)`; L(K7): `((1+10p)/21, (19-18p+5p^2)/21)`.
    pub fn point<S: Scalar>(&self, p: S) -> DeltaEtaProfile<S> {
        let c = S::from_int;
        match self {
            Family::C5 => DeltaEtaProfile::new(
                (c(1) + c(2) * p.clone()) / c(5),
                (c(3) - c(2) * p) / c(5),
            ),
            Family::LK7 => DeltaEtaProfile::new(
                (c(1) + c(10) * p.clone()) / c(21),
                (c(19) - c(18) * p.clone() + c(5) * p.clone() * p) / c(21),
            ),
        }
    }

    /// Smallest `p` in `[0,1]` with `delta(p) >= delta`, if any. Both
    /// families have `delta` increasing and `eta` decreasing in `p`.
    fn least_p_reaching(&self, delta: &BigRational) -> Option<BigRational> {
        let p = match self {
            Family::C5 => (delta * rat(5, 1) - rat(1, 1)) / rat(2, 1),
            Family::LK7 => (delta * rat(21, 1) - rat(1, 1)) / rat(10, 1),
        };
        let p = if p < BigRational::zero() { BigRational::zero() } else { p };
        (p <= BigRational::one()).then_some(p)
    }

    /// Whether some point of the family dominates `point`.
    pub fn covers(&self, point: &DeltaEtaProfile) -> Option<BigRational> {
        let p = self.least_p_reaching(&point.delta)?;
        (self.point(p.clone()).eta >= point.eta).then_some(p)
    }
}

/// Where a valid point comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Realized by this graph.
    Measured(Graph),
    /// Random sparsified blow-up family at density `p`.
    Family { family: Family, p: BigRational },
    /// Sparsified blow-up of some other regular base.
    Sparsified { base_order: usize, p: BigRational },
    /// Closed-form construction, described in words.
    Derived(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidPoint {
    pub point: DeltaEtaProfile,
    pub provenance: Provenance,
}

impl ValidPoint {
    /// For measured points: the graph still realizes the point.
    pub fn verify(&self) -> Result<()> {
        if let Provenance::Measured(g) = &self.provenance {
            let measured = g.measure_profile()?;
            if !measured.dominates(&self.point) {
                return Err(Error::Validation(format!(
                    "witness realizes {measured}, which does not dominate {}",
                    self.point
                )));
            }
        }
        Ok(())
    }
}

fn check_unit(p: &BigRational) -> Result<()> {
    if *p < BigRational::zero() || *p > BigRational::one() {
        return Err(usage(format!("density p = {p} outside [0, 1]")));
    }
    Ok(())
}

pub fn family_c5(p: &BigRational) -> Result<ValidPoint> {
    family_point(Family::C5, p)
}

pub fn family_lk7(p: &BigRational) -> Result<ValidPoint> {
    family_point(Family::LK7, p)
}

pub fn family_point(family: Family, p: &BigRational) -> Result<ValidPoint> {
    check_unit(p)?;
    Ok(ValidPoint {
        point: family.point(p.clone()),
        provenance: Provenance::Family {
            family,
            p: p.clone(),
        },
    })
}

/// The sparsified blow-up point of a `delta n`-regular base on `n`
/// vertices with edge unions `<= (1 - eta) n`:
/// `(1/n + p delta, 1 - 2/n - 2(delta - 1/n) p + (2 delta + eta - 1) p^2)`.
pub fn sparsify_formula<S: Scalar>(n: S, delta: S, eta: S, p: S) -> DeltaEtaProfile<S> {
    let one = S::one();
    let two = S::from_int(2);
    let inv = one.clone() / n;
    let d = inv.clone() + p.clone() * delta.clone();
    let e = one.clone() - two.clone() * inv.clone() - two.clone() * (delta.clone() - inv) * p.clone()
        + (two * delta + eta - one) * p.clone() * p;
    DeltaEtaProfile::new(d, e)
}

pub fn sparsify_point(base: &RegularBaseSpec, p: &BigRational) -> Result<ValidPoint> {
    check_unit(p)?;
    let spec = RegularBaseSpec::new(base.graph.clone(), base.delta_reg.clone(), base.eta.clone())?;
    let n = BigRational::from_integer(BigInt::from(spec.n));
    let point = sparsify_formula(n, spec.delta_reg.clone(), spec.eta.clone(), p.clone());
    let provenance = if spec == RegularBaseSpec::c5() {
        Provenance::Family {
            family: Family::C5,
            p: p.clone(),
        }
    } else if spec == RegularBaseSpec::lk7() {
        Provenance::Family {
            family: Family::LK7,
            p: p.clone(),
        }
    } else {
        Provenance::Sparsified {
            base_order: spec.n,
            p: p.clone(),
        }
    };
    Ok(ValidPoint { point, provenance })
}

/// A Pareto-maximal profile found by exhaustive enumeration.
#[derive(Clone, Debug)]
pub struct FrontierPoint {
    pub counts: ProfileCounts,
    pub profile: DeltaEtaProfile,
    pub witness: Graph,
}

impl FrontierPoint {
    pub fn valid_point(&self) -> ValidPoint {
        ValidPoint {
            point: self.profile.clone(),
            provenance: Provenance::Measured(self.witness.clone()),
        }
    }
}

/// Per minimum degree: the smallest max edge union seen, with the first
/// graph attaining it. `usize::MAX` marks "not seen"; an edgeless graph
/// counts as union 0.
type Best = Vec<Option<(usize, SmallGraph)>>;

fn record(best: &mut Best, g: &SmallGraph) {
    let d = g.min_degree();
    let u = g.max_edge_union().unwrap_or(0);
    match &best[d] {
        Some((b, _)) if *b <= u => {}
        _ => best[d] = Some((u, *g)),
    }
}

/// The Pareto frontier of `(delta, eta)` over all graphs of one order,
/// enumerated up to isomorphism. Work is split over canonical prefixes
/// and merged in prefix order, so the result does not depend on `threads`.
pub fn frontier_search(order: usize, threads: usize) -> Result<Vec<FrontierPoint>> {
    if order > FRONTIER_MAX_ORDER {
        return Err(Error::Resource(format!(
            "frontier search is capped at order {FRONTIER_MAX_ORDER}, got {order}"
        )));
    }
    if order < 2 {
        return Err(usage("profiles need at least 2 vertices"));
    }
    let split = order.min(6);
    let heads = prefixes(split)?;
    let partials: Vec<Best> = if threads <= 1 {
        heads
            .iter()
            .map(|h| {
                let mut best = vec![None; order];
                for_each_descendant(h, order, |g| record(&mut best, g));
                best
            })
            .collect()
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<std::sync::Mutex<Option<Best>>> = heads.iter().map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..threads.min(heads.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    let Some(h) = heads.get(i) else { break };
                    let mut best = vec![None; order];
                    for_each_descendant(h, order, |g| record(&mut best, g));
                    *slots[i].lock().expect("slot") = Some(best);
                });
            }
        });
        slots
            .into_iter()
            .map(|s| s.into_inner().expect("slot").expect("every prefix runs"))
            .collect()
    };
    let mut best: Best = vec![None; order];
    for part in partials {
        for (d, entry) in part.into_iter().enumerate() {
            if let Some((u, g)) = entry {
                if best[d].as_ref().map_or(true, |(b, _)| u < *b) {
                    best[d] = Some((u, g));
                }
            }
        }
    }
    // Pareto filter: walking down from the largest min degree, keep a
    // degree only if its union beats every larger degree's.
    let mut out = Vec::new();
    let mut floor = usize::MAX;
    for d in (0..order).rev() {
        if let Some((u, g)) = &best[d] {
            if *u < floor {
                floor = *u;
                let witness = g.to_graph();
                let counts = witness.profile_counts();
                out.push(FrontierPoint {
                    profile: counts.profile(),
                    counts,
                    witness,
                });
            }
        }
    }
    out.reverse();
    Ok(out)
}

/// For a graph with `2 deg(v) > |G|` everywhere: some edge has
/// `3 |N(u) ∪ N(v)| > 2 |G|`. Errors if the degree hypothesis fails.
pub fn theorem35_property(g: &Graph) -> Result<bool> {
    let n = g.order();
    if 2 * g.min_degree() <= n {
        return Err(usage(format!(
            "needs min degree > order/2, got min degree {} on {n} vertices",
            g.min_degree()
        )));
    }
    Ok(g.edges().any(|(u, v)| 3 * g.union_size(u, v) > 2 * n))
}

/// Checks the property on every graph of order `1..=max_order` meeting the
/// degree hypothesis. Returns how many graphs were checked; a failure is
/// reported as an internal error carrying the counterexample.
pub fn theorem35_sweep(max_order: usize) -> Result<u64> {
    let mut checked = 0u64;
    for order in 1..=max_order {
        let mut failure = None;
        for_each_graph(order, |sg| {
            if failure.is_some() || 2 * sg.min_degree() <= order {
                return;
            }
            let g = sg.to_graph();
            checked += 1;
            if !theorem35_property(&g).unwrap_or(false) {
                failure = Some(g);
            }
        })?;
        if let Some(g) = failure {
            return Err(Error::Internal(format!(
                "counterexample to the min-degree/union property: {}",
                crate::graph::io::to_graph6(&g)
            )));
        }
    }
    Ok(checked)
}

/// A random graph on `order` vertices with every degree above `order/2`:
/// `G(order, q)` for a random `q` in `[1/2, 1)`, then random edges added at
/// deficient vertices until the hypothesis holds.
pub fn random_dense_graph(order: usize, rng: &mut SeededRng) -> Result<Graph> {
    if order < 3 {
        return Err(usage("dense graphs need at least 3 vertices"));
    }
    let q = 0.5 + 0.5 * rng.next_f64();
    let mut adj = vec![vec![false; order]; order];
    for u in 0..order {
        for v in u + 1..order {
            if rng.next_f64() < q {
                adj[u][v] = true;
                adj[v][u] = true;
            }
        }
    }
    for u in 0..order {
        loop {
            let deg = adj[u].iter().filter(|&&b| b).count();
            if 2 * deg > order {
                break;
            }
            let free: Vec<usize> = (0..order).filter(|&v| v != u && !adj[u][v]).collect();
            let v = free[rng.below(free.len() as u64) as usize];
            adj[u][v] = true;
            adj[v][u] = true;
        }
    }
    let edges = (0..order).flat_map(|u| (u + 1..order).map(move |v| (u, v)));
    let edges: Vec<_> = edges.filter(|&(u, v)| adj[u][v]).collect();
    Graph::from_edges(order, edges)
}

/// Upper bound on `c_inf` from the L(K7) family: minimize
/// `1 - eta(p) = (2 + 18p - 5p^2)/21` subject to `delta(p) >= 1/2`.
/// The objective increases on `[0,1]` (derivative `(18 - 10p)/21 > 0`), so
/// the optimum is where `(1 + 10p)/21 = 1/2`. Returns `(c, p)`.
pub fn cinf_upper() -> (BigRational, BigRational) {
    let half = rat(1, 2);
    let p = (half * rat(21, 1) - rat(1, 1)) / rat(10, 1);
    debug_assert!(rat(18, 1) - rat(10, 1) * &p > BigRational::zero());
    let c = BigRational::one() - Family::LK7.point(p.clone()).eta;
    (c, p)
}

/// What is known about a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointStatus {
    /// Dominated by a known valid construction.
    Valid(ValidPoint),
    /// Certified invalid by a table row (1-based).
    InvalidByTable(usize),
    Unknown,
}

/// Downward-closed membership test against the known constructions: the
/// two families, disjoint cliques `(1/t, 1 - 1/t)`, edgeless graphs
/// `(1/t, 1)`, and the closure point `(0, 1)`.
pub fn known_valid(point: &DeltaEtaProfile) -> Option<ValidPoint> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if point.delta <= zero && point.eta <= one {
        return Some(ValidPoint {
            point: DeltaEtaProfile::new(zero, one),
            provenance: Provenance::Derived("limit of edgeless graphs (1/t, 1)".into()),
        });
    }
    for family in [Family::C5, Family::LK7] {
        if let Some(p) = family.covers(point) {
            return Some(ValidPoint {
                point: family.point(p.clone()),
                provenance: Provenance::Family { family, p },
            });
        }
    }
    // Largest t with 1/t >= delta.
    if point.delta > zero {
        let t = (one.clone() / &point.delta).floor().to_integer();
        if t >= BigInt::from(1) {
            let tq = BigRational::from_integer(t.clone());
            let clique = DeltaEtaProfile::new(one.clone() / &tq, one.clone() - one.clone() / &tq);
            if clique.dominates(point) {
                return Some(ValidPoint {
                    point: clique,
                    provenance: Provenance::Derived(format!("{t} disjoint cliques")),
                });
            }
            if t >= BigInt::from(2) && point.eta <= one {
                return Some(ValidPoint {
                    point: DeltaEtaProfile::new(one.clone() / &tq, one),
                    provenance: Provenance::Derived(format!("edgeless graph on {t} vertices")),
                });
            }
        }
    }
    None
}

/// Table first, then constructions.
pub fn classify_point(point: &DeltaEtaProfile) -> Result<PointStatus> {
    let (zero, one) = (BigRational::zero(), BigRational::one());
    if point.delta < zero || point.delta > one || point.eta < zero || point.eta > one {
        return Err(usage(format!("point {point} outside [0,1]^2")));
    }
    if let Some(row) = InvalidPointTable::standard().invalid_row(point) {
        return Ok(PointStatus::InvalidByTable(row));
    }
    Ok(known_valid(point).map_or(PointStatus::Unknown, PointStatus::Valid))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(d: &str, e: &str) -> DeltaEtaProfile {
        DeltaEtaProfile::new(parse_rational(d).unwrap(), parse_rational(e).unwrap())
    }

    #[test]
    fn table_rows_and_strict_limit_row() {
        let t = InvalidPointTable::standard();
        assert_eq!(t.rows().len(), 10);
        assert_eq!(t.invalid_row(&pt("0.5406", "0.2703")), Some(9));
        assert_eq!(t.invalid_row(&pt("0.51", "0.31")), Some(2));
        assert_eq!(t.invalid_row(&pt("0.3", "0.3")), None);
        assert_eq!(t.invalid_row(&pt("1/2", "1/3")), None);
        assert_eq!(t.closure_row(&pt("1/2", "1/3")), Some(10));
        assert_eq!(t.invalid_row(&pt("0.501", "0.34")), Some(10));
        assert_eq!(t.invalid_row(&pt("0.6", "0.34")), Some(1));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_point(&pt("0.5406", "0.2703")).unwrap(), PointStatus::InvalidByTable(9));
        assert_eq!(classify_point(&pt("0.52", "0.29")).unwrap(), PointStatus::Unknown);
        assert!(matches!(classify_point(&pt("3/5", "1/5")).unwrap(), PointStatus::Valid(_)));
        assert!(matches!(classify_point(&pt("1/2", "1/2")).unwrap(), PointStatus::Valid(_)));
        assert!(classify_point(&pt("1.2", "0")).is_err());
    }

    #[test]
    fn cinf_value() {
        assert_eq!(cinf_upper(), (rat(389, 560), rat(19, 20)));
    }

    #[test]
    fn frontier_small_orders() {
        let two = frontier_search(2, 1).unwrap();
        assert!(two.iter().any(|f| f.profile == pt("1", "0")));
        let five = frontier_search(5, 1).unwrap();
        assert!(five.iter().any(|f| f.profile == pt("3/5", "1/5")));
        assert!(frontier_search(11, 1).is_err());
        assert!(frontier_search(1, 1).is_err());
    }
}
