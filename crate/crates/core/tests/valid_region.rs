use dstar_core::graph::RegularBaseSpec;
use dstar_core::rng::SeededRng;
use dstar_core::scalar::{parse_rational, rat};
use dstar_core::validity::{
    check_invalid_region, cinf_upper, classify_point, family_c5, family_lk7, frontier_search, known_valid,
    random_dense_graph, sparsify_point, theorem35_property, theorem35_sweep, Family, InvalidPointTable,
    PointStatus, Provenance, ValidPoint,
};
use dstar_core::{Graph, Profile, Rational};
use proptest::prelude::*;

fn pt(d: &str, e: &str) -> Profile {
    Profile::new(parse_rational(d).unwrap(), parse_rational(e).unwrap())
}

fn p_grid() -> impl Iterator<Item = Rational> {
    (0..100).map(|k| rat(k, 99))
}

/// Rows 1-9 are invalid points; the last row only strictly above it, so an
/// edgeless pair at (1/2, 1) touching it is no contradiction.
fn dominates_some_row(point: &Profile) -> Option<usize> {
    let table = InvalidPointTable::standard();
    let rows = table.rows();
    let last = rows.len() - 1;
    rows.iter()
        .enumerate()
        .position(|(i, row)| {
            point.dominates(row) && (i < last || (point.delta > row.delta && point.eta > row.eta))
        })
        .map(|i| i + 1)
}

#[test]
fn families_match_the_general_sparsification_formula() {
    for p in p_grid() {
        assert_eq!(family_c5(&p).unwrap().point, sparsify_point(&RegularBaseSpec::c5(), &p).unwrap().point);
        assert_eq!(family_lk7(&p).unwrap().point, sparsify_point(&RegularBaseSpec::lk7(), &p).unwrap().point);
    }
    let k2 = RegularBaseSpec::from_graph(Graph::complete(2).unwrap()).unwrap();
    let v = sparsify_point(&k2, &rat(1, 1)).unwrap();
    assert_eq!(v.point, Profile::new(rat(1, 1), rat(0, 1)));
    assert!(matches!(v.provenance, Provenance::Sparsified { base_order: 2, .. }));
}

#[test]
fn family_examples() {
    assert_eq!(family_c5(&rat(1, 1)).unwrap().point, Profile::new(rat(3, 5), rat(1, 5)));
    assert_eq!(family_c5(&rat(0, 1)).unwrap().point, Profile::new(rat(1, 5), rat(3, 5)));
    assert_eq!(family_c5(&rat(1, 2)).unwrap().point, Profile::new(rat(2, 5), rat(2, 5)));
    assert_eq!(family_lk7(&rat(1, 1)).unwrap().point, Profile::new(rat(11, 21), rat(6, 21)));
    assert_eq!(family_lk7(&rat(0, 1)).unwrap().point, Profile::new(rat(1, 21), rat(19, 21)));
    assert_eq!(family_lk7(&rat(19, 20)).unwrap().point, Profile::new(rat(1, 2), rat(171, 560)));
    assert!(family_c5(&rat(11, 10)).is_err());
    assert!(family_lk7(&rat(-1, 10)).is_err());
}

#[test]
fn no_family_point_reaches_an_invalid_row() {
    for p in (0..=1000).map(|k| rat(k, 1000)) {
        for family in [Family::C5, Family::LK7] {
            let point = family.point(p.clone());
            assert_eq!(dominates_some_row(&point), None, "{family:?} at p = {p}");
        }
    }
}

#[test]
fn frontier_witnesses_stay_clear_of_the_table() {
    for order in 2..=8 {
        let frontier = frontier_search(order, 1).unwrap();
        assert!(!frontier.is_empty());
        for (i, a) in frontier.iter().enumerate() {
            a.valid_point().verify().unwrap();
            assert_eq!(a.witness.measure_profile().unwrap(), a.profile);
            assert_eq!(dominates_some_row(&a.profile), None, "order {order}: {}", a.profile);
            for (j, b) in frontier.iter().enumerate() {
                assert!(i == j || !a.profile.dominates(&b.profile), "order {order}: Pareto audit");
            }
            // Sparsifying a regular witness once must not reach the table either.
            if let Ok(base) = RegularBaseSpec::from_graph(a.witness.clone()) {
                for p in (0..=20).map(|k| rat(k, 20)) {
                    let v = sparsify_point(&base, &p).unwrap();
                    assert_eq!(dominates_some_row(&v.point), None, "order {order}, p = {p}");
                }
            }
        }
    }
    let five = frontier_search(5, 1).unwrap();
    assert!(five.iter().any(|f| f.profile == Profile::new(rat(3, 5), rat(1, 5))));
    let two = frontier_search(2, 1).unwrap();
    assert!(two.iter().any(|f| f.profile == Profile::new(rat(1, 1), rat(0, 1))));
    assert!(frontier_search(11, 1).is_err());
}

#[test]
fn frontier_does_not_depend_on_worker_count() {
    let one: Vec<_> = frontier_search(7, 1).unwrap().into_iter().map(|f| (f.profile, f.witness)).collect();
    let four: Vec<_> = frontier_search(7, 4).unwrap().into_iter().map(|f| (f.profile, f.witness)).collect();
    assert_eq!(one, four);
}

#[test]
fn invalid_region_examples() {
    assert!(check_invalid_region(&pt("0.5406", "0.2703")));
    assert!(check_invalid_region(&pt("0.51", "0.31")));
    assert!(!check_invalid_region(&pt("0.3", "0.3")));
    assert_eq!(classify_point(&pt("0.5406", "0.2703")).unwrap(), PointStatus::InvalidByTable(9));
    assert_eq!(classify_point(&pt("0.52", "0.29")).unwrap(), PointStatus::Unknown);
    assert!(matches!(classify_point(&pt("0.5", "0.3")).unwrap(), PointStatus::Valid(_)));
}

#[test]
fn min_degree_union_property_on_small_and_random_graphs() {
    assert!(theorem35_property(&Graph::complete(4).unwrap()).unwrap());
    let b = Graph::cycle(5).unwrap().blowup(3).unwrap();
    assert_eq!(b.min_degree(), 8);
    assert!(theorem35_property(&b).unwrap());
    assert!(theorem35_property(&Graph::cycle(5).unwrap()).is_err());

    assert!(theorem35_sweep(8).unwrap() > 0);
    let mut rng = SeededRng::new(35);
    for i in 0..500 {
        let order = 10 + i % 51;
        let g = random_dense_graph(order, &mut rng).unwrap();
        assert!(2 * g.min_degree() > order);
        assert!(theorem35_property(&g).unwrap(), "order {order}");
    }
}

#[test]
fn cinf_certificate() {
    let (c, p) = cinf_upper();
    assert_eq!((c.clone(), p.clone()), (rat(389, 560), rat(19, 20)));
    assert_eq!(Family::LK7.point(p).delta, rat(1, 2));
    assert!(c > rat(2, 3));
}

proptest! {
    /// Everything below a known valid point is accepted again.
    #[test]
    fn membership_is_downward_closed(p in 0i64..=1000, lk7 in any::<bool>(), a in 0i64..=100, b in 0i64..=100) {
        let family = if lk7 { Family::LK7 } else { Family::C5 };
        let top = family.point(rat(p, 1000));
        let below = Profile::new(&top.delta * rat(a, 100), &top.eta * rat(b, 100));
        prop_assert!(known_valid(&top).is_some());
        prop_assert!(known_valid(&below).is_some());
        prop_assert!(!check_invalid_region(&below));
    }

    #[test]
    fn measured_witnesses_certify_everything_below(order in 3usize..=7, pick in any::<prop::sample::Index>(), a in 0i64..=100, b in 0i64..=100) {
        let frontier = frontier_search(order, 1).unwrap();
        let f = &frontier[pick.index(frontier.len())];
        let below = ValidPoint {
            point: Profile::new(&f.profile.delta * rat(a, 100), &f.profile.eta * rat(b, 100)),
            provenance: Provenance::Measured(f.witness.clone()),
        };
        prop_assert!(below.verify().is_ok());
    }
}
