//! Exhaustive cross-checks of the freeness tests and both search engines
//! against a brute-force embedding oracle on tiny complete graphs.

use dstar_core::graph::Graph;
use dstar_core::ramsey::{
    burr_witnesses, for_each_free_coloring, is_free_direct, is_free_lemma22, ramsey_exact,
    reduction_graph_exists, unique_color_property, verify_reduction_graph, ColoringSource,
    RamseyOptions, RamseyResult, ReductionVerdict,
};
use dstar_core::{DoubleStar, EdgeColoring};

fn star(n: usize, m: usize) -> DoubleStar {
    DoubleStar::new(n, m).unwrap()
}

fn pairs(p: usize) -> Vec<(usize, usize)> {
    (0..p).flat_map(|u| (u + 1..p).map(move |v| (u, v))).collect()
}

/// Per-vertex neighbor masks of both colors for coloring `bits` of `K_p`.
fn masks(p: usize, bits: u64, pairs: &[(usize, usize)]) -> [Vec<u32>; 2] {
    let mut blue = vec![0u32; p];
    let mut red = vec![0u32; p];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        let side = if bits >> i & 1 == 1 { &mut blue } else { &mut red };
        side[u] |= 1 << v;
        side[v] |= 1 << u;
    }
    [blue, red]
}

/// Tries to place the leaves directly: `n` leaves at `u` chosen among every
/// `n`-subset of its other neighbors, then `m` leaves at `v` from what is left.
fn embeds_at(nbr: &[u32], u: usize, v: usize, n: usize, m: usize) -> bool {
    if nbr[u] >> v & 1 == 0 {
        return false;
    }
    let a = nbr[u] & !(1 << v);
    let b = nbr[v] & !(1 << u);
    let mut sub = a;
    loop {
        if sub.count_ones() as usize == n && (b & !sub).count_ones() as usize >= m {
            return true;
        }
        if sub == 0 {
            return false;
        }
        sub = (sub - 1) & a;
    }
}

fn oracle_free(p: usize, bits: u64, pairs: &[(usize, usize)], n: usize, m: usize) -> bool {
    masks(p, bits, pairs).iter().all(|nbr| {
        pairs
            .iter()
            .all(|&(u, v)| !embeds_at(nbr, u, v, n, m) && !embeds_at(nbr, v, u, n, m))
    })
}

fn coloring(p: usize, bits: u64, pairs: &[(usize, usize)]) -> EdgeColoring {
    let blue = pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &e)| e);
    EdgeColoring::new(Graph::from_edges(p, blue).unwrap())
}

#[test]
fn direct_test_and_characterization_agree_with_embedding_on_k6() {
    let ps = pairs(6);
    let stars: Vec<_> = (0..=4)
        .flat_map(|n| (0..=n).map(move |m| (n, m)))
        .filter(|&(n, m)| n + 2 * m + 2 <= 6)
        .collect();
    assert_eq!(stars.len(), 7);
    for bits in 0..1u64 << 15 {
        let c = coloring(6, bits, &ps);
        for &(n, m) in &stars {
            let s = star(n, m);
            let expect = oracle_free(6, bits, &ps, n, m);
            assert_eq!(is_free_direct(&c, s), expect, "direct, bits {bits:#x}, {s}");
            assert_eq!(is_free_lemma22(&c, s).unwrap(), expect, "characterization, bits {bits:#x}, {s}");
        }
    }
}

#[test]
fn reduction_agrees_with_exhaustive_colorings_on_k6_and_k7() {
    for p in [6usize, 7] {
        let ps = pairs(p);
        for n in 0..p {
            for m in 0..=n {
                let s = star(n, m);
                if p < s.reduction_threshold() {
                    continue;
                }
                let mut free_with_first_blue = 0u64;
                let mut any = false;
                for bits in 0..1u64 << ps.len() {
                    if oracle_free(p, bits, &ps, n, m) {
                        any = true;
                        free_with_first_blue += bits & 1;
                    }
                }
                let run = reduction_graph_exists(p, s, u64::MAX, 1).unwrap();
                match &run.verdict {
                    ReductionVerdict::Found(g) => {
                        assert!(any, "p={p} {s}: reduction found a graph, oracle found no free coloring");
                        verify_reduction_graph(g, s).unwrap();
                        assert!(is_free_direct(&EdgeColoring::new(g.clone()), s));
                    }
                    ReductionVerdict::Exhausted => assert!(!any, "p={p} {s}: oracle found a free coloring"),
                    ReductionVerdict::Inconclusive => panic!("unbounded search cannot be inconclusive"),
                }
                // The naive engine fixes pair {0,1} blue.
                let mut naive = 0u64;
                let (done, _) = for_each_free_coloring(p, s, u64::MAX, |_| naive += 1).unwrap();
                assert!(done);
                assert_eq!(naive, free_with_first_blue, "p={p} {s}: naive enumeration count");
            }
        }
    }
}

#[test]
fn burr_colorings_are_free() {
    for n in 1..=6 {
        for m in 1..=n {
            let s = star(n, m);
            let ws = burr_witnesses(s);
            assert_eq!(ws.len(), 2);
            assert_eq!(ws[0].order(), n + 2 * m + 1);
            assert_eq!(ws[1].order(), 2 * n);
            for w in &ws {
                assert!(is_free_direct(w, s), "{s} on {} vertices", w.order());
            }
            assert_eq!(ws.iter().map(EdgeColoring::order).max().unwrap() + 1, s.burr_bound());
        }
    }
    for k in 1..=5 {
        assert_eq!(star(2 * k - 1, k - 1).burr_bound(), 4 * k - 1);
    }
    assert_eq!(burr_witnesses(star(4, 0)).len(), 1);
}

#[test]
fn low_color_property_on_k6_for_single_edge_bridges() {
    let report = unique_color_property(6, star(1, 1), ColoringSource::Exhaustive { budget: u64::MAX }).unwrap();
    assert!(report.complete);
    assert!(report.holds(), "{:?}", report.counterexample);
    // r(S(1,1)) = 5, so the property holds vacuously here.
    assert_eq!(report.free_checked, 0);

    let sampled = unique_color_property(8, star(2, 2), ColoringSource::Sampled { count: 20_000, seed: 3 }).unwrap();
    assert_eq!(sampled.examined, 20_000);
    assert!(sampled.holds());
}

#[test]
fn small_exact_values_match_the_closed_form() {
    for (n, m, value) in [(1, 1, 5), (2, 1, 6), (2, 2, 8), (3, 1, 7), (3, 2, 9)] {
        let s = star(n, m);
        match ramsey_exact(s, &RamseyOptions::default()).unwrap() {
            RamseyResult::Exact(cert) => {
                assert_eq!(cert.value, value, "{s}");
                assert_eq!(cert.witness.order(), value - 1);
                assert!(is_free_direct(&cert.witness, s));
                assert_eq!(cert.exhaustion.order, value);
            }
            RamseyResult::Inconclusive(b) => panic!("{s}: {}", b.reason),
        }
    }
}
