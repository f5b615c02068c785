//! Engine-level invariants: resolution identities of the D/E families,
//! scan determinism, orientation covariance, and the cross-route checks that
//! are too heavy for unit tests.

use torkh_core::cache::Cache;
use torkh_core::engine::{kh_table, kh_table_cube};
use torkh_core::formulas::gcd;
use torkh_core::lee::{class_filtration_degree, deformed_scan_with_cycles, filtration_table};
use torkh_core::links::{
    braid_closure, dlink_braid, e_link_diagram, orientation_shift, torus_braid, BraidWord,
    LinkDiagram,
};
use torkh_core::ring::{RingSpec, QQ, ZZ};
use torkh_core::scan::{scan_complex, ScanOptions, Theory};
use torkh_core::table::BigradedTable;
use torkh_core::verify::{random_braid_corpus, verify_lower_bound, SplitMix64};

fn opts() -> ScanOptions {
    ScanOptions::default()
}

fn kh_q(diag: &LinkDiagram) -> BigradedTable {
    kh_table(diag, RingSpec::Q, &opts(), &Cache::disabled()).unwrap()
}

/// Normalize a resolved diagram's table to the orientation carrying the given
/// number of negative crossings.
fn normalized_to(diag: &LinkDiagram, neg: i64) -> BigradedTable {
    let (_, my_neg) = diag.signed_crossing_counts();
    let dh = my_neg as i64 - neg;
    kh_q(diag).shift(dh, 3 * dh)
}

#[test]
fn resolution_identities_of_e_links() {
    // E^{n-2}_{n,n-1} ~ D^{n-3}_{n-2,n-3} ⊔ U and E^i_{n,n-1} ~ D^i_{n-2,n-3};
    // E^i_{n,n} ~ D^{i-1}_{n-2,n-2} and E^0_{n,n} ~ D^0_{n-2,n-2} ⊔ U.
    // Resolved diagrams are normalized to the orientation with 2n-3 (resp.
    // 2n-2) negative crossings before comparing.
    for n in 3..=5i64 {
        let with_u = |mut d: LinkDiagram| {
            d.free_loops += 1;
            d
        };
        // m = n - 1 family
        {
            let neg = 2 * n - 3;
            let e_top = e_link_diagram(n, n - 1, n - 2).unwrap();
            let rhs = with_u(braid_closure(&dlink_braid(n - 2, n - 3, n - 3).unwrap()));
            assert_eq!(
                e_top.components().len(),
                rhs.components().len(),
                "components E^{}_{n},{} vs rhs",
                n - 2,
                n - 1
            );
            assert_eq!(normalized_to(&e_top, neg), kh_q(&rhs), "E^{}_{n},{}", n - 2, n - 1);
            for i in 0..=n - 3 {
                let e = e_link_diagram(n, n - 1, i).unwrap();
                let rhs = braid_closure(&dlink_braid(n - 2, n - 3, i).unwrap());
                assert_eq!(e.components().len(), rhs.components().len());
                assert_eq!(normalized_to(&e, neg), kh_q(&rhs), "E^{i}_{n},{}", n - 1);
            }
        }
        // m = n family
        {
            let neg = 2 * n - 2;
            for i in 1..=n - 2 {
                let e = e_link_diagram(n, n, i).unwrap();
                let rhs = braid_closure(&dlink_braid(n - 2, n - 2, i - 1).unwrap());
                assert_eq!(e.components().len(), rhs.components().len());
                assert_eq!(normalized_to(&e, neg), kh_q(&rhs), "E^{i}_{n},{n}");
            }
            let e0 = e_link_diagram(n, n, 0).unwrap();
            let rhs = with_u(braid_closure(&dlink_braid(n - 2, n - 2, 0).unwrap()));
            assert_eq!(e0.components().len(), rhs.components().len());
            assert_eq!(normalized_to(&e0, neg), kh_q(&rhs), "E^0_{n},{n}");
        }
    }
}

#[test]
fn e43_matches_split_torus() {
    // E^2_{4,3} ~ D^1_{2,1} ⊔ U = T(2,2) ⊔ U
    let e = e_link_diagram(4, 3, 2).unwrap();
    let mut rhs = braid_closure(&torus_braid(2, 2).unwrap());
    rhs.free_loops += 1;
    assert_eq!(normalized_to(&e, 5), kh_q(&rhs));
}

#[test]
fn dlink_rollover_isotopy() {
    // D^{n-1}_{n,m-1} is the diagram of T(n,m): equal homology on (3,3) vs (3,2,2)
    let a = braid_closure(&torus_braid(3, 3).unwrap());
    let b = braid_closure(&dlink_braid(3, 2, 2).unwrap());
    assert_eq!(kh_q(&a), kh_q(&b));
    let az = kh_table(&a, RingSpec::Z, &opts(), &Cache::disabled()).unwrap();
    let bz = kh_table(&b, RingSpec::Z, &opts(), &Cache::disabled()).unwrap();
    assert_eq!(az, bz);
}

#[test]
fn scan_invariant_under_crossing_order() {
    // reversing the crossing list is a different scanning schedule
    let mut corpus = vec![
        braid_closure(&torus_braid(3, 3).unwrap()),
        braid_closure(&torus_braid(4, 2).unwrap()),
        e_link_diagram(4, 4, 1).unwrap(),
    ];
    corpus.extend(random_braid_corpus(5, 8, 99).into_iter().map(|(_, d)| d));
    for diag in &corpus {
        let mut rev = diag.clone();
        rev.crossings.reverse();
        for ring in [RingSpec::Z, RingSpec::Q] {
            let a = kh_table(diag, ring, &opts(), &Cache::disabled()).unwrap();
            let b = kh_table(&rev, ring, &opts(), &Cache::disabled()).unwrap();
            assert_eq!(a, b, "{ring}");
        }
    }
}

#[test]
fn scan_is_deterministic() {
    let d = braid_closure(&torus_braid(4, 4).unwrap());
    let r1 = scan_complex::<ZZ>(&d, Theory::Khovanov, &[], &opts()).unwrap();
    let r2 = scan_complex::<ZZ>(&d, Theory::Khovanov, &[], &opts()).unwrap();
    assert_eq!(r1.complex.gens, r2.complex.gens);
    let d1: Vec<_> = r1.complex.d.iter().collect();
    let d2: Vec<_> = r2.complex.d.iter().collect();
    assert_eq!(d1, d2);
}

#[test]
fn complex_splits_by_quantum_degree() {
    // every Khovanov differential entry preserves q, and the per-slice
    // dimensions assemble to the global per-h dimensions
    let diags = vec![
        braid_closure(&torus_braid(3, 3).unwrap()),
        braid_closure(&BraidWord::new(3, vec![1, -2, 1, -2, 1]).unwrap()),
    ];
    for diag in &diags {
        let cx = scan_complex::<QQ>(diag, Theory::Khovanov, &[], &opts()).unwrap().complex;
        for (i, outs) in cx.d.iter().enumerate() {
            for (j, _) in outs {
                assert_eq!(cx.gens[i].1, cx.gens[*j].1, "entry crosses q-slices");
            }
        }
        let table = torkh_core::complex::homology_field(&cx, RingSpec::Q);
        let by_h = cx.homology_dims_by_h();
        for (&h, &dim) in &by_h {
            let slice_sum: usize = table
                .groups
                .iter()
                .filter(|(&(hh, _), _)| hh == h)
                .map(|(_, g)| g.free)
                .sum();
            assert_eq!(slice_sum, dim, "h={h}");
        }
    }
}

#[test]
fn d_squared_zero_on_random_corpus() {
    let mut rng = SplitMix64(7);
    for _ in 0..12 {
        let strands = 3 + (rng.next_u64() % 3) as usize;
        let letters: Vec<i32> = (0..(6 + (rng.next_u64() % 7) as usize))
            .map(|_| {
                let i = 1 + (rng.next_u64() % (strands as u64 - 1)) as i32;
                if rng.next_u64() % 2 == 0 {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let d = braid_closure(&BraidWord::new(strands, letters).unwrap());
        for theory in [Theory::Khovanov, Theory::Lee, Theory::BarNatan] {
            match theory {
                Theory::BarNatan => {
                    let cx = scan_complex::<torkh_core::ring::Fp<2>>(&d, theory, &[], &opts())
                        .unwrap()
                        .complex;
                    cx.check_d_squared().unwrap();
                    cx.check_degrees().unwrap();
                }
                _ => {
                    let cx = scan_complex::<QQ>(&d, theory, &[], &opts()).unwrap().complex;
                    cx.check_d_squared().unwrap();
                    cx.check_degrees().unwrap();
                }
            }
        }
    }
}

#[test]
fn gr_tables_are_orientation_covariant() {
    // reorienting shifts the associated graded table by exactly (2λ, 6λ)
    for (n, m, rev) in [(2i64, 2i64, vec![0usize]), (3, 3, vec![1]), (4, 2, vec![0]), (3, 3, vec![0, 2])] {
        let diag = braid_closure(&torus_braid(n, m).unwrap());
        let (_, lk) = diag.components_and_linking();
        let (dh, dq) = orientation_shift(&lk, &rev);
        let base = filtration_table(
            &scan_complex::<QQ>(&diag, Theory::Lee, &[], &opts()).unwrap().complex,
        )
        .gr_dimensions();
        let reor = filtration_table(
            &scan_complex::<QQ>(&diag.reverse_components(&rev), Theory::Lee, &[], &opts())
                .unwrap()
                .complex,
        )
        .gr_dimensions();
        assert_eq!(reor, base.shift(-dh, -dq), "T({n},{m}) rev {rev:?}");
    }
}

#[test]
fn canonical_classes_of_one_type_share_degree() {
    // all size-k reversal subsets of T(n,n) give the same filtration degree
    for (n, m) in [(3i64, 3i64), (4, 2), (4, 4)] {
        let diag = braid_closure(&torus_braid(n, m).unwrap());
        let d = gcd(n, m);
        for k in 1..=(d as usize - 1) {
            let mut subsets: Vec<Vec<usize>> = Vec::new();
            for a in 0..d as usize {
                for b in a..d as usize {
                    let s: Vec<usize> = if k == 1 {
                        vec![a]
                    } else if k == 2 && a != b {
                        vec![a, b]
                    } else {
                        continue;
                    };
                    if s.len() == k && !subsets.contains(&s) {
                        subsets.push(s);
                    }
                }
            }
            if subsets.is_empty() {
                continue;
            }
            let res = deformed_scan_with_cycles::<QQ>(&diag, &subsets, &opts()).unwrap();
            let degs: Vec<_> = res
                .chains
                .iter()
                .map(|c| class_filtration_degree(&res.complex, c).unwrap())
                .collect();
            assert!(degs.windows(2).all(|w| w[0] == w[1]), "T({n},{m}) k={k}: {degs:?}");
        }
    }
}

#[test]
fn s_agrees_across_fields() {
    use torkh_core::lee::s_invariant;
    let samples: Vec<(LinkDiagram, Vec<usize>)> = vec![
        (braid_closure(&torus_braid(3, 2).unwrap()), vec![]),
        (braid_closure(&torus_braid(2, 4).unwrap()), vec![0]),
        (braid_closure(&torus_braid(3, 3).unwrap()), vec![0]),
        (braid_closure(&BraidWord::new(3, vec![1, 1, 2, 2]).unwrap()), vec![]),
    ];
    for (diag, rev) in &samples {
        let sq = s_invariant(diag, rev, RingSpec::Q, &opts()).unwrap();
        for ring in [RingSpec::Fp(3), RingSpec::Fp(5)] {
            assert_eq!(s_invariant(diag, rev, ring, &opts()).unwrap(), sq, "{ring}");
        }
    }
}

#[test]
fn s_of_mirror_knots() {
    use torkh_core::lee::s_invariant;
    for (n, m) in [(2i64, 3i64), (3, 4)] {
        let d = braid_closure(&torus_braid(n, m).unwrap());
        let dm = braid_closure(&torus_braid(n, -m).unwrap());
        let s = s_invariant(&d, &[], RingSpec::Q, &opts()).unwrap();
        let sm = s_invariant(&dm, &[], RingSpec::Q, &opts()).unwrap();
        assert_eq!(sm, -s, "T({n},{m})");
        assert_eq!(s, (n - 1) * (m - 1));
    }
}

#[test]
fn tracked_cycles_are_reproducible() {
    // the same tracked specification yields the identical pushed-forward chain
    let diag = braid_closure(&torus_braid(3, 3).unwrap());
    let res = deformed_scan_with_cycles::<QQ>(&diag, &[vec![0], vec![0]], &opts()).unwrap();
    assert_eq!(res.chains[0], res.chains[1]);
    assert!(!res.chains[0].is_empty());
}

#[test]
fn verify_reports_deterministic_on_cached_input() {
    let dir = std::env::temp_dir().join(format!("torkh-verify-det-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let mut ctx = torkh_core::verify::VerifyCtx::default();
    ctx.cache = Cache::resolve(Some(&dir));
    let strip_timing = |v: serde_json::Value| {
        let mut v = v;
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let r1 = verify_lower_bound(3, torkh_core::formulas::StairFamily::Nn, RingSpec::Z, &ctx);
    let r2 = verify_lower_bound(3, torkh_core::formulas::StairFamily::Nn, RingSpec::Z, &ctx);
    assert_eq!(strip_timing(r1.to_json()), strip_timing(r2.to_json()));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn filtration_table_json_round_trip() {
    let diag = braid_closure(&torus_braid(3, 2).unwrap());
    let cx = scan_complex::<QQ>(&diag, Theory::Lee, &[], &opts()).unwrap().complex;
    let ft = filtration_table(&cx);
    let back = torkh_core::table::FiltrationTable::from_json(&ft.to_json()).unwrap();
    assert_eq!(ft, back);
}

#[test]
fn cube_refusal_guides_to_scan() {
    let d = braid_closure(&torus_braid(4, 5).unwrap());
    let err = kh_table_cube(&d, RingSpec::Z, 14).unwrap_err();
    assert!(err.to_string().contains("scanning"), "{err}");
}

#[test]
fn lower_bound_harness_small_grid() {
    let ctx = torkh_core::verify::VerifyCtx::default();
    for n in 2..=4i64 {
        for ring in [RingSpec::Q, RingSpec::Fp(2)] {
            let r = verify_lower_bound(n, torkh_core::formulas::StairFamily::Nn, ring, &ctx);
            assert!(r.passed(), "n={n} {ring}: {r:?}");
        }
    }
}
