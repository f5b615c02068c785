//! Acceptance suite: every headline claim the engine is expected to
//! reproduce, one test per criterion, each printing a pass/fail line.
//! Slow variants (integral T(7,6)-scale runs) are #[ignore]d and run with
//! `cargo test -- --ignored`.

use std::time::Instant;

use torkh_core::cache::Cache;
use torkh_core::complex::homology_field;
use torkh_core::engine::{kh_table, kh_table_cube};
use torkh_core::formulas::{
    check_q_relations, check_q_relations_on, gcd, gr_lee_torus, l_poly, q_nn, s_torus,
    StairFamily, StaircaseFn,
};
use torkh_core::jones::{jones_braid, jones_kauffman};
use torkh_core::lee::{filtration_table, s_invariant};
use torkh_core::links::{braid_closure, torus_braid, LinkDiagram};
use torkh_core::ring::RingSpec;
use torkh_core::scan::{scan_complex, ScanOptions, Theory};
use torkh_core::verify::{
    corpus_torus_de, random_braid_corpus, verify_les_additivity, verify_lower_bound,
    verify_recursions,
};

fn ctx() -> torkh_core::verify::VerifyCtx {
    torkh_core::verify::VerifyCtx::default()
}

fn pass(line: &str) {
    println!("[PASS] {line}");
}

#[test]
fn criterion_01_t66_figure() {
    // n = 4, 5 analogues must finish within 10 s each
    for n in [4i64, 5] {
        let t0 = Instant::now();
        let r = verify_lower_bound(n, StairFamily::Nn, RingSpec::Q, &ctx());
        assert!(r.passed(), "{r:?}");
        let el = t0.elapsed();
        assert!(el.as_secs() < 10, "T({n},{n}) took {el:?}");
    }
    let t0 = Instant::now();
    let r = verify_lower_bound(6, StairFamily::Nn, RingSpec::Q, &ctx());
    assert!(r.passed(), "{r:?}");
    let el = t0.elapsed();
    assert!(el.as_secs() < 900, "T(6,6) took {el:?}");

    // the four distinguished cells, explicitly
    let d = braid_closure(&torus_braid(6, 6).unwrap());
    let t = kh_table(&d, RingSpec::Q, &ScanOptions::default(), &Cache::disabled()).unwrap();
    for (h, q) in [(0i64, 24i64), (10, 36), (16, 44), (18, 48)] {
        assert_eq!(t.dim(h, q), 1, "({h},{q})");
        assert_eq!(q_nn(6, h), Some(q));
    }
    pass(&format!("criterion 1: Kh(T(6,6); Q) vanishes below the staircase, distinguished cells have dim 1 ({el:?})"));
}

#[test]
fn criterion_02_t76_figure_rational() {
    let t0 = Instant::now();
    let r = verify_lower_bound(6, StairFamily::N1n, RingSpec::Q, &ctx());
    assert!(r.passed(), "{r:?}");
    let d = braid_closure(&torus_braid(7, 6).unwrap());
    let t = kh_table(&d, RingSpec::Q, &ScanOptions::default(), &Cache::disabled()).unwrap();
    assert_eq!(t.dim(11, 43), 0);
    pass(&format!(
        "criterion 2: Kh(T(7,6); Q) vanishes below the staircase, dim(11,43) = 0 ({:?})",
        t0.elapsed()
    ));
}

#[test]
#[ignore = "integral T(7,6) run; enable with --ignored (the --slow path)"]
fn criterion_02_t76_integral_slow() {
    let mut c = ctx();
    c.slow = true;
    let r = verify_lower_bound(6, StairFamily::N1n, RingSpec::Z, &c);
    assert!(r.passed(), "{r:?}");
    let d = braid_closure(&torus_braid(7, 6).unwrap());
    let t = kh_table(&d, RingSpec::Z, &ScanOptions::default(), &Cache::disabled()).unwrap();
    let g = t.group(11, 43);
    assert_eq!(g.free, 0);
    assert!(!g.torsion.is_empty(), "cell must be pure nonzero torsion: {g:?}");
    pass("criterion 2 (slow): Kh^{11,43}(T(7,6); Z) is pure torsion");
}

#[test]
fn criterion_03_s_invariants() {
    let t0 = Instant::now();
    let cases: Vec<(i64, i64)> = vec![
        (2, 2),
        (2, -2),
        (3, 2),
        (3, -2),
        (3, 3),
        (3, -3),
        (4, 2),
        (4, -2),
        (4, 3),
        (4, 4),
    ];
    let opts = ScanOptions::default();
    for (n, m) in cases {
        let diag = braid_closure(&torus_braid(n, m).unwrap());
        let d = gcd(n, m);
        for qq in 0..=d / 2 {
            let p = d - qq;
            let rev: Vec<usize> = (0..qq as usize).collect();
            let expect = s_torus(n, m, p, qq).unwrap();
            for ring in [RingSpec::Q, RingSpec::Fp(3)] {
                let got = s_invariant(&diag, &rev, ring, &opts).unwrap();
                assert_eq!(got, expect, "s(T({n},{m})_{{{p},{qq}}}) over {ring}");
            }
        }
    }
    let el = t0.elapsed();
    assert!(el.as_secs() < 60, "took {el:?}");
    pass(&format!("criterion 3: s equals the closed formula for all orientations, Q and F3 ({el:?})"));
}

#[test]
fn criterion_04_filtration_tables() {
    let t0 = Instant::now();
    for (n, m) in [(2i64, 2i64), (3, 3), (4, 2), (4, 4), (6, 2)] {
        let diag = braid_closure(&torus_braid(n, m).unwrap());
        let cx = scan_complex::<torkh_core::ring::QQ>(&diag, Theory::Lee, &[], &ScanOptions::default())
            .unwrap()
            .complex;
        let gr = filtration_table(&cx).gr_dimensions();
        assert_eq!(gr, gr_lee_torus(n, m), "T({n},{m})");
    }
    // the representation-dimension pattern 1/3/2 at h = 8 for T(4,4)
    let diag = braid_closure(&torus_braid(4, 4).unwrap());
    let cx = scan_complex::<torkh_core::ring::QQ>(&diag, Theory::Lee, &[], &ScanOptions::default())
        .unwrap()
        .complex;
    let gr = filtration_table(&cx).gr_dimensions();
    assert_eq!(gr.dim(8, 20), 1);
    assert_eq!(gr.dim(8, 22), 3);
    assert_eq!(gr.dim(8, 24), 2);
    let el = t0.elapsed();
    assert!(el.as_secs() < 300, "took {el:?}");
    pass(&format!("criterion 4: associated-graded Lee tables match the prediction, 1/3/2 at T(4,4) h=8 ({el:?})"));
}

#[test]
fn criterion_05_les_additivity() {
    let t0 = Instant::now();
    for n in 2..=5i64 {
        for i in 1..=n - 1 {
            let r = verify_les_additivity(n, n - 1, i, RingSpec::Q, &ctx());
            assert!(r.passed(), "n={n} i={i}: {r:?}");
        }
    }
    pass(&format!(
        "criterion 5: skein dimension additivity over Q for all i, n <= 5 ({:?})",
        t0.elapsed()
    ));
}

#[test]
#[ignore = "n = 6 additivity; enable with --ignored (the --slow path)"]
fn criterion_05_les_additivity_n6_slow() {
    let mut c = ctx();
    c.slow = true;
    for i in 1..=5i64 {
        let r = verify_les_additivity(6, 5, i, RingSpec::Q, &c);
        assert!(r.passed(), "i={i}: {r:?}");
    }
    pass("criterion 5 (slow): additivity over Q at n = 6");
}

#[test]
#[ignore = "42-crossing integral run reproducing the reported counterexample"]
fn criterion_05_integral_counterexample_slow() {
    // integral additivity is expected to fail at (n, i) = (7, 6)
    let mut c = ctx();
    c.slow = true;
    let r = verify_les_additivity(7, 6, 6, RingSpec::Z, &c);
    assert!(
        !r.passed() && r.status == torkh_core::verify::Status::Fail,
        "expected integral additivity failure at (7,6): {r:?}"
    );
    pass(&format!(
        "criterion 5 (slow): integral additivity fails at (n,i) = (7,6), witness {:?}",
        r.witness
    ));
}

#[test]
fn criterion_06_recursions() {
    let t0 = Instant::now();
    for n in 0..=4i64 {
        let r = verify_recursions(n, &ctx());
        assert!(r.passed(), "n={n}: {r:?}");
    }
    pass(&format!("criterion 6: Poincaré polynomials equal L_n, K_n for n <= 4 ({:?})", t0.elapsed()));
}

#[test]
#[ignore = "n = 5 recursion; enable with --ignored (the --slow path)"]
fn criterion_06_recursions_n5_slow() {
    let mut c = ctx();
    c.slow = true;
    let r = verify_recursions(5, &c);
    assert!(r.passed(), "{r:?}");
    pass("criterion 6 (slow): recursions at n = 5");
}

#[test]
fn criterion_07_q_relations() {
    let t0 = Instant::now();
    for n in 3..=200 {
        let r = check_q_relations(n);
        assert!(r.passed(), "n={n}: {:?}", r.failures);
    }
    let el = t0.elapsed();
    assert!(el.as_millis() < 1000, "took {el:?}");

    // mutation check: a perturbed staircase must be flagged
    let mutated = StaircaseFn::from_fn(0, 18, |h| q_nn(6, h).map(|v| if h == 10 { v - 2 } else { v }));
    let r = check_q_relations_on(6, &mutated);
    assert!(!r.passed(), "mutation not flagged");
    pass(&format!("criterion 7: staircase relations hold for 3 <= n <= 200 in {el:?}; mutation flagged"));
}

fn acceptance_corpus() -> Vec<(String, LinkDiagram)> {
    let mut corpus = corpus_torus_de(10);
    corpus.extend(random_braid_corpus(50, 8, 20240817));
    corpus
}

#[test]
fn criterion_08_oracle_equivalence() {
    let t0 = Instant::now();
    let corpus = acceptance_corpus();
    let opts = ScanOptions::default();
    for (name, diag) in &corpus {
        for ring in [RingSpec::Z, RingSpec::Q, RingSpec::Fp(2), RingSpec::Fp(3)] {
            let scanned = kh_table(diag, ring, &opts, &Cache::disabled()).unwrap();
            let cubed = kh_table_cube(diag, ring, 14).unwrap();
            assert_eq!(scanned, cubed, "{name} over {ring}");
        }
    }
    pass(&format!(
        "criterion 8: scanning equals the naive cube (incl. torsion) on {} diagrams x 4 rings ({:?})",
        corpus.len(),
        t0.elapsed()
    ));
}

#[test]
fn criterion_09_euler_characteristic() {
    let t0 = Instant::now();
    let corpus = acceptance_corpus();
    let opts = ScanOptions::default();
    for (name, diag) in &corpus {
        if diag.crossing_count() > 14 {
            continue;
        }
        let t = kh_table(diag, RingSpec::Q, &opts, &Cache::disabled()).unwrap();
        let euler = t.euler_characteristic();
        let jones = jones_kauffman(diag).unwrap();
        assert_eq!(euler, jones, "{name}");
    }
    // L_n(-1, q) equals the bracket state sum of T(n,n) for n <= 6
    for n in 1..=6i64 {
        let lhs = l_poly(n).eval_t_minus_one();
        let rhs = jones_braid(&torus_braid(n, n).unwrap());
        assert_eq!(lhs, rhs, "T({n},{n})");
    }
    pass(&format!(
        "criterion 9: graded Euler characteristic equals the Kauffman bracket; L_n(-1,q) matches for n <= 6 ({:?})",
        t0.elapsed()
    ));
}

#[test]
fn criterion_10_lee_dimensions() {
    let t0 = Instant::now();
    let corpus = acceptance_corpus();
    let opts = ScanOptions::default();
    for (name, diag) in &corpus {
        let comps = diag.components().len() as u32;
        // Lee over Q
        let cx = scan_complex::<torkh_core::ring::QQ>(diag, Theory::Lee, &[], &opts)
            .unwrap()
            .complex;
        let total: usize = cx.homology_dims_by_h().values().sum();
        assert_eq!(total, 1usize << comps, "{name} Lee dim");
        let ft = filtration_table(&cx);
        for (h, levels) in &ft.rows {
            // weakly decreasing in q
            for w in levels.windows(2) {
                assert!(w[0].1 >= w[1].1, "{name} h={h} filtration not monotone");
            }
        }
        // gr sums recover the per-degree dimensions
        let gr = ft.gr_dimensions();
        let by_h = cx.homology_dims_by_h();
        for (&h, &dim) in &by_h {
            let sum: usize = gr
                .groups
                .iter()
                .filter(|(&(hh, _), _)| hh == h)
                .map(|(_, g)| g.free)
                .sum();
            assert_eq!(sum, dim, "{name} gr sum at h={h}");
        }
        // Bar-Natan over F2
        let bx = scan_complex::<torkh_core::ring::Fp<2>>(diag, Theory::BarNatan, &[], &opts)
            .unwrap()
            .complex;
        let total2: usize = bx.homology_dims_by_h().values().sum();
        assert_eq!(total2, 1usize << comps, "{name} Bar-Natan dim");
    }
    pass(&format!(
        "criterion 10: Lee/Bar-Natan total dimension is 2^components on {} diagrams; filtrations monotone, gr sums correct ({:?})",
        corpus.len(),
        t0.elapsed()
    ));
}

#[test]
fn field_homology_matches_universal_coefficients() {
    // spot check that the per-field runs in criterion 8 are genuinely
    // different computations: F2 dims exceed Q dims exactly at torsion
    let d = braid_closure(&torus_braid(3, 2).unwrap());
    let q = kh_table(&d, RingSpec::Q, &ScanOptions::default(), &Cache::disabled()).unwrap();
    let f2 = kh_table(&d, RingSpec::Fp(2), &ScanOptions::default(), &Cache::disabled()).unwrap();
    assert_eq!(q.total_free() + 2, f2.total_free());
    let _ = homology_field::<torkh_core::ring::QQ>;
}
