//! Verification harness: replays the computable claims about torus-link
//! homology end-to-end and emits machine-readable reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Value};

use crate::cache::Cache;
use crate::cube::EngineError;
use crate::engine::kh_table;
use crate::formulas::{
    gr_lee_torus, k_poly, l_poly, q_n1n, q_nn, s_torus, stair, StairFamily,
};
use crate::lee::{filtration_table, s_invariant};
use crate::links::{braid_closure, dlink_braid, e_link_diagram, torus_braid, LinkDiagram};
use crate::poly::LaurentPoly2;
use crate::ring::RingSpec;
use crate::scan::{scan_complex, ScanOptions, Theory};
use crate::table::BigradedTable;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Pass,
    Fail,
    SkippedResource,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::SkippedResource => "skipped-resource",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub h: i64,
    pub q: i64,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub claim: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub witness: Option<Witness>,
    pub detail: Option<String>,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        let mut obj = serde_json::Map::new();
        obj.insert("claim".into(), json!(self.claim));
        for (k, v) in &self.params {
            obj.insert(k.clone(), v.clone());
        }
        obj.insert("status".into(), json!(self.status.as_str()));
        obj.insert("elapsed_ms".into(), json!(self.elapsed_ms));
        obj.insert(
            "witness".into(),
            match &self.witness {
                None => Value::Null,
                Some(w) => json!({
                    "h": w.h, "q": w.q, "expected": w.expected, "got": w.got,
                }),
            },
        );
        if let Some(d) = &self.detail {
            obj.insert("detail".into(), json!(d));
        }
        Value::Object(obj)
    }
}

/// Budgets and shared state for verification jobs.
pub struct VerifyCtx {
    pub opts: ScanOptions,
    pub cache: Cache,
    pub slow: bool,
}

impl Default for VerifyCtx {
    fn default() -> Self {
        VerifyCtx { opts: ScanOptions::default(), cache: Cache::disabled(), slow: false }
    }
}

impl VerifyCtx {
    /// Desk-scale crossing caps; `--slow` lifts them.
    pub fn crossing_cap(&self, ring: RingSpec) -> usize {
        if self.slow {
            usize::MAX
        } else if ring == RingSpec::Z {
            20
        } else {
            36
        }
    }

    fn skip(&self, claim: &str, params: BTreeMap<String, Value>, why: String) -> VerificationReport {
        VerificationReport {
            claim: claim.into(),
            params,
            status: Status::SkippedResource,
            witness: None,
            detail: Some(why),
            elapsed_ms: 0,
        }
    }
}

fn group_desc(t: &BigradedTable, h: i64, q: i64) -> String {
    let g = t.group(h, q);
    if g.torsion.is_empty() {
        format!("free {}", g.free)
    } else {
        format!("free {} torsion {:?}", g.free, g.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

/// Vanishing below the staircase, plus the distinguished cells: for T(n,n)
/// every (2pq, q_{n,n}(2pq)) group is ℤ (dimension one over a field); for
/// T(n+1,n) the (2n−1, q_{n+1,n}(2n−1)) group has free rank zero.
pub fn verify_lower_bound(
    n: i64,
    family: StairFamily,
    ring: RingSpec,
    ctx: &VerifyCtx,
) -> VerificationReport {
    let t0 = Instant::now();
    let fam_str = match family {
        StairFamily::Nn => "nn",
        StairFamily::N1n => "n1n",
    };
    let params: BTreeMap<String, Value> = BTreeMap::from([
        ("n".to_string(), json!(n)),
        ("family".to_string(), json!(fam_str)),
        ("ring".to_string(), json!(ring.name())),
    ]);
    let braid = match family {
        StairFamily::Nn => torus_braid(n, n),
        StairFamily::N1n => torus_braid(n + 1, n),
    }
    .expect("valid torus parameters");
    let diag = braid_closure(&braid);
    if diag.crossing_count() > ctx.crossing_cap(ring) {
        return ctx.skip(
            "lower-bound",
            params,
            format!("{} crossings exceeds budget; rerun with --slow", diag.crossing_count()),
        );
    }
    let table = match kh_table(&diag, ring, &ctx.opts, &ctx.cache) {
        Ok(t) => t,
        Err(e) => return ctx.skip("lower-bound", params, e.to_string()),
    };

    let mut report = VerificationReport {
        claim: "lower-bound".into(),
        params,
        status: Status::Pass,
        witness: None,
        detail: None,
        elapsed_ms: 0,
    };
    'check: {
        for (&(h, q), _) in &table.groups {
            match stair(n, family, h) {
                None => {
                    report.status = Status::Fail;
                    report.witness = Some(Witness {
                        h,
                        q,
                        expected: "0 (h outside staircase support)".into(),
                        got: group_desc(&table, h, q),
                    });
                    break 'check;
                }
                Some(bound) if q < bound => {
                    report.status = Status::Fail;
                    report.witness = Some(Witness {
                        h,
                        q,
                        expected: format!("0 (below bound {bound})"),
                        got: group_desc(&table, h, q),
                    });
                    break 'check;
                }
                _ => {}
            }
        }
        match family {
            StairFamily::Nn => {
                for qq in 0..=n / 2 {
                    let p = n - qq;
                    let h = 2 * p * qq;
                    let q = q_nn(n, h).expect("green cell in support");
                    let g = table.group(h, q);
                    let ok = if ring == RingSpec::Z {
                        g.free == 1 && g.torsion.is_empty()
                    } else {
                        g.free == 1
                    };
                    if !ok {
                        report.status = Status::Fail;
                        report.witness = Some(Witness {
                            h,
                            q,
                            expected: if ring == RingSpec::Z { "Z".into() } else { "dim 1".into() },
                            got: group_desc(&table, h, q),
                        });
                        break 'check;
                    }
                }
            }
            StairFamily::N1n => {
                let h = 2 * n - 1;
                let q = q_n1n(n, h).expect("yellow cell in support");
                let g = table.group(h, q);
                if g.free != 0 {
                    report.status = Status::Fail;
                    report.witness = Some(Witness {
                        h,
                        q,
                        expected: "torsion only (free rank 0)".into(),
                        got: group_desc(&table, h, q),
                    });
                }
            }
        }
    }
    report.elapsed_ms = t0.elapsed().as_millis();
    report
}

fn table_add(a: &BigradedTable, b: &BigradedTable) -> BigradedTable {
    let mut out = a.clone();
    for (&(h, q), g) in &b.groups {
        let e = out.groups.entry((h, q)).or_default();
        e.free += g.free;
        e.torsion.extend(g.torsion.iter().cloned());
        e.torsion.sort();
    }
    out
}

fn table_eq_witness(lhs: &BigradedTable, rhs: &BigradedTable) -> Option<Witness> {
    let keys: std::collections::BTreeSet<(i64, i64)> =
        lhs.groups.keys().chain(rhs.groups.keys()).copied().collect();
    for (h, q) in keys {
        let mut a = lhs.group(h, q);
        let mut b = rhs.group(h, q);
        a.torsion.sort();
        b.torsion.sort();
        if a != b {
            return Some(Witness {
                h,
                q,
                expected: group_desc(rhs, h, q),
                got: group_desc(lhs, h, q),
            });
        }
    }
    None
}

/// Number of negative crossings the paper's orientation assigns to the
/// resolved diagram E^i_{n,m}.
fn e_paper_negatives(n: i64, m: i64) -> i64 {
    if m == n {
        2 * n - 2
    } else {
        2 * n - 3
    }
}

/// Grading shift [a]{b} of the skein sequence placing Kh(E^{i−1}) inside
/// Kh(D^i).
fn les_shift(n: i64, m: i64) -> (i64, i64) {
    if m == n {
        (2 * n - 1, 6 * n - 4)
    } else {
        (2 * n - 2, 6 * n - 7)
    }
}

/// Exactness-driven dimension additivity of the skein triangle on D^i:
/// dim Kh(D^i) = dim Kh(E^{i−1})[shift] + dim Kh(D^{i−1}){1}, the identity
/// equivalent to surjectivity of the resolution map; the graded Euler
/// characteristic identity is checked unconditionally.
pub fn verify_les_additivity(
    n: i64,
    m: i64,
    i: i64,
    ring: RingSpec,
    ctx: &VerifyCtx,
) -> VerificationReport {
    let t0 = Instant::now();
    let params: BTreeMap<String, Value> = BTreeMap::from([
        ("n".to_string(), json!(n)),
        ("m".to_string(), json!(m)),
        ("i".to_string(), json!(i)),
        ("ring".to_string(), json!(ring.name())),
    ]);
    assert!(m == n || m == n - 1, "les additivity needs m in {{n-1, n}}");
    assert!((1..=n - 1).contains(&i));

    let d_i = braid_closure(&dlink_braid(n, m, i).expect("valid dlink"));
    let d_prev = braid_closure(&dlink_braid(n, m, i - 1).expect("valid dlink"));
    let e = match e_link_diagram(n, m, i - 1) {
        Ok(e) => e,
        Err(err) => return ctx.skip("les-additivity", params, err),
    };
    let cap = ctx.crossing_cap(ring);
    if d_i.crossing_count() > cap {
        return ctx.skip(
            "les-additivity",
            params,
            format!("{} crossings exceeds budget; rerun with --slow", d_i.crossing_count()),
        );
    }

    let tables: Result<Vec<BigradedTable>, EngineError> = [&d_i, &d_prev, &e]
        .iter()
        .map(|d| kh_table(d, ring, &ctx.opts, &ctx.cache))
        .collect();
    let tables = match tables {
        Ok(t) => t,
        Err(e) => return ctx.skip("les-additivity", params, e.to_string()),
    };
    let (t_di, t_dprev, t_e) = (&tables[0], &tables[1], &tables[2]);

    // normalize E to the paper's orientation, then shift into the sequence
    let (_, my_neg) = e.signed_crossing_counts();
    let dh = my_neg as i64 - e_paper_negatives(n, m);
    let e_paper = t_e.shift(dh, 3 * dh);
    let (sh, sq) = les_shift(n, m);
    let rhs = table_add(&e_paper.shift(sh, sq), &t_dprev.shift(0, 1));

    let mut report = VerificationReport {
        claim: "les-additivity".into(),
        params,
        status: Status::Pass,
        witness: None,
        detail: None,
        elapsed_ms: 0,
    };

    // unconditional: alternating sums per quantum degree must agree
    let lhs_euler = t_di.euler_characteristic();
    let mut rhs_euler = e_paper.shift(sh, sq).euler_characteristic();
    rhs_euler += &t_dprev.shift(0, 1).euler_characteristic();
    if lhs_euler != rhs_euler {
        report.status = Status::Fail;
        report.detail = Some("graded Euler characteristic identity violated (exactness broken)".into());
        report.elapsed_ms = t0.elapsed().as_millis();
        return report;
    }

    if let Some(w) = table_eq_witness(t_di, &rhs) {
        report.status = Status::Fail;
        report.witness = Some(w);
        report.detail = Some("dimension additivity fails (connecting map nonzero)".into());
    }
    report.elapsed_ms = t0.elapsed().as_millis();
    report
}

fn poly_witness(got: &LaurentPoly2, expected: &LaurentPoly2) -> Option<Witness> {
    if got == expected {
        return None;
    }
    let keys: std::collections::BTreeSet<(i64, i64)> =
        got.terms().map(|(&k, _)| k).chain(expected.terms().map(|(&k, _)| k)).collect();
    for (t, q) in keys {
        if got.coeff(t, q) != expected.coeff(t, q) {
            return Some(Witness {
                h: t,
                q,
                expected: expected.coeff(t, q).to_string(),
                got: got.coeff(t, q).to_string(),
            });
        }
    }
    None
}

/// Exact equality of the computed rational Poincaré polynomials of T(n,n)
/// and T(n+1,n) with the recursions L_n and K_n.
pub fn verify_recursions(n: i64, ctx: &VerifyCtx) -> VerificationReport {
    let t0 = Instant::now();
    let params: BTreeMap<String, Value> = BTreeMap::from([("n".to_string(), json!(n))]);
    let mut report = VerificationReport {
        claim: "recursions".into(),
        params: params.clone(),
        status: Status::Pass,
        witness: None,
        detail: None,
        elapsed_ms: 0,
    };
    let tnn = if n == 0 {
        LinkDiagram::empty()
    } else {
        braid_closure(&torus_braid(n, n).expect("valid torus"))
    };
    let tn1n = braid_closure(&torus_braid(n + 1, n).expect("valid torus"));
    for (diag, expect, tag) in [(tnn, l_poly(n), "L"), (tn1n, k_poly(n), "K")] {
        if diag.crossing_count() > ctx.crossing_cap(RingSpec::Q) {
            return ctx.skip(
                "recursions",
                params,
                format!("{} crossings exceeds budget", diag.crossing_count()),
            );
        }
        let table = match kh_table(&diag, RingSpec::Q, &ctx.opts, &ctx.cache) {
            Ok(t) => t,
            Err(e) => return ctx.skip("recursions", params, e.to_string()),
        };
        let got = table.poincare().expect("field table");
        if let Some(w) = poly_witness(&got, &expect) {
            report.status = Status::Fail;
            report.witness = Some(w);
            report.detail = Some(format!("{tag}_{n} mismatch"));
            break;
        }
    }
    report.elapsed_ms = t0.elapsed().as_millis();
    report
}

/// Computed associated-graded Lee dimensions equal the predicted table, and
/// every orientation type's s-invariant equals the closed formula.
pub fn verify_filtration(n: i64, m: i64, ctx: &VerifyCtx) -> VerificationReport {
    let t0 = Instant::now();
    let params: BTreeMap<String, Value> = BTreeMap::from([
        ("n".to_string(), json!(n)),
        ("m".to_string(), json!(m)),
    ]);
    let diag = braid_closure(&torus_braid(n, m).expect("valid torus"));
    if diag.crossing_count() > ctx.crossing_cap(RingSpec::Q) {
        return ctx.skip(
            "filtration",
            params,
            format!("{} crossings exceeds budget", diag.crossing_count()),
        );
    }
    let mut report = VerificationReport {
        claim: "filtration".into(),
        params,
        status: Status::Pass,
        witness: None,
        detail: None,
        elapsed_ms: 0,
    };
    let cx = match scan_complex::<crate::ring::QQ>(&diag, Theory::Lee, &[], &ctx.opts) {
        Ok(r) => r.complex,
        Err(e) => {
            report.status = Status::SkippedResource;
            report.detail = Some(e.to_string());
            return report;
        }
    };
    let gr = filtration_table(&cx).gr_dimensions();
    let predicted = gr_lee_torus(n, m);
    if let Some(w) = table_eq_witness(&gr, &predicted) {
        report.status = Status::Fail;
        report.witness = Some(w);
        report.detail = Some("associated-graded Lee table mismatch".into());
        report.elapsed_ms = t0.elapsed().as_millis();
        return report;
    }
    // s-invariants of all orientation types
    let d = crate::formulas::gcd(n, m);
    for qq in 0..=d / 2 {
        let p = d - qq;
        let rev: Vec<usize> = (0..qq as usize).collect();
        let got = match s_invariant(&diag, &rev, RingSpec::Q, &ctx.opts) {
            Ok(s) => s,
            Err(e) => {
                report.status = Status::SkippedResource;
                report.detail = Some(e);
                return report;
            }
        };
        let expect = s_torus(n, m, p, qq).expect("valid orientation");
        if got != expect {
            report.status = Status::Fail;
            report.witness = Some(Witness {
                h: p,
                q: qq,
                expected: format!("s = {expect}"),
                got: format!("s = {got}"),
            });
            report.detail = Some(format!("s(T({n},{m})_{{{p},{qq}}}) mismatch"));
            break;
        }
    }
    report.elapsed_ms = t0.elapsed().as_millis();
    report
}

/// Arithmetic check of the six staircase relations; wraps the formulas-level
/// checker in a report.
pub fn verify_q_relations(n_max: i64) -> VerificationReport {
    let t0 = Instant::now();
    let mut report = VerificationReport {
        claim: "q-relations".into(),
        params: BTreeMap::from([("n_max".to_string(), json!(n_max))]),
        status: Status::Pass,
        witness: None,
        detail: None,
        elapsed_ms: 0,
    };
    for n in 3..=n_max {
        let r = crate::formulas::check_q_relations(n);
        if let Some((rel, vs)) = r.failures.first() {
            let v = vs[0];
            report.status = Status::Fail;
            report.witness = Some(Witness {
                h: v.h,
                q: 0,
                expected: format!("{:?} (rhs)", v.rhs),
                got: format!("{:?} (lhs)", v.lhs),
            });
            report.detail = Some(format!("relation {rel} fails at n = {n}"));
            break;
        }
    }
    report.elapsed_ms = t0.elapsed().as_millis();
    report
}

/// The fixed verification corpus: all torus, D- and E-family diagrams with at
/// most `max_crossings` crossings.
pub fn corpus_torus_de(max_crossings: usize) -> Vec<(String, LinkDiagram)> {
    let mut out = Vec::new();
    for n in 1..=8i64 {
        for m in 1..=12i64 {
            let b = torus_braid(n, m).expect("valid");
            if b.letters.len() <= max_crossings {
                out.push((format!("torus:{n},{m}"), braid_closure(&b)));
            }
        }
    }
    for n in 2..=6i64 {
        for m in [n - 1, n] {
            if m < 1 {
                continue;
            }
            for i in 1..=n - 1 {
                let b = dlink_braid(n, m, i).expect("valid");
                if b.letters.len() <= max_crossings {
                    out.push((format!("dlink:{n},{m},{i}"), braid_closure(&b)));
                }
            }
            for i in 0..=n - 2 {
                if let Ok(e) = e_link_diagram(n, m, i) {
                    if e.crossing_count() <= max_crossings {
                        out.push((format!("elink:{n},{m},{i}"), e));
                    }
                }
            }
        }
    }
    out
}

/// Deterministic splitmix64 stream.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

/// Seeded random braid closures with a fixed letter count.
pub fn random_braid_corpus(count: usize, letters: usize, seed: u64) -> Vec<(String, LinkDiagram)> {
    let mut rng = SplitMix64(seed);
    let mut out = Vec::new();
    for k in 0..count {
        let strands = 3 + (rng.next_u64() % 3) as usize; // 3..=5
        let word: Vec<i32> = (0..letters)
            .map(|_| {
                let i = 1 + (rng.next_u64() % (strands as u64 - 1)) as i32;
                if rng.next_u64() % 2 == 0 {
                    i
                } else {
                    -i
                }
            })
            .collect();
        let b = crate::links::BraidWord::new(strands, word.clone()).expect("valid");
        let name = format!(
            "braid:{strands}:{}",
            word.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
        );
        let _ = k;
        out.push((name, braid_closure(&b)));
    }
    out
}
