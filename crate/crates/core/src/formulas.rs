//! Closed formulas, staircase bounds, dimension formulas and the conjectural
//! recursions for torus-link homology, as pure exact arithmetic.

use std::collections::BTreeMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::LaurentPoly2;
use crate::ring::RingSpec;
use crate::table::BigradedTable;

/// gcd with gcd(n, 0) = n.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Binomial coefficient, zero for k < 0 or k > n.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n || n < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// k-th Catalan number C(2k, k)/(k + 1).
pub fn catalan(k: i64) -> BigInt {
    assert!(k >= 0, "catalan: negative index");
    binom(2 * k, k) / BigInt::from(k + 1)
}

/// dim(d−r, r) = C(d, r) − C(d, r−1), the two-row Young diagram dimension.
/// Requires 0 ≤ 2r ≤ d.
pub fn rep_dim(d: i64, r: i64) -> Result<BigInt, String> {
    if r < 0 || 2 * r > d {
        return Err(format!("rep_dim: need 0 <= 2r <= d, got d={d}, r={r}"));
    }
    Ok(binom(d, r) - binom(d, r - 1))
}

/// Orientation data of a torus link T(n, m): p components run opposite to
/// the other q, p + q = gcd(n, |m|).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TorusOrientation {
    pub p: i64,
    pub q: i64,
}

fn torus_split(n: i64, m: i64) -> (i64, i64, i64) {
    let d = gcd(n, m);
    (d, n / d, m.abs() / d.max(1))
}

/// s-invariant of T(n, m)_{p,q}; positive m uses the product formula,
/// negative m the mirror formula (p ≠ q branch vs. constant 1).
pub fn s_torus(n: i64, m: i64, p: i64, q: i64) -> Result<i64, String> {
    if n < 1 || m == 0 {
        return Err(format!("s_torus: need n >= 1, m != 0, got n={n}, m={m}"));
    }
    if p < 0 || q < 0 || p + q != gcd(n, m) {
        return Err(format!(
            "s_torus: need p,q >= 0 with p+q = gcd(n,|m|) = {}, got p={p}, q={q}",
            gcd(n, m)
        ));
    }
    let (_, n1, m1) = torus_split(n, m);
    let a = (p - q).abs();
    if m > 0 {
        Ok((n1 * a - 1) * (m1 * a - 1) - 2 * p.min(q))
    } else if p != q {
        Ok(-(n1 * a - 1) * (m1 * a - 1))
    } else {
        Ok(1)
    }
}

/// s-invariant of the k-component unlink.
pub fn s_unlink(k: i64) -> i64 {
    1 - k
}

/// Lee homology ranks of T(n, m) per homological degree:
/// 2·C(d,q) at h = 2·n1·m1·p·q when p ≠ q, C(d,q) when p = q.
pub fn lee_rank_torus(n: i64, m: i64) -> BTreeMap<i64, BigInt> {
    assert!(n >= 1 && m >= 1);
    let (d, n1, m1) = torus_split(n, m);
    let mut out = BTreeMap::new();
    for q in 0..=d / 2 {
        let p = d - q;
        let h = 2 * n1 * m1 * p * q;
        let rank = if p != q {
            BigInt::from(2) * binom(d, q)
        } else {
            binom(d, q)
        };
        *out.entry(h).or_insert_with(BigInt::zero) += rank;
    }
    out
}

/// Predicted associated-graded Lee dimensions of T(n, m), assembled from the
/// four-case dimension table over all orientation types (p ≥ q).
pub fn gr_lee_torus(n: i64, m: i64) -> BigradedTable {
    assert!(n >= 1 && m >= 1);
    let (d, n1, m1) = torus_split(n, m);
    let mut table = BigradedTable::new(RingSpec::Q);
    for q in 0..=d / 2 {
        let p = d - q;
        let h = 2 * n1 * m1 * p * q;
        let s = s_torus(n, m, p, q).expect("valid orientation");
        let qdeg = |r: i64| 6 * n1 * m1 * p * q + s + 2 * r - 1;
        let dim = |r: i64| -> usize {
            let v = rep_dim(d, r).expect("rep_dim in range");
            usize::try_from(&v).expect("small dimension")
        };
        if p == q {
            for r in 0..=q {
                table.add_free(h, qdeg(r), dim(r));
            }
        } else {
            table.add_free(h, qdeg(0), dim(0));
            for r in 1..=q {
                table.add_free(h, qdeg(r), dim(r) + dim(r - 1));
            }
            table.add_free(h, qdeg(q + 1), dim(q));
        }
    }
    table
}

/// h_max of the staircase families.
pub fn h_max(n: i64, family: StairFamily) -> i64 {
    match family {
        StairFamily::Nn => n * n / 2,
        StairFamily::N1n => n * n / 2 + n / 2,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StairFamily {
    /// q_{n,n}, bounding Kh(T(n,n)).
    Nn,
    /// q_{n+1,n}, bounding Kh(T(n+1,n)).
    N1n,
}

/// For 0 < h ≤ ⌊n²/2⌋ find the unique (p, q), p + q = n, p ≥ q > 0 with
/// 2(p+1)(q−1) < h ≤ 2pq.
fn stair_step(n: i64, h: i64) -> Option<(i64, i64)> {
    (1..=n / 2).map(|q| (n - q, q)).find(|&(p, q)| 2 * (p + 1) * (q - 1) < h && h <= 2 * p * q)
}

/// Staircase lower bound q_{n,n}(h); `None` is +∞.
pub fn q_nn(n: i64, h: i64) -> Option<i64> {
    assert!(n >= 1);
    if h < 0 || h > h_max(n, StairFamily::Nn) {
        return None;
    }
    if h == 0 {
        return Some(n * n - 2 * n);
    }
    let (p, _) = stair_step(n, h).expect("staircase intervals cover (0, h_max]");
    Some(n * n + 2 * h.div_euclid(2) + 2 * (h % 2) - 2 * p)
}

/// Staircase lower bound q_{n+1,n}(h); `None` is +∞.
pub fn q_n1n(n: i64, h: i64) -> Option<i64> {
    assert!(n >= 1);
    let hm = h_max(n, StairFamily::Nn);
    let hm2 = h_max(n, StairFamily::N1n);
    if h < 0 || h > hm2 {
        return None;
    }
    if h <= hm {
        // Big-step points 2pq + 1 are flattened by two.
        let flattened = h % 2 == 1 && stair_step(n, h - 1).is_some_and(|(p, q)| 2 * p * q == h - 1);
        let base = q_nn(n, h).expect("h <= h_max");
        return Some(if flattened { base + n - 3 } else { base + n - 1 });
    }
    Some(n * n / 2 + 2 * h - 1)
}

pub fn stair(n: i64, family: StairFamily, h: i64) -> Option<i64> {
    match family {
        StairFamily::Nn => q_nn(n, h),
        StairFamily::N1n => q_n1n(n, h),
    }
}

/// A ℤ → ℤ ∪ {+∞} staircase with a bounding box for its finite support,
/// closed under the shift and truncation operations used by the relations.
#[derive(Clone)]
pub struct StaircaseFn {
    lo: i64,
    hi: i64,
    f: Rc<dyn Fn(i64) -> Option<i64>>,
}

impl StaircaseFn {
    pub fn nn(n: i64) -> Self {
        // direct interval fill, one pass per orientation type
        let hm = h_max(n, StairFamily::Nn);
        let mut vals: Vec<Option<i64>> = vec![None; (hm + 1) as usize];
        vals[0] = Some(n * n - 2 * n);
        for q in 1..=n / 2 {
            let p = n - q;
            for h in (2 * (p + 1) * (q - 1) + 1)..=(2 * p * q) {
                vals[h as usize] = Some(n * n + 2 * (h / 2 + h % 2) - 2 * p);
            }
        }
        StaircaseFn { lo: 0, hi: hm, f: Rc::new(move |h| vals[h as usize]) }
    }

    pub fn n1n(n: i64) -> Self {
        let hm = h_max(n, StairFamily::Nn);
        let hm2 = h_max(n, StairFamily::N1n);
        let base = Self::nn(n);
        let mut vals: Vec<Option<i64>> = vec![None; (hm2 + 1) as usize];
        for h in 0..=hm {
            vals[h as usize] = base.eval(h).map(|v| v + n - 1);
        }
        for q in 1..=n / 2 {
            let h = 2 * (n - q) * q + 1;
            if h <= hm {
                vals[h as usize] = base.eval(h).map(|v| v + n - 3);
            }
        }
        for h in hm..=hm2 {
            vals[h as usize] = Some(n * n / 2 + 2 * h - 1);
        }
        StaircaseFn { lo: 0, hi: hm2, f: Rc::new(move |h| vals[h as usize]) }
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> Option<i64> + 'static) -> Self {
        Self::tabulate(lo, hi, f)
    }

    fn tabulate(lo: i64, hi: i64, f: impl Fn(i64) -> Option<i64>) -> Self {
        let vals: Vec<Option<i64>> = (lo..=hi).map(f).collect();
        StaircaseFn {
            lo,
            hi,
            f: Rc::new(move |h| vals[(h - lo) as usize]),
        }
    }

    pub fn eval(&self, h: i64) -> Option<i64> {
        if h < self.lo || h > self.hi {
            None
        } else {
            (self.f)(h)
        }
    }

    /// f[dh]{dq}: (h) ↦ f(h − dh) + dq.
    pub fn shifted(&self, dh: i64, dq: i64) -> Self {
        let inner = self.f.clone();
        StaircaseFn {
            lo: self.lo + dh,
            hi: self.hi + dh,
            f: Rc::new(move |h| inner(h - dh).map(|v| v + dq)),
        }
    }

    /// Restriction: +∞ wherever the predicate fails.
    pub fn restricted(&self, pred: impl Fn(i64) -> bool + 'static) -> Self {
        let inner = self.f.clone();
        StaircaseFn {
            lo: self.lo,
            hi: self.hi,
            f: Rc::new(move |h| if pred(h) { inner(h) } else { None }),
        }
    }

    fn finite_box(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// f ≥ g, tested at every h where f is finite.
    pub fn ge(&self, other: &Self) -> Vec<Violation> {
        let mut out = Vec::new();
        for h in self.finite_box() {
            if let Some(a) = self.eval(h) {
                match other.eval(h) {
                    Some(b) if a >= b => {}
                    b => out.push(Violation { h, lhs: Some(a), rhs: b }),
                }
            }
        }
        out
    }

    /// Exact equality as functions ℤ → ℤ ∪ {+∞}.
    pub fn eq_fn(&self, other: &Self) -> Vec<Violation> {
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        let mut out = Vec::new();
        for h in lo..=hi {
            let a = self.eval(h);
            let b = other.eval(h);
            if a != b {
                out.push(Violation { h, lhs: a, rhs: b });
            }
        }
        out
    }

    /// Strict inequality at a single point. +∞ on the left is vacuously
    /// strict, matching the comparison convention.
    pub fn strict_at(&self, other: &Self, h: i64) -> bool {
        match (self.eval(h), other.eval(h)) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a > b,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Violation {
    pub h: i64,
    /// None encodes +∞.
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
}

#[derive(Clone, Debug, Default)]
pub struct QRelationsReport {
    /// (relation label, violations)
    pub failures: Vec<(String, Vec<Violation>)>,
}

impl QRelationsReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the six staircase relations and both strictness addenda for a
/// given n ≥ 3, over the full finite supports.
pub fn check_q_relations(n: i64) -> QRelationsReport {
    check_q_relations_on(n, &StaircaseFn::nn(n))
}

/// Same check with an injectable q_{n,n}; used to confirm the harness flags
/// deliberately perturbed staircases.
pub fn check_q_relations_on(n: i64, qnn_n: &StaircaseFn) -> QRelationsReport {
    assert!(n >= 3);
    let mut report = QRelationsReport::default();
    let mut push = |label: &str, v: Vec<Violation>| {
        if !v.is_empty() {
            report.failures.push((label.to_string(), v));
        }
    };

    let qnn_n2 = StaircaseFn::nn(n - 2);
    let qn1n_n = StaircaseFn::n1n(n);
    let qn1n_n1 = StaircaseFn::n1n(n - 1);
    let qn1n_n2 = StaircaseFn::n1n(n - 2);

    // q_{n-2,n-2}[2n-2]{6n-8} = q_{n,n}|_{h>=2n-2} >= q_{n,n}
    let lhs1 = qnn_n2.shifted(2 * n - 2, 6 * n - 8);
    let cut = 2 * n - 2;
    let mid1 = qnn_n.restricted(move |h| h >= cut);
    push("qn_n.eq", lhs1.eq_fn(&mid1));
    push("qn_n.ge", mid1.ge(qnn_n));

    // q_{n-1,n-2}[2n-2]{6n-6} >= q_{n+1,n}|_{h <= hmax(T(n+1,n)) - 1}
    let lhs2 = qn1n_n2.shifted(2 * n - 2, 6 * n - 6);
    let bound = h_max(n, StairFamily::N1n) - 1;
    let rhs2 = qn1n_n.restricted(move |h| h <= bound);
    push("qn-1_n-1", lhs2.ge(&rhs2));

    // q_{n,n}{n-1} >= q_{n+1,n}
    let lhs3 = qnn_n.shifted(0, n - 1);
    push("qn_n-1", lhs3.ge(&qn1n_n));

    // q_{n,n-1}{n-1} >= q_{n,n}
    let lhs4 = qn1n_n1.shifted(0, n - 1);
    push("qn-1_n", lhs4.ge(qnn_n));

    // q_{n,n-1}[1]{2}|_{1 != h <= hmax(T(n,n-1))} >= q_{n,n-1}
    let hm_nn1 = h_max(n - 1, StairFamily::N1n);
    let lhs5 = qn1n_n1.shifted(1, 2).restricted(move |h| h != 1 && h <= hm_nn1);
    push("12", lhs5.ge(&qn1n_n1));

    // q_{n,n-1}[2]{4}|_{h <= hmax(T(n,n-1))} >= q_{n,n-1}
    let lhs6 = qn1n_n1.shifted(2, 4).restricted(move |h| h <= hm_nn1);
    push("24", lhs6.ge(&qn1n_n1));

    // Addendum: qn_n-1 is strict at h = 2n-1.
    if !lhs3.strict_at(&qn1n_n, 2 * n - 1) {
        push(
            "qn_n-1.strict",
            vec![Violation { h: 2 * n - 1, lhs: lhs3.eval(2 * n - 1), rhs: qn1n_n.eval(2 * n - 1) }],
        );
    }

    // Addendum: qn-1_n is strict at h = 2pq for p+q=n, p>=q>0,
    // and at h = 2pq-1 for p+q=n, p>=q>1.
    let mut strict_fail = Vec::new();
    for q in 1..=n / 2 {
        let p = n - q;
        let h = 2 * p * q;
        if !lhs4.strict_at(qnn_n, h) {
            strict_fail.push(Violation { h, lhs: lhs4.eval(h), rhs: qnn_n.eval(h) });
        }
        if q > 1 && !lhs4.strict_at(qnn_n, h - 1) {
            strict_fail.push(Violation { h: h - 1, lhs: lhs4.eval(h - 1), rhs: qnn_n.eval(h - 1) });
        }
    }
    push("qn-1_n.strict", strict_fail);

    report
}

/// Conjectural Poincaré polynomial of Kh(T(n+1, n); ℚ).
pub fn k_poly(n: i64) -> LaurentPoly2 {
    assert!(n >= 0);
    let u = &LaurentPoly2::tq(0, -1) + &LaurentPoly2::tq(0, 1);
    let mut ks: Vec<LaurentPoly2> = vec![u.clone(), u];
    if n >= 2 {
        let k2 = [(0i64, 1i64), (0, 3), (2, 5), (3, 9)]
            .iter()
            .fold(LaurentPoly2::zero(), |acc, &(t, q)| &acc + &LaurentPoly2::tq(t, q));
        ks.push(k2);
    }
    for i in 3..=n {
        let a = ks[(i - 1) as usize].shift(0, 2 * i - 2);
        let b = ks[(i - 2) as usize].shift(2 * i - 2, 6 * i - 6);
        let c = ks[(i - 3) as usize].shift(2 * i - 1, 8 * i - 8);
        ks.push(&(&a + &b) + &c);
    }
    ks[n as usize].clone()
}

/// Conjectural Poincaré polynomial of Kh(T(n, n); ℚ).
pub fn l_poly(n: i64) -> LaurentPoly2 {
    assert!(n >= 0);
    let u = &LaurentPoly2::tq(0, -1) + &LaurentPoly2::tq(0, 1);
    let mut ls: Vec<LaurentPoly2> = vec![LaurentPoly2::one(), u];
    for nn in 2..=n {
        let mut acc = LaurentPoly2::zero();
        let lead = &LaurentPoly2::tq(2 * nn - 2, 6 * nn - 8) + &LaurentPoly2::tq(2 * nn - 2, 6 * nn - 6);
        acc += &(&lead * &ls[(nn - 2) as usize]);
        for i in 1..=(nn - 1) / 2 {
            let term = ls[(nn - 2 * i) as usize]
                .shift(2 * i * (nn - i), 6 * i * (nn - i))
                .scale(&catalan(i - 1));
            acc += &term;
        }
        for i in 0..=(nn - 2) / 2 {
            let coeff = binom(nn - 2, i) - binom(nn - 2, i - 1);
            let term = k_poly(nn - 2 * i - 1)
                .shift(2 * i * (nn - i), 6 * i * (nn - i) + nn - 2 * i - 1)
                .scale(&coeff);
            acc += &term;
        }
        ls.push(acc);
    }
    ls[n as usize].clone()
}

#[derive(Clone, Debug)]
pub struct TwistBoundReport {
    pub n: i64,
    pub m: i64,
    pub m_prime: i64,
    pub p: i64,
    pub q: i64,
    pub normalized_delta: i64,
    pub interval: (i64, i64),
    pub pass: bool,
}

/// Check the full-twist bound on torus families: the normalized change of s
/// between T(n, m)_{p,q} and T(n, m')_{p,q} (m' > m, m' ≡ m mod n) must lie
/// in [−2P+2, 0] for P > Q and [−2P, 0] for P = Q, where (P, Q) are the
/// per-sign strand counts n1·max(p,q), n1·min(p,q) through the twist disk.
pub fn twist_bound_check(n: i64, m: i64, m_prime: i64, p: i64, q: i64) -> Result<TwistBoundReport, String> {
    if n < 1 || m_prime <= m || (m_prime - m) % n != 0 {
        return Err(format!("twist_bound_check: need m' > m with m' ≡ m mod n, got n={n}, m={m}, m'={m_prime}"));
    }
    let d = if m != 0 { gcd(n, m) } else { n };
    let d2 = if m_prime != 0 { gcd(n, m_prime) } else { n };
    if d != d2 {
        return Err(format!("twist family changes component count: gcd(n,m)={d}, gcd(n,m')={d2}"));
    }
    if p < 0 || q < 0 || p + q != d {
        return Err(format!("twist_bound_check: need p+q = {d}"));
    }
    let n1 = n / d;
    let s_at = |mm: i64| -> Result<i64, String> {
        if mm == 0 {
            if d != n {
                return Err("m = 0 member requires d = n".into());
            }
            Ok(s_unlink(n))
        } else {
            s_torus(n, mm, p, q)
        }
    };
    let k = (m_prime - m) / n;
    let big = n1 * (p - q).abs();
    let delta = s_at(m_prime)? - s_at(m)? - k * big * (big - 1);
    let (pp, qq) = (n1 * p.max(q), n1 * p.min(q));
    let interval = if pp > qq { (-2 * pp + 2, 0) } else { (-2 * pp, 0) };
    let pass = interval.0 <= delta && delta <= interval.1;
    Ok(TwistBoundReport { n, m, m_prime, p, q, normalized_delta: delta, interval, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_values_from_theorem() {
        assert_eq!(s_torus(3, 2, 1, 0).unwrap(), 2);
        assert_eq!(s_torus(6, 6, 3, 3).unwrap(), -5);
        assert_eq!(s_torus(2, -2, 1, 1).unwrap(), 1);
        assert_eq!(s_torus(4, 4, 2, 2).unwrap(), -3);
        assert_eq!(s_torus(2, 2, 1, 1).unwrap(), -1);
        // mirror trefoil
        assert_eq!(s_torus(3, -2, 1, 0).unwrap(), -2);
        assert!(s_torus(3, 2, 1, 1).is_err());
    }

    #[test]
    fn s_symmetries() {
        for n in 1..=8 {
            for m in 1..=8 {
                let d = gcd(n, m);
                for q in 0..=d {
                    let p = d - q;
                    assert_eq!(s_torus(n, m, p, q).unwrap(), s_torus(n, m, q, p).unwrap());
                    assert_eq!(s_torus(n, m, p, q).unwrap(), s_torus(m, n, p, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn lee_ranks() {
        let r = lee_rank_torus(2, 2);
        assert_eq!(r, BTreeMap::from([(0, 2.into()), (2, 2.into())]));
        let r = lee_rank_torus(6, 6);
        assert_eq!(
            r,
            BTreeMap::from([(0, 2.into()), (10, 12.into()), (16, 30.into()), (18, 20.into())])
        );
        let r = lee_rank_torus(3, 2);
        assert_eq!(r, BTreeMap::from([(0, 2.into())]));
    }

    #[test]
    fn lee_rank_total_is_two_power() {
        for n in 1..=10 {
            for m in 1..=10 {
                let total: BigInt = lee_rank_torus(n, m).values().sum();
                let expect = BigInt::from(2).pow(gcd(n, m) as u32);
                assert_eq!(total, expect, "T({n},{m})");
            }
        }
    }

    #[test]
    fn gr_lee_small() {
        let t = gr_lee_torus(2, 2);
        assert_eq!(t.dim(0, 0), 1);
        assert_eq!(t.dim(0, 2), 1);
        assert_eq!(t.dim(2, 4), 1);
        assert_eq!(t.dim(2, 6), 1);
        assert_eq!(t.total_free(), 4);

        let t = gr_lee_torus(4, 4);
        assert_eq!(t.dim(8, 20), 1);
        assert_eq!(t.dim(8, 22), 3);
        assert_eq!(t.dim(8, 24), 2);
    }

    #[test]
    fn gr_lee_marginals_match_ranks() {
        for n in 1..=8 {
            for m in 1..=8 {
                let gr = gr_lee_torus(n, m);
                let ranks = lee_rank_torus(n, m);
                let mut marg: BTreeMap<i64, BigInt> = BTreeMap::new();
                for (&(h, _), g) in &gr.groups {
                    *marg.entry(h).or_insert_with(BigInt::zero) += BigInt::from(g.free);
                }
                assert_eq!(marg, ranks, "T({n},{m})");
            }
        }
    }

    #[test]
    fn gr_parity_matches_components() {
        for n in 1..=8i64 {
            for m in 1..=8i64 {
                let d = gcd(n, m);
                let gr = gr_lee_torus(n, m);
                for &(_, q) in gr.groups.keys() {
                    assert_eq!(q.rem_euclid(2), d.rem_euclid(2), "T({n},{m}) q={q}");
                }
            }
        }
    }

    #[test]
    fn staircase_figure_values() {
        // Figure 1 green cells
        assert_eq!(q_nn(6, 0), Some(24));
        assert_eq!(q_nn(6, 10), Some(36));
        assert_eq!(q_nn(6, 16), Some(44));
        assert_eq!(q_nn(6, 18), Some(48));
        assert_eq!(q_nn(6, 19), None);
        // Figure 2 yellow cell
        assert_eq!(q_n1n(6, 11), Some(43));
        assert_eq!(h_max(6, StairFamily::Nn), 18);
        assert_eq!(h_max(6, StairFamily::N1n), 21);
        assert_eq!(h_max(1, StairFamily::Nn), 0);
        assert_eq!(q_nn(1, 0), Some(-1));
    }

    #[test]
    fn staircase_monotone_steps() {
        for n in 1..=200 {
            for family in [StairFamily::Nn, StairFamily::N1n] {
                let hm = h_max(n, family);
                let mut prev = None;
                for h in 0..=hm {
                    let v = stair(n, family, h).unwrap_or_else(|| panic!("finite on support: n={n} h={h}"));
                    if let Some(p) = prev {
                        let step = v - p;
                        assert!(
                            step == 0 || step == 2 || step == 4,
                            "bad step {step} at n={n}, h={h}"
                        );
                    }
                    prev = Some(v);
                }
            }
        }
    }

    #[test]
    fn q_n1n_clauses_agree_at_h_max() {
        for n in 2..=200 {
            let hm = h_max(n, StairFamily::Nn);
            let via_c = q_nn(n, hm).unwrap() + n - 1;
            let via_d = n * n / 2 + 2 * hm - 1;
            assert_eq!(via_c, via_d, "n={n}");
            assert_eq!(q_n1n(n, hm), Some(via_d));
        }
    }

    #[test]
    fn rep_dims() {
        assert_eq!(rep_dim(6, 3).unwrap(), 5.into());
        assert_eq!(rep_dim(6, 0).unwrap(), 1.into());
        assert_eq!(rep_dim(4, 2).unwrap(), 2.into());
        assert!(rep_dim(4, 3).is_err());
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), 1.into());
        assert_eq!(catalan(3), 5.into());
        assert_eq!(catalan(10), 16796.into());
    }

    #[test]
    fn k_poly_base_cases() {
        let k2 = k_poly(2);
        let expect = [(0, 1), (0, 3), (2, 5), (3, 9)];
        assert_eq!(k2.terms().count(), 4);
        for (t, q) in expect {
            assert_eq!(k2.coeff(t, q), 1.into());
        }
        // K_3 = Kh(T(4,3)): eight generators
        let k3 = k_poly(3);
        for (t, q) in [(0, 5), (0, 7), (2, 9), (3, 13), (4, 11), (4, 13), (5, 15), (5, 17)] {
            assert_eq!(k3.coeff(t, q), 1.into(), "K_3 at t^{t} q^{q}");
        }
        assert_eq!(k3.eval_one_one(), 8.into());
    }

    #[test]
    fn l_poly_base_cases() {
        assert_eq!(l_poly(0), LaurentPoly2::one());
        let l2 = l_poly(2);
        for (t, q) in [(0, 0), (0, 2), (2, 4), (2, 6)] {
            assert_eq!(l2.coeff(t, q), 1.into(), "L_2 at t^{t} q^{q}");
        }
        assert_eq!(l2.eval_one_one(), 4.into());
    }

    #[test]
    fn poly_coeffs_nonnegative() {
        for n in 0..=10 {
            assert!(k_poly(n).all_coeffs_nonneg(), "K_{n}");
            assert!(l_poly(n).all_coeffs_nonneg(), "L_{n}");
        }
    }

    #[test]
    fn q_relations_pass() {
        for n in 3..=200 {
            let r = check_q_relations(n);
            assert!(r.passed(), "n={n}: {:?}", r.failures);
        }
    }

    #[test]
    fn q_relations_flag_mutation() {
        // Perturb q_{6,6} by -2 at h = 10 and expect a violation.
        let n = 6;
        let mutated = StaircaseFn::from_fn(0, h_max(n, StairFamily::Nn), move |h| {
            q_nn(n, h).map(|v| if h == 10 { v - 2 } else { v })
        });
        let r = check_q_relations_on(n, &mutated);
        assert!(!r.passed());
    }

    #[test]
    fn twist_bounds_sharp() {
        // T(2, -2k) family through the unlink hits the lower bound -2p.
        let r = twist_bound_check(2, -2, 0, 1, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.normalized_delta, -2);
        assert_eq!(r.interval, (-2, 0));

        // Parallel orientations: difference 0 after normalization.
        for n in 2..=6 {
            for m in 1..=3 {
                let r = twist_bound_check(n, m, m + 2 * n, gcd(n, m), 0).unwrap();
                assert!(r.pass, "{r:?}");
                assert_eq!(r.normalized_delta, 0, "{r:?}");
            }
        }
    }

    #[test]
    fn twist_bounds_grid() {
        for n in 1..=6i64 {
            for m in -8..=8i64 {
                for k in 1..=3i64 {
                    let m2 = m + k * n;
                    let d = if m != 0 { gcd(n, m) } else { n };
                    let d2 = if m2 != 0 { gcd(n, m2) } else { n };
                    if d != d2 || (m == 0 && d != n) || (m2 == 0 && d2 != n) {
                        continue;
                    }
                    for q in 0..=d {
                        let p = d - q;
                        let r = twist_bound_check(n, m, m2, p, q).unwrap();
                        assert!(r.pass, "{r:?}");
                    }
                }
            }
        }
    }
}
