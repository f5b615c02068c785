//! Kauffman-bracket state sum, normalized as the graded Euler characteristic
//! Σ (−1)^h q^j dim Kh^{h,j} ⊗ ℚ. A Temperley-Lieb transfer-matrix route
//! evaluates braid closures whose crossing count exceeds the state-sum cap.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::cube::{resolution_circles, EngineError};
use crate::links::{BraidWord, LinkDiagram};
use crate::poly::LaurentPoly2;

pub const STATE_SUM_LIMIT: usize = 22;

/// Naive 2^c state sum: (−1)^{n₋} q^{n₊−2n₋} Σ_s (−q)^{|s|} (q+q⁻¹)^{circles}.
pub fn jones_kauffman(diag: &LinkDiagram) -> Result<LaurentPoly2, EngineError> {
    let c = diag.crossing_count();
    if c > STATE_SUM_LIMIT {
        return Err(EngineError::TooManyCrossings { count: c, limit: STATE_SUM_LIMIT });
    }
    let (n_pos, n_neg) = diag.signed_crossing_counts();
    let delta = &LaurentPoly2::tq(0, 1) + &LaurentPoly2::tq(0, -1);
    let mut powers = vec![LaurentPoly2::one()];
    for _ in 0..(c + diag.free_loops + 2) {
        powers.push(powers.last().unwrap() * &delta);
    }
    let mut body = LaurentPoly2::zero();
    for v in 0..(1usize << c) {
        let vertex: Vec<u8> = (0..c).map(|j| ((v >> j) & 1) as u8).collect();
        let (_, circles) = resolution_circles(diag, &vertex);
        let w = (v as u32).count_ones() as i64;
        let sign = if w % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let term = powers[circles].shift(0, w).scale(&sign);
        body += &term;
    }
    let sign = if n_neg % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    Ok(body.shift(0, n_pos as i64 - 2 * n_neg as i64).scale(&sign))
}

/// Planar matchings of n top and n bottom points, encoded as a pairing on
/// 0..2n with top i ↦ i and bottom j ↦ n + j.
type Matching = Vec<u8>;

fn identity_matching(n: usize) -> Matching {
    let mut m = vec![0u8; 2 * n];
    for i in 0..n {
        m[i] = (n + i) as u8;
        m[n + i] = i as u8;
    }
    m
}

/// Compose the Temperley-Lieb generator e_i (cap i,i+1 on top of the current
/// bottom, cup below) into a matching; returns (new matching, circles formed).
fn apply_ei(m: &Matching, n: usize, i: usize) -> (Matching, usize) {
    let b1 = (n + i) as u8;
    let b2 = (n + i + 1) as u8;
    let p1 = m[b1 as usize];
    let p2 = m[b2 as usize];
    let mut out = m.clone();
    let mut circles = 0;
    if p1 == b2 {
        // the cap closes a loop against the existing cup
        circles = 1;
        out[b1 as usize] = b2;
        out[b2 as usize] = b1;
    } else {
        out[p1 as usize] = p2;
        out[p2 as usize] = p1;
        out[b1 as usize] = b2;
        out[b2 as usize] = b1;
    }
    (out, circles)
}

/// Kauffman bracket of a braid closure through the Temperley-Lieb algebra:
/// σ_i^{+} ↦ id + (−q)·e_i, σ_i^{−} ↦ e_i + (−q)·id, closed by the Markov
/// trace with loop value (q + q⁻¹). Equals the state sum, letter by letter.
pub fn jones_braid(b: &BraidWord) -> LaurentPoly2 {
    let n = b.strands;
    let delta = &LaurentPoly2::tq(0, 1) + &LaurentPoly2::tq(0, -1);
    let minus_q = LaurentPoly2::tq(0, 1).scale(&(-BigInt::one()));
    let mut state: BTreeMap<Matching, LaurentPoly2> = BTreeMap::new();
    state.insert(identity_matching(n), LaurentPoly2::one());

    let add = |st: &mut BTreeMap<Matching, LaurentPoly2>, m: Matching, p: LaurentPoly2| {
        if p.is_zero() {
            return;
        }
        let e = st.entry(m).or_insert_with(LaurentPoly2::zero);
        *e += &p;
        if e.is_zero() {
            // keep the map small
        }
    };

    let mut n_neg = 0usize;
    for &w in &b.letters {
        let i = w.unsigned_abs() as usize - 1;
        if w < 0 {
            n_neg += 1;
        }
        let mut next: BTreeMap<Matching, LaurentPoly2> = BTreeMap::new();
        for (m, coeff) in &state {
            let (me, circ) = apply_ei(m, n, i);
            let mut ecoeff = coeff.clone();
            for _ in 0..circ {
                ecoeff = &ecoeff * &delta;
            }
            if w > 0 {
                // id term with weight 1 (0-smoothing), e_i with weight −q
                add(&mut next, m.clone(), coeff.clone());
                add(&mut next, me, &ecoeff * &minus_q);
            } else {
                // 0-smoothing of a negative crossing is the cap-cup
                add(&mut next, me, ecoeff);
                add(&mut next, m.clone(), coeff * &minus_q);
            }
        }
        state = next;
    }

    // Markov trace: close strand j's top to its bottom; count loops.
    let mut total = LaurentPoly2::zero();
    for (m, coeff) in &state {
        let mut pairs = m.clone();
        let mut loops = 0usize;
        for j in 0..n {
            let top = j as u8;
            let bot = (n + j) as u8;
            let pt = pairs[top as usize];
            let pb = pairs[bot as usize];
            if pt == bot {
                loops += 1;
            } else {
                pairs[pt as usize] = pb;
                pairs[pb as usize] = pt;
            }
            // mark consumed
            pairs[top as usize] = top;
            pairs[bot as usize] = bot;
        }
        let mut c = coeff.clone();
        for _ in 0..loops {
            c = &c * &delta;
        }
        total += &c;
    }

    let n_pos = b.letters.len() - n_neg;
    let sign = if n_neg % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    total.shift(0, n_pos as i64 - 2 * n_neg as i64).scale(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::links::{braid_closure, torus_braid};

    #[test]
    fn unknot() {
        let p = jones_kauffman(&LinkDiagram::unknot()).unwrap();
        let expect = &LaurentPoly2::tq(0, 1) + &LaurentPoly2::tq(0, -1);
        assert_eq!(p, expect);
    }

    #[test]
    fn empty_link() {
        let p = jones_kauffman(&LinkDiagram::empty()).unwrap();
        assert_eq!(p, LaurentPoly2::one());
    }

    #[test]
    fn trefoil_euler_characteristic() {
        // χ_q(Kh(T(3,2))) = q + q³ + q⁵ − q⁹
        let d = braid_closure(&torus_braid(3, 2).unwrap());
        let p = jones_kauffman(&d).unwrap();
        assert_eq!(p.coeff(0, 1), 1.into());
        assert_eq!(p.coeff(0, 3), 1.into());
        assert_eq!(p.coeff(0, 5), 1.into());
        assert_eq!(p.coeff(0, 9), (-1).into());
        assert_eq!(p.terms().count(), 4);
    }

    #[test]
    fn hopf_matches_cube_euler() {
        use crate::complex::{homology_q_from_z, homology_z};
        use crate::cube::{khovanov_cube, NAIVE_LIMIT};
        let d = braid_closure(&torus_braid(2, 2).unwrap());
        let cx = khovanov_cube::<crate::ring::ZZ>(&d, NAIVE_LIMIT).unwrap();
        let _ = homology_z(&cx);
        let t = homology_q_from_z(&cx);
        assert_eq!(t.euler_characteristic(), jones_kauffman(&d).unwrap());
    }

    #[test]
    fn braid_route_matches_state_sum() {
        for (n, m) in [(2i64, 2i64), (2, 3), (3, 2), (3, 4), (2, -3), (4, 3)] {
            let b = torus_braid(n, m).unwrap();
            let d = braid_closure(&b);
            assert_eq!(jones_braid(&b), jones_kauffman(&d).unwrap(), "T({n},{m})");
        }
    }

    #[test]
    fn braid_route_mixed_words() {
        use crate::links::BraidWord;
        for letters in [vec![1, -2, 1, -2], vec![1, 1, -2, 2, -1], vec![-1, -1, -1]] {
            let b = BraidWord::new(3, letters).unwrap();
            let d = braid_closure(&b);
            assert_eq!(jones_braid(&b), jones_kauffman(&d).unwrap());
        }
    }
}
