//! Two-variable Laurent polynomials in (t, q) with arbitrary-precision
//! integer coefficients, used for Poincaré polynomials and recursions.

use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Finitely supported map (t-exponent, q-exponent) → coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, BigInt::one())
    }

    pub fn monomial(t: i64, q: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((t, q), c);
        }
        LaurentPoly2 { terms }
    }

    /// t^a q^b with coefficient 1.
    pub fn tq(t: i64, q: i64) -> Self {
        Self::monomial(t, q, BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: i64, q: i64) -> BigInt {
        self.terms.get(&(t, q)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, t: i64, q: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((t, q)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(t, q));
        }
    }

    /// Multiply by the monomial t^a q^b.
    pub fn shift(&self, t: i64, q: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&(a, b), c)| ((a + t, b + q), c.clone()))
            .collect();
        LaurentPoly2 { terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(&k, v)| (k, v * c)).collect();
        LaurentPoly2 { terms }
    }

    /// Substitute t := -1, leaving a pure q-polynomial (t-exponent 0).
    pub fn eval_t_minus_one(&self) -> Self {
        let mut out = Self::zero();
        for (&(t, q), c) in &self.terms {
            let c = if t.rem_euclid(2) == 1 { -c } else { c.clone() };
            out.add_term(0, q, &c);
        }
        out
    }

    /// Substitute t := 1, q := 1 (total coefficient sum).
    pub fn eval_one_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn all_coeffs_nonneg(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        for (&(t, q), c) in &rhs.terms {
            out.add_term(t, q, c);
        }
        out
    }
}

impl AddAssign<&LaurentPoly2> for LaurentPoly2 {
    fn add_assign(&mut self, rhs: &LaurentPoly2) {
        for (&(t, q), c) in &rhs.terms {
            self.add_term(t, q, c);
        }
    }
}

impl Mul for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn mul(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = LaurentPoly2::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &rhs.terms {
                out.add_term(a + x, b + y, &(c * d));
            }
        }
        out
    }
}

impl Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(t, q), c) in &self.terms {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let mut printed = false;
            if !mag.is_one() || (t == 0 && q == 0) {
                write!(f, "{mag}")?;
                printed = true;
            }
            if t != 0 {
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "t^{t}")?;
                printed = true;
            }
            if q != 0 {
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "q^{q}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = LaurentPoly2::tq(0, -1);
        let q = LaurentPoly2::tq(0, 1);
        let u = &p + &q; // q^{-1} + q
        let sq = &u * &u;
        assert_eq!(sq.coeff(0, 0), BigInt::from(2));
        assert_eq!(sq.coeff(0, 2), BigInt::from(1));
        assert_eq!(sq.coeff(0, -2), BigInt::from(1));
        assert_eq!(sq.eval_one_one(), BigInt::from(4));
    }

    #[test]
    fn t_substitution() {
        let p = &LaurentPoly2::tq(3, 9) + &LaurentPoly2::tq(2, 5);
        let e = p.eval_t_minus_one();
        assert_eq!(e.coeff(0, 9), BigInt::from(-1));
        assert_eq!(e.coeff(0, 5), BigInt::from(1));
    }
}
