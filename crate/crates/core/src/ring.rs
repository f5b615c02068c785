//! Coefficient rings for homology computations: ℤ, ℚ and prime fields.

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Ring element operations needed by the chain-complex machinery.
///
/// Everything is exact; there is no floating point anywhere in the engine.
pub trait Coeff: Clone + PartialEq + Eq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// Multiplicative inverse, when the element is a unit.
    fn inv(&self) -> Option<Self>;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Characteristic of the ring (0 for ℤ and ℚ).
    fn characteristic() -> u64;
    fn is_field() -> bool;
    /// 1/2 when invertible; canonical Lee generators need it.
    fn half() -> Option<Self> {
        Self::from_i64(2).inv()
    }
}

/// Integers with arbitrary precision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZZ(pub BigInt);

impl Display for ZZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.0, f)
    }
}

impl Coeff for ZZ {
    fn zero() -> Self {
        ZZ(BigInt::zero())
    }
    fn one() -> Self {
        ZZ(BigInt::one())
    }
    fn from_i64(v: i64) -> Self {
        ZZ(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_unit(&self) -> bool {
        self.0.abs().is_one()
    }
    fn inv(&self) -> Option<Self> {
        self.is_unit().then(|| self.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        ZZ(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        ZZ(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        ZZ(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        ZZ(-&self.0)
    }
    fn characteristic() -> u64 {
        0
    }
    fn is_field() -> bool {
        false
    }
}

/// Rationals with arbitrary precision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QQ(pub BigRational);

impl Display for QQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(&self.0, f)
    }
}

impl Coeff for QQ {
    fn zero() -> Self {
        QQ(BigRational::zero())
    }
    fn one() -> Self {
        QQ(BigRational::one())
    }
    fn from_i64(v: i64) -> Self {
        QQ(BigRational::from(BigInt::from(v)))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_unit(&self) -> bool {
        !self.0.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| QQ(self.0.recip()))
    }
    fn add(&self, rhs: &Self) -> Self {
        QQ(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        QQ(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        QQ(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        QQ(-&self.0)
    }
    fn characteristic() -> u64 {
        0
    }
    fn is_field() -> bool {
        true
    }
}

/// Prime field 𝔽_P, P a const-generic prime.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp<const P: u64>(pub u64);

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Fp<P> {
    pub fn new(v: i64) -> Self {
        let m = v.rem_euclid(P as i64) as u64;
        Fp(m)
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<P>(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = Fp((acc.0 as u128 * base.0 as u128 % P as u128) as u64);
            }
            base = Fp((base.0 as u128 * base.0 as u128 % P as u128) as u64);
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> Coeff for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn is_unit(&self) -> bool {
        self.0 != 0
    }
    fn inv(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(P - 2))
    }
    fn add(&self, rhs: &Self) -> Self {
        Fp((self.0 + rhs.0) % P)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Fp((self.0 + P - rhs.0) % P)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp((self.0 as u128 * rhs.0 as u128 % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
    fn characteristic() -> u64 {
        P
    }
    fn is_field() -> bool {
        true
    }
}

/// Runtime selection of the coefficient ring.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Z,
    Q,
    Fp(u64),
}

impl RingSpec {
    pub fn is_field(&self) -> bool {
        !matches!(self, RingSpec::Z)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::Fp(p) => *p,
            _ => 0,
        }
    }

    pub fn name(&self) -> String {
        match self {
            RingSpec::Z => "Z".into(),
            RingSpec::Q => "Q".into(),
            RingSpec::Fp(p) => format!("F{p}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Z" | "z" => Ok(RingSpec::Z),
            "Q" | "q" => Ok(RingSpec::Q),
            _ => {
                let p = s
                    .strip_prefix(['F', 'f'])
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| format!("unknown ring: {s}"))?;
                if SUPPORTED_PRIMES.contains(&p) {
                    Ok(RingSpec::Fp(p))
                } else {
                    Err(format!("unsupported prime field F{p} (supported: {SUPPORTED_PRIMES:?})"))
                }
            }
        }
    }
}

impl Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

pub const SUPPORTED_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Monomorphize `$body` over the ring named by a [`RingSpec`].
#[macro_export]
macro_rules! with_ring {
    ($spec:expr, $R:ident, $body:expr) => {{
        use $crate::ring::{Fp, RingSpec, QQ, ZZ};
        match $spec {
            RingSpec::Z => {
                type $R = ZZ;
                $body
            }
            RingSpec::Q => {
                type $R = QQ;
                $body
            }
            RingSpec::Fp(2) => {
                type $R = Fp<2>;
                $body
            }
            RingSpec::Fp(3) => {
                type $R = Fp<3>;
                $body
            }
            RingSpec::Fp(5) => {
                type $R = Fp<5>;
                $body
            }
            RingSpec::Fp(7) => {
                type $R = Fp<7>;
                $body
            }
            RingSpec::Fp(11) => {
                type $R = Fp<11>;
                $body
            }
            RingSpec::Fp(13) => {
                type $R = Fp<13>;
                $body
            }
            RingSpec::Fp(p) => panic!("unsupported prime field F{p}"),
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse() {
        for v in 1..7 {
            let x = Fp::<7>::new(v);
            assert_eq!(x.mul(&x.inv().unwrap()), Fp::<7>::one());
        }
    }

    #[test]
    fn ring_spec_parse() {
        assert_eq!("Z".parse::<RingSpec>().unwrap(), RingSpec::Z);
        assert_eq!("F3".parse::<RingSpec>().unwrap(), RingSpec::Fp(3));
        assert!("F4".parse::<RingSpec>().is_err());
    }

    #[test]
    fn halves() {
        assert_eq!(ZZ::half(), None);
        assert!(QQ::half().is_some());
        assert_eq!(Fp::<2>::half(), None);
        assert_eq!(Fp::<3>::half(), Some(Fp::<3>(2)));
    }
}
