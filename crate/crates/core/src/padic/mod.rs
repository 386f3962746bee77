//! Exact rational and p-adic valuation arithmetic.
//!
//! Scalars are [`BigRational`]s. Nothing here approximates a p-adic number;
//! truncation to a finite precision only happens in [`crate::group`].

mod matrix;
mod poly;
mod smith;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use matrix::{QMatrix, Subspace};
pub use poly::{charpoly_roots_rational, newton_slopes, rational_roots};
pub use smith::{hermite_p, smith_p, smith_profile, SmithProfile};

pub type Rational = BigRational;

/// A prime number, checked by trial division on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn as_rational(self) -> Rational {
        Rational::from_integer(self.as_bigint())
    }

    /// `p^k` as a big integer.
    pub fn pow(self, k: u32) -> BigInt {
        num_traits::pow(self.as_bigint(), k as usize)
    }

    /// `p^k` for a possibly negative exponent.
    pub fn rational_pow(self, k: i64) -> Rational {
        let m = self.pow(k.unsigned_abs() as u32);
        if k >= 0 {
            Rational::from_integer(m)
        } else {
            Rational::new(BigInt::one(), m)
        }
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Prime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// The p-adic valuation of a scalar. `Infinite` is reserved for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PValuation {
    Finite(i64),
    Infinite,
}

impl PValuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            PValuation::Finite(v) => Some(v),
            PValuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == PValuation::Infinite
    }

    /// `|x|_p = p^(-v)`, zero for the infinite valuation.
    pub fn norm(self, p: Prime) -> Rational {
        match self {
            PValuation::Finite(v) => p.rational_pow(-v),
            PValuation::Infinite => Rational::zero(),
        }
    }
}

impl PartialOrd for PValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PValuation::Infinite, PValuation::Infinite) => Ordering::Equal,
            (PValuation::Infinite, _) => Ordering::Greater,
            (_, PValuation::Infinite) => Ordering::Less,
            (PValuation::Finite(a), PValuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for PValuation {
    type Output = PValuation;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (PValuation::Finite(a), PValuation::Finite(b)) => PValuation::Finite(a + b),
            _ => PValuation::Infinite,
        }
    }
}

impl fmt::Display for PValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PValuation::Finite(v) => write!(f, "{v}"),
            PValuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for PValuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PValuation::Finite(v) => s.serialize_i64(*v),
            PValuation::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for PValuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "inf" => Ok(PValuation::Infinite),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(PValuation::Finite)
                .ok_or_else(|| serde::de::Error::custom("valuation out of range")),
            other => Err(serde::de::Error::custom(format!("bad valuation {other}"))),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: Prime) -> u64 {
    debug_assert!(!n.is_zero());
    let p = p.as_bigint();
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `Infinite` for zero.
pub fn vp(x: &Rational, p: Prime) -> PValuation {
    if x.is_zero() {
        return PValuation::Infinite;
    }
    PValuation::Finite(vp_int(x.numer(), p) as i64 - vp_int(x.denom(), p) as i64)
}

pub fn is_p_integral(x: &Rational, p: Prime) -> bool {
    x.denom().is_one() || !(x.denom() % p.as_bigint()).is_zero()
}

/// Canonical residue of a p-integral rational in `[0, p^e)`.
pub fn residue(x: &Rational, p: Prime, e: u32) -> Result<BigInt> {
    if !is_p_integral(x, p) {
        return Err(Error::InvalidInput(format!("{x} is not p-integral")));
    }
    let m = p.pow(e);
    let num = x.numer().mod_floor(&m);
    if x.denom().is_one() {
        return Ok(num);
    }
    let inv =
        mod_inverse(&x.denom().mod_floor(&m), &m).ok_or_else(|| Error::Internal("p-unit without inverse".into()))?;
    Ok((num * inv).mod_floor(&m))
}

/// Inverse of `a` modulo `m` when it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Lowest-terms string form, `"a"` when the denominator is one.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapters for rationals as strings.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(xs.iter().map(format_rational))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&rat(5), p(5)), PValuation::Finite(1));
        assert_eq!(vp(&rat(-128), p(2)), PValuation::Finite(7));
        assert_eq!(vp(&frac(3, 5), p(5)), PValuation::Finite(-1));
        assert_eq!(vp(&rat(0), p(3)), PValuation::Infinite);
    }

    #[test]
    fn valuation_brute_force_division() {
        // repeated division, independent of vp_int
        for n in 1i64..400 {
            for q in [2u64, 3, 5, 7] {
                let mut m = n;
                let mut v = 0;
                while m % q as i64 == 0 {
                    m /= q as i64;
                    v += 1;
                }
                assert_eq!(vp(&rat(n), p(q)), PValuation::Finite(v));
                assert_eq!(vp(&rat(-n), p(q)), PValuation::Finite(v));
            }
        }
    }

    #[test]
    fn non_prime_rejected() {
        for n in [0, 1, 4, 9, 15, 91] {
            assert!(matches!(Prime::new(n), Err(Error::InvalidInput(_))));
        }
        assert!(Prime::new(97).is_ok());
    }

    #[test]
    fn infinite_valuation_is_absorbing() {
        let a = PValuation::Finite(3);
        assert_eq!(a + PValuation::Infinite, PValuation::Infinite);
        assert!(PValuation::Infinite > PValuation::Finite(i64::MAX));
        assert_eq!(PValuation::Finite(2).norm(p(3)), frac(1, 9));
    }

    #[test]
    fn residues() {
        // 5/2 mod 25: 2^{-1} = 13, 5 * 13 = 65 = 15 mod 25
        assert_eq!(residue(&frac(5, 2), p(5), 2).unwrap(), BigInt::from(15));
        assert_eq!(residue(&rat(-1), p(3), 2).unwrap(), BigInt::from(8));
        assert!(residue(&frac(1, 5), p(5), 1).is_err());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(format_rational(&frac(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(12)), "12");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    proptest::proptest! {
        #[test]
        fn valuation_is_multiplicative(a in 1i64..10_000, b in 1i64..10_000, c in 1i64..500, q in 0usize..4) {
            let q = p([2, 3, 5, 7][q]);
            let x = frac(a, c);
            let y = frac(-b, c + 1);
            proptest::prop_assert_eq!(vp(&(&x * &y), q), vp(&x, q) + vp(&y, q));
        }
    }
}
