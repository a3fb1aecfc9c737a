//! Exact rational scalars and the Pochhammer/factorial primitives.
//!
//! [`Rational`] wraps a canonical big-integer fraction: the denominator is
//! always positive and coprime to the numerator. Values cross text
//! boundaries (CLI, JSON) as `"p/q"`, or `"p"` when the denominator is one.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

/// Builds `n/d` in canonical form.
pub fn rat(n: i64, d: i64) -> Result<Rational> {
    if d == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational(BigRational::new(n.into(), d.into())))
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `Some(v)` when the value is an integer `v <= 0`; the Pochhammer
    /// symbol `(v)_n` then vanishes for every `n > -v`.
    pub fn nonpositive_integer(&self) -> Option<i64> {
        if self.is_integer() && !self.0.is_positive() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// Nearest double, rounding ties to even.
    pub fn to_f64(&self) -> Result<f64> {
        let v = self.0.to_f64().unwrap_or(f64::NAN);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow(self.to_string()))
        }
    }

    pub fn add_int(&self, n: i64) -> Self {
        Rational(&self.0 + BigRational::from_integer(n.into()))
    }

    pub fn halve(&self) -> Self {
        Rational(&self.0 / BigRational::from_integer(2.into()))
    }
}

/// Rising factorial `a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: &Rational, n: usize) -> Rational {
    let mut acc = BigRational::one();
    let mut factor = a.0.clone();
    for _ in 0..n {
        if factor.is_zero() {
            return Rational::zero();
        }
        acc *= &factor;
        factor += BigInt::one();
    }
    Rational(acc)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = if allow_sign { s.strip_prefix('-').unwrap_or(s) } else { s };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_owned());
        let t = s.trim();
        match t.split_once('/') {
            None => Ok(Rational::from_integer(parse_int(t, true).ok_or_else(bad)?)),
            Some((p, q)) => {
                let p = parse_int(p, true).ok_or_else(bad)?;
                let q = parse_int(q, false).ok_or_else(bad)?;
                Rational::from_big(p, q)
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        // Integers are accepted as bare JSON numbers for convenience.
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(Rational::from_integer(n)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigUint> for Rational {
    fn from(n: BigUint) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like the integer types; use `checked_div` at
// untrusted boundaries.
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer((*other).into())))
    }
}

/// Greatest common divisor helper exposed for tests of canonical form.
pub fn is_canonical(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().abs().gcd(r.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rat_canonicalizes() {
        assert_eq!(rat(2, 4).unwrap(), q("1/2"));
        assert_eq!(rat(-3, -6).unwrap(), q("1/2"));
        assert_eq!(rat(3, -6).unwrap().to_string(), "-1/2");
        assert_eq!(rat(5, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn pochhammer_examples() {
        assert!(pochhammer(&q("7/3"), 0).is_one());
        assert!(pochhammer(&q("-2"), 3).is_zero());
        assert_eq!(pochhammer(&q("-2"), 2), q("2"));
        assert_eq!(pochhammer(&q("1/2"), 3), q("15/8"));
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(1), BigUint::from(1u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
    }

    #[test]
    fn to_f64_examples() {
        assert_eq!(q("1/2").to_f64().unwrap(), 0.5);
        // The decimal parser is correctly rounded, so a long expansion is an
        // independent reference for the nearest double.
        let third: f64 = "0.33333333333333333333333333333333333333".parse().unwrap();
        assert_eq!(q("1/3").to_f64().unwrap().to_bits(), third.to_bits());
        let big = Rational::from_integer(num_traits::pow(BigInt::from(10), 400));
        assert!(matches!(big.to_f64(), Err(Error::Overflow(_))));
        assert!(matches!((-big).to_f64(), Err(Error::Overflow(_))));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q("-6/4").to_string(), "-3/2");
        assert_eq!(q("8/4").to_string(), "2");
        assert_eq!(q(" 0 ").to_string(), "0");
        for bad in ["", "1/", "/2", "1/-2", "+1", "1.5", "a/b", "1/0"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn serde_round_trip() {
        let v: Vec<Rational> = serde_json::from_str(r#"["1/3", 4, "-2"]"#).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/3","4","-2"]"#);
    }

    #[test]
    fn nonpositive_integer_detection() {
        assert_eq!(q("0").nonpositive_integer(), Some(0));
        assert_eq!(q("-4").nonpositive_integer(), Some(-4));
        assert_eq!(q("3").nonpositive_integer(), None);
        assert_eq!(q("-1/2").nonpositive_integer(), None);
    }
}
