use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Exact rational number in canonical form (positive denominator, reduced).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(r: BigRational) -> Self {
        Rational(r)
    }

    /// `n / d` for machine integers; panics on `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Rational::new(n, d).expect("nonzero denominator")
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn into_big(self) -> BigRational {
        self.0
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    /// Lossy conversion for heuristics only (initial guesses, logging).
    pub fn to_f64(&self) -> f64 {
        match self.0.to_f64() {
            Some(v) if v.is_finite() => v,
            _ => {
                // Fall back to a log-scale estimate for huge magnitudes.
                let nb = self.numer().bits() as i64;
                let db = self.denom().bits() as i64;
                let e = nb - db;
                let s = if self.is_negative() { -1.0 } else { 1.0 };
                if e > 1000 {
                    s * f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        let p = BigInt::from(1) << e.unsigned_abs();
        if e >= 0 {
            Rational::from_integer(p)
        } else {
            Rational(BigRational::new_raw(BigInt::from(1), p))
        }
    }

    /// Rough log2 of |self| (floor of bit-length difference); `None` for zero.
    pub fn log2_estimate(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.numer().bits() as i64 - self.denom().bits() as i64)
    }

    /// Largest `m / 2^bits <= self`.
    pub fn floor_dyadic(&self, bits: u32) -> Self {
        let scaled = &self.0 * BigRational::from_integer(BigInt::one() << bits);
        Rational(BigRational::new(
            scaled.floor().to_integer(),
            BigInt::one() << bits,
        ))
    }

    /// Smallest `m / 2^bits >= self`.
    pub fn ceil_dyadic(&self, bits: u32) -> Self {
        let scaled = &self.0 * BigRational::from_integer(BigInt::one() << bits);
        Rational(BigRational::new(
            scaled.ceil().to_integer(),
            BigInt::one() << bits,
        ))
    }

    /// A value `<= self` with about `sig` significant bits.
    pub fn round_down_sig(&self, sig: u32) -> Self {
        self.round_sig(sig, false)
    }

    /// A value `>= self` with about `sig` significant bits.
    pub fn round_up_sig(&self, sig: u32) -> Self {
        self.round_sig(sig, true)
    }

    fn round_sig(&self, sig: u32, up: bool) -> Self {
        if self.is_zero() || (self.numer().bits() as u32 <= sig && self.denom().bits() as u32 <= sig)
        {
            return self.clone();
        }
        let e = self.log2_estimate().unwrap_or(0);
        let shift = sig as i64 - e;
        if shift <= 0 {
            let unit = BigRational::from_integer(BigInt::one() << (-shift) as usize);
            let q = &self.0 / &unit;
            let r = if up { q.ceil() } else { q.floor() };
            Rational(r * unit)
        } else if up {
            self.ceil_dyadic(shift as u32)
        } else {
            self.floor_dyadic(shift as u32)
        }
    }

    /// Rational lower bound for `sqrt(self)` accurate to about `bits` bits
    /// after the binary point; exact when `self` is a square of a rational.
    pub fn sqrt_floor(&self, bits: u32) -> Result<Self> {
        self.sqrt_bound(bits, false)
    }

    /// Rational upper bound for `sqrt(self)`; exact on rational squares.
    pub fn sqrt_ceil(&self, bits: u32) -> Result<Self> {
        self.sqrt_bound(bits, true)
    }

    fn sqrt_bound(&self, bits: u32, up: bool) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::InvalidArgument("square root of a negative rational".into()));
        }
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let (n, d) = (self.numer(), self.denom());
        let (sn, sd) = (n.sqrt(), d.sqrt());
        if &(&sn * &sn) == n && &(&sd * &sd) == d {
            return Ok(Rational(BigRational::new(sn, sd)));
        }
        // sqrt(n/d) = sqrt(n*d)/d; scale by 4^bits.
        let scaled: BigInt = (n * d) << (2 * bits as usize);
        let mut s = scaled.sqrt();
        if up && &s * &s != scaled {
            s += 1;
        }
        Ok(Rational(BigRational::new(s, d << bits as usize)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            BigInt::from_str(t.trim()).map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Rational::new(parse_int(p)?, q)
            }
            None => Ok(Rational::from_integer(parse_int(s)?)),
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
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division by zero panics with the same message as `Error::DivisionByZero`;
// use `checked_div` where the divisor is not known to be nonzero.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        &self / rhs
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
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

/// `lcm` of the denominators of `values` (1 for an empty list).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn addition_is_exact() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
    }

    #[test]
    fn canonical_form() {
        let r = Rational::new(2, 4).unwrap();
        assert_eq!(r.to_string(), "1/2");
        assert_eq!(Rational::new(3, -6).unwrap().to_string(), "-1/2");
        assert_eq!(Rational::from_integer(3).to_string(), "3/1");
    }

    #[test]
    fn comparison_by_cross_multiplication() {
        assert!(q("7/5") < q("10/7"));
        assert!(q("-1/2") < q("-1/3"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Rational::new(1, 0).unwrap_err(), Error::DivisionByZero);
        assert_eq!(q("1/2").checked_div(&Rational::zero()).unwrap_err().to_string(), "division by zero");
        assert_eq!(Rational::zero().recip().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
        assert_eq!(q("-7"), Rational::from_integer(-7));
    }

    #[test]
    fn sqrt_bounds_bracket_and_are_exact_on_squares() {
        let two = q("2");
        let lo = two.sqrt_floor(40).unwrap();
        let hi = two.sqrt_ceil(40).unwrap();
        assert!(&lo * &lo <= two && &hi * &hi >= two);
        assert!(&hi - &lo <= Rational::new(1, BigInt::one() << 39).unwrap());
        assert_eq!(q("25/49").sqrt_floor(8).unwrap(), q("5/7"));
        assert_eq!(q("25/49").sqrt_ceil(8).unwrap(), q("5/7"));
    }

    #[test]
    fn significant_bit_rounding_is_directed() {
        let x = q("123456789123456789/1000000000000000001");
        let lo = x.round_down_sig(20);
        let hi = x.round_up_sig(20);
        assert!(lo <= x && x <= hi);
        assert!(lo.denom().bits() <= 40);
        let big = q("123456789123456789123456789");
        assert!(big.round_down_sig(10) <= big && big.round_up_sig(10) >= big);
    }
}
