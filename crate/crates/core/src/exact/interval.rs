use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;
use crate::{Error, Result};

/// Bits after the binary point used by default for square-root bounds.
pub(crate) const SQRT_BITS: u32 = 96;

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealInterval {
    lo: Rational,
    hi: Rational,
}

impl RealInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(RealInterval { lo, hi })
    }

    pub(crate) fn new_unchecked(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        RealInterval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        RealInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) * Rational::ratio(1, 2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_subset_of(&self, other: &RealInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the interior of `other`.
    pub fn is_interior_of(&self, other: &RealInterval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersects(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &RealInterval) -> Option<RealInterval> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        (lo <= hi).then(|| RealInterval { lo, hi })
    }

    pub fn hull(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: std::cmp::min(&self.lo, &other.lo).clone(),
            hi: std::cmp::max(&self.hi, &other.hi).clone(),
        }
    }

    pub fn add(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &RealInterval) -> RealInterval {
        RealInterval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn neg(&self) -> RealInterval {
        RealInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, other: &RealInterval) -> RealInterval {
        if self.is_point() && other.is_point() {
            return Self::point(&self.lo * &other.lo);
        }
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RealInterval { lo, hi }
    }

    pub fn scale(&self, k: &Rational) -> RealInterval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            RealInterval { lo: b, hi: a }
        } else {
            RealInterval { lo: a, hi: b }
        }
    }

    /// Enclosure of `{x^2 : x in self}`; tighter than `mul(self, self)`.
    pub fn sqr(&self) -> RealInterval {
        let (a, b) = (&self.lo * &self.lo, &self.hi * &self.hi);
        if self.contains_zero() {
            RealInterval {
                lo: Rational::zero(),
                hi: a.max(b),
            }
        } else if a <= b {
            RealInterval { lo: a, hi: b }
        } else {
            RealInterval { lo: b, hi: a }
        }
    }

    /// `{|x| : x in self}`.
    pub fn abs(&self) -> RealInterval {
        if self.contains_zero() {
            RealInterval {
                lo: Rational::zero(),
                hi: self.lo.abs().max(self.hi.abs()),
            }
        } else if self.lo.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Smallest `|x|` over the interval.
    pub fn mig(&self) -> Rational {
        self.abs().lo
    }

    /// Largest `|x|` over the interval.
    pub fn mag(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn recip(&self) -> Result<RealInterval> {
        if self.contains_zero() {
            return Err(Error::PossibleDivisionByZero);
        }
        Ok(RealInterval {
            lo: self.hi.recip()?,
            hi: self.lo.recip()?,
        })
    }

    pub fn div(&self, other: &RealInterval) -> Result<RealInterval> {
        Ok(self.mul(&other.recip()?))
    }

    /// Enclosure of `{sqrt(x)}` for a nonnegative interval; exact on rational squares.
    pub fn sqrt(&self) -> Result<RealInterval> {
        if self.lo.is_negative() {
            return Err(Error::InvalidArgument("square root of an interval with negative part".into()));
        }
        Ok(RealInterval {
            lo: self.lo.sqrt_floor(SQRT_BITS)?,
            hi: self.hi.sqrt_ceil(SQRT_BITS)?,
        })
    }

    /// Outward rounding of both endpoints to denominators dividing `2^bits`.
    pub fn round_outward(&self, bits: u32) -> RealInterval {
        RealInterval {
            lo: self.lo.floor_dyadic(bits),
            hi: self.hi.ceil_dyadic(bits),
        }
    }

    pub fn certainly_lt(&self, other: &RealInterval) -> bool {
        self.hi < other.lo
    }
}

impl fmt::Debug for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: &str, b: &str) -> RealInterval {
        RealInterval::new(a.parse().unwrap(), b.parse().unwrap()).unwrap()
    }

    #[test]
    fn empty_interval_rejected() {
        assert!(RealInterval::new(Rational::one(), Rational::zero()).is_err());
    }

    #[test]
    fn mul_covers_sign_cases() {
        assert_eq!(iv("-1", "2").mul(&iv("-3", "1")), iv("-6", "3"));
        assert_eq!(iv("-1", "2").sqr(), iv("0", "4"));
        assert_eq!(iv("-3", "-2").sqr(), iv("4", "9"));
    }

    #[test]
    fn recip_of_interval_with_zero_fails() {
        assert_eq!(iv("-1", "1").recip().unwrap_err(), Error::PossibleDivisionByZero);
        assert_eq!(iv("2", "4").recip().unwrap(), iv("1/4", "1/2"));
    }

    #[test]
    fn sqrt_is_exact_on_squares() {
        assert_eq!(iv("4", "25/4").sqrt().unwrap(), iv("2", "5/2"));
        let s = iv("2", "2").sqrt().unwrap();
        assert!(s.lo().clone() * s.lo().clone() <= Rational::from(2));
        assert!(s.hi().clone() * s.hi().clone() >= Rational::from(2));
    }

    #[test]
    fn outward_rounding_contains_original() {
        let x = iv("1/3", "2/3");
        let r = x.round_outward(4);
        assert!(x.is_subset_of(&r));
        assert_eq!(r, iv("5/16", "11/16"));
    }
}
