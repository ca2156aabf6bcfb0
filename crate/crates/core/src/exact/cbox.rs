use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{RealInterval, Rational};
use crate::{Error, Result};

/// Axis-aligned rectangle `re x im` in the complex plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexBox {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        ComplexBox { re, im }
    }

    /// Box from four endpoints `[re_lo, re_hi, im_lo, im_hi]`.
    pub fn from_bounds(re_lo: Rational, re_hi: Rational, im_lo: Rational, im_hi: Rational) -> Result<Self> {
        Ok(ComplexBox {
            re: RealInterval::new(re_lo, re_hi)?,
            im: RealInterval::new(im_lo, im_hi)?,
        })
    }

    pub fn point(re: Rational, im: Rational) -> Self {
        ComplexBox {
            re: RealInterval::point(re),
            im: RealInterval::point(im),
        }
    }

    pub fn real(x: Rational) -> Self {
        Self::point(x, Rational::zero())
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    /// Square `[c - h, c + h] x [d - h, d + h]`.
    pub fn around(re: &Rational, im: &Rational, h: &Rational) -> Self {
        ComplexBox {
            re: RealInterval::new_unchecked(re - h, re + h),
            im: RealInterval::new_unchecked(im - h, im + h),
        }
    }

    pub fn bounds(&self) -> [&Rational; 4] {
        [self.re.lo(), self.re.hi(), self.im.lo(), self.im.hi()]
    }

    pub fn is_point(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Rational, im: &Rational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn is_subset_of(&self, other: &ComplexBox) -> bool {
        self.re.is_subset_of(&other.re) && self.im.is_subset_of(&other.im)
    }

    pub fn is_interior_of(&self, other: &ComplexBox) -> bool {
        self.re.is_interior_of(&other.re) && self.im.is_interior_of(&other.im)
    }

    pub fn intersects(&self, other: &ComplexBox) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn intersection(&self, other: &ComplexBox) -> Option<ComplexBox> {
        Some(ComplexBox {
            re: self.re.intersection(&other.re)?,
            im: self.im.intersection(&other.im)?,
        })
    }

    pub fn hull(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.hull(&other.re),
            im: self.im.hull(&other.im),
        }
    }

    /// Larger of the two side lengths.
    pub fn width(&self) -> Rational {
        self.re.width().max(self.im.width())
    }

    pub fn center(&self) -> (Rational, Rational) {
        (self.re.midpoint(), self.im.midpoint())
    }

    pub fn add(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn sub(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.sub(&other.re),
            im: self.im.sub(&other.im),
        }
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn scale(&self, k: &Rational) -> ComplexBox {
        ComplexBox {
            re: self.re.scale(k),
            im: self.im.scale(k),
        }
    }

    /// Enclosure of `|z|^2` over the box.
    pub fn norm_sqr(&self) -> RealInterval {
        self.re.sqr().add(&self.im.sqr())
    }

    /// Enclosure of all quotients; fails when the divisor box contains 0.
    pub fn div(&self, other: &ComplexBox) -> Result<ComplexBox> {
        if other.contains_zero() {
            return Err(Error::PossibleDivisionByZero);
        }
        let inv = other.norm_sqr().recip()?;
        let num = self.mul(&other.conj());
        Ok(ComplexBox {
            re: num.re.mul(&inv),
            im: num.im.mul(&inv),
        })
    }

    /// Enclosure of `{|z| : z in box}`; the lower endpoint is 0 when the box contains 0.
    pub fn abs(&self) -> RealInterval {
        let lo2 = self.re.mig().pow(2) + self.im.mig().pow(2);
        let hi2 = self.re.mag().pow(2) + self.im.mag().pow(2);
        let lo = if self.contains_zero() {
            Rational::zero()
        } else {
            lo2.sqrt_floor(super::interval::SQRT_BITS).expect("nonnegative")
        };
        let hi = hi2.sqrt_ceil(super::interval::SQRT_BITS).expect("nonnegative");
        RealInterval::new_unchecked(lo, hi)
    }

    /// Outward rounding of all four endpoints to denominators dividing `2^bits`.
    pub fn round_outward(&self, bits: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.round_outward(bits),
            im: self.im.round_outward(bits),
        }
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} x {:?}i", self.re, self.im)
    }
}

impl fmt::Display for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ComplexBox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.bounds().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexBox {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b, c, e] = <[Rational; 4]>::deserialize(d)?;
        ComplexBox::from_bounds(a, b, c, e).map_err(D::Error::custom)
    }
}
