//! Outward-rounded dyadic arithmetic.
//!
//! [`Dy`] is an exact dyadic `m * 2^e`; [`Mag`] is a nonnegative upper bound
//! with a 32-bit mantissa rounded up after every operation; [`Ball`] is a
//! complex disc `center + rad * D` whose center is rounded to a requested
//! number of significant bits with the rounding error absorbed into `rad`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ComplexBox, Rational, RealInterval};

/// Exact dyadic number `m * 2^e`, normalized so that `m` is odd (or zero with `e = 0`).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Dy {
    m: BigInt,
    e: i64,
}

fn shr_floor(m: &BigInt, k: u64) -> BigInt {
    if m.sign() == Sign::Minus {
        let mag = m.magnitude();
        let q: BigUint = mag >> k;
        let exact = (&q << k) == *mag;
        -BigInt::from(if exact { q } else { q + 1u32 })
    } else {
        BigInt::from(m.magnitude() >> k)
    }
}

fn shr_ceil(m: &BigInt, k: u64) -> BigInt {
    -shr_floor(&-m, k)
}

impl Dy {
    pub fn new(m: BigInt, e: i64) -> Self {
        let mut d = Dy { m, e };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        match self.m.trailing_zeros() {
            None => self.e = 0,
            Some(0) => {}
            Some(t) => {
                self.m >>= t;
                self.e += t as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dy::default()
    }

    pub fn from_i64(v: i64) -> Self {
        Dy::new(BigInt::from(v), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn bits(&self) -> u64 {
        self.m.bits()
    }

    /// `|self| < 2^top_exp()` (for nonzero values).
    pub fn top_exp(&self) -> i64 {
        self.e + self.m.bits() as i64
    }

    pub fn neg(&self) -> Dy {
        Dy { m: -&self.m, e: self.e }
    }

    pub fn abs(&self) -> Dy {
        Dy { m: self.m.abs(), e: self.e }
    }

    pub fn add(&self, o: &Dy) -> Dy {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &o.m << (o.e - e) as usize;
        Dy::new(a + b, e)
    }

    pub fn sub(&self, o: &Dy) -> Dy {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dy) -> Dy {
        if self.is_zero() || o.is_zero() {
            return Dy::zero();
        }
        Dy {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }

    pub fn mul_2exp(&self, k: i64) -> Dy {
        if self.is_zero() {
            return Dy::zero();
        }
        Dy { m: self.m.clone(), e: self.e + k }
    }

    /// Largest dyadic with at most `prec` significant bits that is `<= self`.
    pub fn floor_prec(&self, prec: u32) -> Dy {
        let b = self.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let k = b - prec as u64;
        Dy::new(shr_floor(&self.m, k), self.e + k as i64)
    }

    /// Smallest dyadic with at most `prec` significant bits that is `>= self`.
    pub fn ceil_prec(&self, prec: u32) -> Dy {
        let b = self.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let k = b - prec as u64;
        Dy::new(shr_ceil(&self.m, k), self.e + k as i64)
    }

    /// Truncation to `prec` significant bits with an error bound.
    pub fn round(&self, prec: u32) -> (Dy, Mag) {
        let b = self.bits();
        if b <= prec as u64 {
            return (self.clone(), Mag::zero());
        }
        let k = b - prec as u64;
        let m = BigInt::from_biguint(self.m.sign(), self.m.magnitude() >> k);
        (Dy::new(m, self.e + k as i64), Mag::pow2(self.e + k as i64))
    }

    /// Largest multiple of `2^-k` that is `<= q`, `k` chosen for about `prec`
    /// significant bits.
    pub fn from_rational_floor(q: &Rational, prec: u32) -> Dy {
        Self::from_rational_dir(q, prec, false)
    }

    pub fn from_rational_ceil(q: &Rational, prec: u32) -> Dy {
        Self::from_rational_dir(q, prec, true)
    }

    fn from_rational_dir(q: &Rational, prec: u32, up: bool) -> Dy {
        let (n, d) = (q.numer(), q.denom());
        if d.is_one() {
            return Dy::new(n.clone(), 0);
        }
        if let Some(t) = d.trailing_zeros() {
            if (d >> t as usize).is_one() {
                return Dy::new(n.clone(), -(t as i64));
            }
        }
        let k = prec as i64 + 2 - (n.bits() as i64 - d.bits() as i64);
        let (num, den) = if k >= 0 {
            (n << k as usize, d.clone())
        } else {
            (n.clone(), d << (-k) as usize)
        };
        let (qq, r) = num_integer::Integer::div_mod_floor(&num, &den);
        let m = if up && !r.is_zero() { qq + 1 } else { qq };
        Dy::new(m, -k)
    }

    /// Nearest-ish dyadic to `q` with an error bound.
    pub fn from_rational(q: &Rational, prec: u32) -> (Dy, Mag) {
        let lo = Self::from_rational_floor(q, prec);
        let hi = Self::from_rational_ceil(q, prec);
        let err = Mag::from_dy_upper(&hi.sub(&lo));
        (lo, err)
    }

    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << self.e as usize)
        } else {
            Rational::new(self.m.clone(), BigInt::one() << (-self.e) as usize).expect("nonzero")
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits() as i64;
        let (m, e) = if b > 62 {
            (&self.m >> (b - 62) as usize, self.e + b - 62)
        } else {
            (self.m.clone(), self.e)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return mf.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        mf * 2f64.powi(e as i32)
    }

    /// Lower bound of `sqrt(self)` for `self >= 0`, about `prec` bits.
    pub fn sqrt_floor(&self, prec: u32) -> Dy {
        self.sqrt_dir(prec, false)
    }

    pub fn sqrt_ceil(&self, prec: u32) -> Dy {
        self.sqrt_dir(prec, true)
    }

    fn sqrt_dir(&self, prec: u32, up: bool) -> Dy {
        assert!(self.signum() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return Dy::zero();
        }
        let s = (2 * prec as i64 - self.bits() as i64).max(0);
        let (mut m, mut e) = (&self.m << s as usize, self.e - s);
        if e.rem_euclid(2) == 1 {
            m <<= 1;
            e -= 1;
        }
        let mut r = m.sqrt();
        if up && &r * &r != m {
            r += 1;
        }
        Dy::new(r, e / 2)
    }
}

impl PartialOrd for Dy {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dy {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let (ta, tb) = (self.top_exp(), other.top_exp());
        if ta != tb {
            return if sa > 0 { ta.cmp(&tb) } else { tb.cmp(&ta) };
        }
        self.sub(other).signum().cmp(&0)
    }
}

impl fmt::Debug for Dy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

const MAG_BITS: u32 = 32;

/// Nonnegative upper bound `m * 2^e` with a 32-bit mantissa.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mag {
    m: u64,
    e: i64,
}

impl Mag {
    pub const fn zero() -> Self {
        Mag { m: 0, e: 0 }
    }

    pub fn pow2(e: i64) -> Self {
        Mag {
            m: 1 << (MAG_BITS - 1),
            e: e - (MAG_BITS as i64 - 1),
        }
    }

    pub fn from_u64(v: u64) -> Self {
        Self::norm_up(v as u128, 0)
    }

    fn norm_up(m: u128, e: i64) -> Self {
        if m == 0 {
            return Mag::zero();
        }
        let b = 128 - m.leading_zeros();
        if b > MAG_BITS {
            let s = b - MAG_BITS;
            let lost = m & ((1u128 << s) - 1) != 0;
            let mut mm = (m >> s) as u64 + lost as u64;
            let mut ee = e + s as i64;
            if mm == 1 << MAG_BITS {
                mm >>= 1;
                ee += 1;
            }
            Mag { m: mm, e: ee }
        } else {
            let s = MAG_BITS - b;
            Mag {
                m: (m << s) as u64,
                e: e - s as i64,
            }
        }
    }

    fn norm_down(m: u128, e: i64) -> Self {
        if m == 0 {
            return Mag::zero();
        }
        let b = 128 - m.leading_zeros();
        if b > MAG_BITS {
            let s = b - MAG_BITS;
            Mag {
                m: (m >> s) as u64,
                e: e + s as i64,
            }
        } else {
            let s = MAG_BITS - b;
            Mag {
                m: (m << s) as u64,
                e: e - s as i64,
            }
        }
    }

    /// Upper bound for `|x|`.
    pub fn from_dy_upper(x: &Dy) -> Self {
        Self::from_big(x.m.magnitude(), x.e, true)
    }

    /// Lower bound for `|x|` (the result is a valid value, rounded down).
    pub fn from_dy_lower(x: &Dy) -> Self {
        Self::from_big(x.m.magnitude(), x.e, false)
    }

    fn from_big(m: &BigUint, e: i64, up: bool) -> Self {
        let b = m.bits();
        if b <= 64 {
            let v = m.to_u64().unwrap() as u128;
            return if up { Self::norm_up(v, e) } else { Self::norm_down(v, e) };
        }
        let s = b - 64;
        let top = (m >> s).to_u64().unwrap() as u128;
        let lost = up && m.trailing_zeros().unwrap_or(0) < s;
        let v = top + lost as u128;
        if up {
            Self::norm_up(v, e + s as i64)
        } else {
            Self::norm_down(v, e + s as i64)
        }
    }

    pub fn from_rational_upper(q: &Rational) -> Self {
        Self::from_dy_upper(&Dy::from_rational_ceil(&q.abs(), 40))
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0
    }

    pub fn add(self, o: Mag) -> Mag {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = (hi.e - lo.e) as u64;
        let lo_m = if d >= 64 {
            1u128
        } else {
            let v = lo.m as u128;
            (v >> d) + ((v & ((1u128 << d) - 1)) != 0) as u128
        };
        Self::norm_up(hi.m as u128 + lo_m, hi.e)
    }

    pub fn mul(self, o: Mag) -> Mag {
        if self.is_zero() || o.is_zero() {
            return Mag::zero();
        }
        Self::norm_up(self.m as u128 * o.m as u128, self.e + o.e)
    }

    pub fn mul_2exp(self, k: i64) -> Mag {
        if self.is_zero() {
            return self;
        }
        Mag { m: self.m, e: self.e + k }
    }

    pub fn pow(self, k: u32) -> Mag {
        let mut acc = Mag::from_u64(1);
        let mut base = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            k >>= 1;
        }
        acc
    }

    pub fn to_dy(self) -> Dy {
        Dy::new(BigInt::from(self.m), self.e)
    }

    pub fn to_rational(self) -> Rational {
        self.to_dy().to_rational()
    }

    /// `2^k >= self` for the returned `k`.
    pub fn log2_ceil(self) -> i64 {
        if self.is_zero() {
            return i64::MIN / 4;
        }
        let b = 64 - self.m.leading_zeros() as i64;
        let exact = self.m.is_power_of_two();
        self.e + b - exact as i64
    }

    pub fn to_f64(self) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        let e = self.e.clamp(-3000, 3000) as i32;
        self.m as f64 * 2f64.powi(e)
    }
}

impl PartialOrd for Mag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mag {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self.e.cmp(&o.e).then(self.m.cmp(&o.m)),
        }
    }
}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Complex disc `{c + w : |w| <= rad}` with dyadic center.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Ball {
    pub re: Dy,
    pub im: Dy,
    pub rad: Mag,
}

impl Ball {
    pub fn zero() -> Self {
        Ball::default()
    }

    pub fn exact(re: Dy, im: Dy) -> Self {
        Ball { re, im, rad: Mag::zero() }
    }

    pub fn from_i64(v: i64) -> Self {
        Ball::exact(Dy::from_i64(v), Dy::zero())
    }

    pub fn new(re: Dy, im: Dy, rad: Mag) -> Self {
        Ball { re, im, rad }
    }

    pub fn from_rational(re: &Rational, im: &Rational, prec: u32) -> Self {
        let (a, ea) = Dy::from_rational(re, prec);
        let (b, eb) = Dy::from_rational(im, prec);
        Ball { re: a, im: b, rad: ea.add(eb) }
    }

    /// Smallest-ish disc containing a rational box.
    pub fn from_box(bx: &ComplexBox, prec: u32) -> Self {
        let (cr, ci) = bx.center();
        let mut b = Ball::from_rational(&cr, &ci, prec);
        let hw = Mag::from_rational_upper(&bx.re.width()).mul_2exp(-1);
        let hh = Mag::from_rational_upper(&bx.im.width()).mul_2exp(-1);
        b.rad = b.rad.add(hw).add(hh);
        b
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn is_real_center(&self) -> bool {
        self.im.is_zero()
    }

    fn round_center(re: Dy, im: Dy, rad: Mag, prec: u32) -> Ball {
        let (re, e1) = re.round(prec);
        let (im, e2) = im.round(prec);
        Ball { re, im, rad: rad.add(e1).add(e2) }
    }

    /// Cheap upper bound on `|center|` (by `|re| + |im|`).
    pub fn center_mag(&self) -> Mag {
        Mag::from_dy_upper(&self.re).add(Mag::from_dy_upper(&self.im))
    }

    /// Upper bound on `|z|` over the disc.
    pub fn mag(&self) -> Mag {
        self.center_mag().add(self.rad)
    }

    pub fn add(&self, o: &Ball, prec: u32) -> Ball {
        Self::round_center(self.re.add(&o.re), self.im.add(&o.im), self.rad.add(o.rad), prec)
    }

    pub fn sub(&self, o: &Ball, prec: u32) -> Ball {
        Self::round_center(self.re.sub(&o.re), self.im.sub(&o.im), self.rad.add(o.rad), prec)
    }

    pub fn neg(&self) -> Ball {
        Ball {
            re: self.re.neg(),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn conj(&self) -> Ball {
        Ball {
            re: self.re.clone(),
            im: self.im.neg(),
            rad: self.rad,
        }
    }

    pub fn mul(&self, o: &Ball, prec: u32) -> Ball {
        let (re, im) = if self.im.is_zero() && o.im.is_zero() {
            (self.re.mul(&o.re), Dy::zero())
        } else if o.im.is_zero() {
            (self.re.mul(&o.re), self.im.mul(&o.re))
        } else if self.im.is_zero() {
            (self.re.mul(&o.re), self.re.mul(&o.im))
        } else {
            (
                self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
                self.re.mul(&o.im).add(&self.im.mul(&o.re)),
            )
        };
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            Mag::zero()
        } else {
            self.center_mag()
                .mul(o.rad)
                .add(o.center_mag().mul(self.rad))
                .add(self.rad.mul(o.rad))
        };
        Self::round_center(re, im, rad, prec)
    }

    pub fn sqr(&self, prec: u32) -> Ball {
        self.mul(self, prec)
    }

    pub fn pow(&self, k: u32, prec: u32) -> Ball {
        let mut acc = Ball::from_i64(1);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    /// Enclosure of `{1/z}`; `None` unless the disc certainly excludes 0.
    pub fn inv(&self, prec: u32) -> Option<Ball> {
        let n = self.center_abs2();
        if n.is_zero() {
            return None;
        }
        let l1 = n.sqrt_floor(prec.max(32));
        let l2 = l1.sub(&self.rad.to_dy());
        if l2.signum() <= 0 {
            return None;
        }
        let nq = n.to_rational();
        let (re, e1) = Dy::from_rational(&(self.re.to_rational() / &nq), prec);
        let (im, e2) = Dy::from_rational(&(-self.im.to_rational() / &nq), prec);
        let spread = if self.rad.is_zero() {
            Mag::zero()
        } else {
            Mag::from_rational_upper(&(self.rad.to_rational() / (l1.to_rational() * l2.to_rational())))
        };
        Some(Ball { re, im, rad: spread.add(e1).add(e2) })
    }

    pub fn div(&self, o: &Ball, prec: u32) -> Option<Ball> {
        Some(self.mul(&o.inv(prec)?, prec))
    }

    pub fn mul_2exp(&self, k: i64) -> Ball {
        Ball {
            re: self.re.mul_2exp(k),
            im: self.im.mul_2exp(k),
            rad: self.rad.mul_2exp(k),
        }
    }

    /// Enlarge the radius so the disc also covers `other`'s disc.
    pub fn add_error(&self, err: Mag) -> Ball {
        Ball {
            re: self.re.clone(),
            im: self.im.clone(),
            rad: self.rad.add(err),
        }
    }

    fn center_abs2(&self) -> Dy {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Lower bound on `|z|` over the disc (may be negative when it contains 0).
    pub fn abs_lower(&self, prec: u32) -> Dy {
        self.center_abs2().sqrt_floor(prec).sub(&self.rad.to_dy())
    }

    /// Upper bound on `|z|` over the disc.
    pub fn abs_upper(&self, prec: u32) -> Dy {
        self.center_abs2().sqrt_ceil(prec).add(&self.rad.to_dy())
    }

    /// Certified `0 ∉ disc`.
    pub fn excludes_zero(&self) -> bool {
        let rad = self.rad.to_dy();
        if self.re.abs() > rad || self.im.abs() > rad {
            return true;
        }
        self.abs_lower(40).signum() > 0
    }

    /// Disc does not touch both coordinate axes, so it meets at most two
    /// adjacent closed quadrants and excludes 0.
    pub fn off_one_axis(&self) -> bool {
        let rad = self.rad.to_dy();
        self.re.abs() > rad || self.im.abs() > rad
    }

    /// Bitmask of the closed quadrants (counterclockwise from the first) the disc meets.
    pub fn quadrants(&self) -> u8 {
        let rad = self.rad.to_dy();
        let x_pos = self.re.add(&rad).signum() >= 0;
        let x_neg = self.re.sub(&rad).signum() <= 0;
        let y_pos = self.im.add(&rad).signum() >= 0;
        let y_neg = self.im.sub(&rad).signum() <= 0;
        (x_pos && y_pos) as u8
            | ((x_neg && y_pos) as u8) << 1
            | ((x_neg && y_neg) as u8) << 2
            | ((x_pos && y_neg) as u8) << 3
    }

    /// Bounding box of the disc with rational endpoints.
    pub fn to_box(&self) -> ComplexBox {
        let r = self.rad.to_rational();
        let (a, b) = (self.re.to_rational(), self.im.to_rational());
        ComplexBox::new(
            RealInterval::new_unchecked(&a - &r, &a + &r),
            RealInterval::new_unchecked(&b - &r, &b + &r),
        )
    }

    /// Certified containment of the disc in a rational box interior.
    pub fn is_interior_of(&self, bx: &ComplexBox) -> bool {
        self.to_box().is_interior_of(bx)
    }

    pub fn center_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i) ± {:?}", self.re, self.im, self.rad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn floor_and_ceil_bracket_negative_values() {
        let x = Dy::new(BigInt::from(-0b101101), -3);
        let lo = x.floor_prec(3);
        let hi = x.ceil_prec(3);
        assert!(lo <= x && x <= hi);
        assert_eq!(lo.to_rational(), q("-6"));
        assert_eq!(hi.to_rational(), q("-5"));
    }

    #[test]
    fn rational_conversion_brackets() {
        for s in ["1/3", "-22/7", "123456789/1000", "-1/1048576"] {
            let v = q(s);
            let lo = Dy::from_rational_floor(&v, 30).to_rational();
            let hi = Dy::from_rational_ceil(&v, 30).to_rational();
            assert!(lo <= v && v <= hi, "{s}");
            assert!((&hi - &lo) <= v.abs() * Rational::ratio(1, 1 << 28));
        }
    }

    #[test]
    fn mag_rounds_up() {
        let a = Mag::from_u64((1 << 40) + 1);
        assert!(a.to_rational() >= Rational::from((1i64 << 40) + 1));
        let s = Mag::from_u64(3).add(Mag::pow2(-80));
        assert!(s.to_rational() > Rational::from(3));
        assert_eq!(Mag::from_u64(3).mul(Mag::from_u64(5)).to_rational(), Rational::from(15));
    }

    #[test]
    fn mag_log2() {
        assert_eq!(Mag::from_u64(8).log2_ceil(), 3);
        assert_eq!(Mag::from_u64(9).log2_ceil(), 4);
    }

    #[test]
    fn sqrt_bounds() {
        let two = Dy::from_i64(2);
        let lo = two.sqrt_floor(60);
        let hi = two.sqrt_ceil(60);
        assert!(lo.mul(&lo) <= two && hi.mul(&hi) >= two);
        assert_eq!(Dy::from_i64(49).sqrt_floor(10), Dy::from_i64(7));
    }

    #[test]
    fn ball_mul_contains_product_of_members() {
        let a = Ball::from_box(&ComplexBox::from_bounds(q("1"), q("2"), q("-1"), q("1/2")).unwrap(), 64);
        let b = Ball::from_box(&ComplexBox::from_bounds(q("-3"), q("-1"), q("0"), q("1")).unwrap(), 64);
        let p = a.mul(&b, 64).to_box();
        for (x, y) in [("1", "-1"), ("2", "1/2"), ("3/2", "0")] {
            for (u, v) in [("-3", "0"), ("-1", "1"), ("-2", "1/2")] {
                let (x, y, u, v) = (q(x), q(y), q(u), q(v));
                let re = &x * &u - &y * &v;
                let im = &x * &v + &y * &u;
                assert!(p.contains_point(&re, &im));
            }
        }
    }

    #[test]
    fn ball_inverse_contains_exact_inverse() {
        let z = Ball::from_box(&ComplexBox::from_bounds(q("1"), q("11/10"), q("2"), q("21/10")).unwrap(), 64);
        let inv = z.inv(64).unwrap().to_box();
        for (x, y) in [("1", "2"), ("11/10", "21/10"), ("1", "21/10")] {
            let (x, y) = (q(x), q(y));
            let n = &x * &x + &y * &y;
            assert!(inv.contains_point(&(&x / &n), &(-&y / &n)));
        }
        assert!(Ball::new(Dy::zero(), Dy::zero(), Mag::from_u64(1)).inv(64).is_none());
    }

    #[test]
    fn quadrant_mask() {
        let b = Ball::exact(Dy::from_i64(1), Dy::from_i64(1));
        assert_eq!(b.quadrants(), 0b0001);
        let on_axis = Ball::exact(Dy::from_i64(1), Dy::zero());
        assert_eq!(on_axis.quadrants(), 0b1001);
        assert!(on_axis.excludes_zero());
        let around = Ball::new(Dy::zero(), Dy::zero(), Mag::from_u64(1));
        assert!(!around.excludes_zero());
    }
}
