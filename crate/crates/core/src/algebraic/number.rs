//! Exact algebraic numbers.
//!
//! A value is a quotient `num / den` of two leaf polynomials in normal form
//! (see [`MPoly`]); the denominator is certified nonzero when the value is
//! built. Zero tests on `num` use the norm bound below, so they are decisions
//! rather than numerical guesses.
//!
//! Zero test. Let `N = sum c_m prod theta_j^e_j` with leaves `theta_j` that are
//! roots of integer polynomials of degree `d_j`, leading coefficient `a_j` and
//! root bound `B_j`; let `D_j` be the largest exponent of `theta_j` in `N` and
//! `C = lcm(den c_m) * prod |a_j|^D_j`. Then `w = C * N` is an algebraic
//! integer in a field of degree at most `K = prod d_j`, and every conjugate of
//! `w` is bounded by `U = C * sum |c_m| prod B_j^e_j`. If `w != 0` its field
//! norm is a nonzero integer, hence
//!
//! ```text
//! |N| >= 1 / (C * max(1, U)^(K - 1)).
//! ```
//!
//! An enclosure of `N` finer than this bound decides `N = 0`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use parking_lot::Mutex;

use crate::algebraic::leaf::{conjugate_leaf, leaf, register, Rooted};
use crate::algebraic::mpoly::MPoly;
use crate::config::limits;
use crate::exact::{common_denominator, Ball, ComplexBox, Mag, Rational};
use crate::poly::QPoly;
use crate::{Error, Result};

#[derive(Clone)]
pub struct AlgebraicNumber(Arc<Inner>);

struct Inner {
    num: MPoly,
    den: MPoly,
    zero: OnceLock<bool>,
    /// Finest enclosure computed so far, keyed by its accuracy in bits.
    cache: Mutex<Option<(i64, Ball)>>,
}

impl AlgebraicNumber {
    fn build(num: MPoly, den: MPoly) -> Self {
        let (num, den) = match den.as_rational() {
            Some(q) if !q.is_zero() => (num.scale(&q.recip().expect("nonzero")), MPoly::constant(Rational::one())),
            _ => (num, den),
        };
        let den = if num.is_zero() { MPoly::constant(Rational::one()) } else { den };
        let zero = OnceLock::new();
        if num.is_zero() {
            let _ = zero.set(true);
        } else if num.as_rational().is_some() {
            let _ = zero.set(false);
        }
        AlgebraicNumber(Arc::new(Inner {
            num,
            den,
            zero,
            cache: Mutex::new(None),
        }))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::build(MPoly::constant(q), MPoly::constant(Rational::one()))
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_rational(Rational::from(v))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    /// A polynomial in the leaves; no division involved.
    pub fn from_mpoly(num: MPoly) -> Self {
        Self::build(num, MPoly::constant(Rational::one()))
    }

    /// `num / den`, rejecting a denominator that is zero.
    pub fn from_parts(num: MPoly, den: MPoly) -> Result<Self> {
        let d = Self::from_mpoly(den.clone());
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::build(num, den))
    }

    pub fn from_leaf(id: u32) -> Self {
        Self::from_mpoly(MPoly::leaf(id))
    }

    pub(crate) fn from_rooted(r: Rooted) -> Self {
        match r {
            Rooted::Rational(q) => Self::from_rational(q),
            Rooted::Leaf(l) => Self::from_leaf(l.id),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        static ID: OnceLock<u32> = OnceLock::new();
        let id = *ID.get_or_init(|| {
            let bx = ComplexBox::from_bounds(Rational::from(-1), Rational::from(1), Rational::ratio(1, 2), Rational::from(2))
                .expect("ordered");
            match register(&QPoly::from_i64(&[1, 0, 1]), &bx, None).expect("i is isolated") {
                Rooted::Leaf(l) => l.id,
                Rooted::Rational(_) => unreachable!("i is not rational"),
            }
        });
        Self::from_leaf(id)
    }

    /// The unique root of `p` in `bx`.
    pub fn root_of(p: &QPoly, bx: &ComplexBox) -> Result<Self> {
        register(p, bx, None).map(Self::from_rooted)
    }

    pub fn num(&self) -> &MPoly {
        &self.0.num
    }

    pub fn den(&self) -> &MPoly {
        &self.0.den
    }

    /// The value, when it is syntactically rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.0.den.as_rational().is_some() {
            self.0.num.as_rational()
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.0.den == o.0.den {
            return Self::build(self.0.num.add(&o.0.num), self.0.den.clone());
        }
        Self::build(
            self.0.num.mul(&o.0.den).add(&o.0.num.mul(&self.0.den)),
            self.0.den.mul(&o.0.den),
        )
    }

    pub fn neg(&self) -> Self {
        Self::build(self.0.num.neg(), self.0.den.clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::build(self.0.num.mul(&o.0.num), self.0.den.mul(&o.0.den))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::build(self.0.num.scale(k), self.0.den.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::build(self.0.num.pow(k), self.0.den.pow(k))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::build(self.0.den.clone(), self.0.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::build(self.0.num.mul(&o.0.den), self.0.den.mul(&o.0.num)))
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        let image = |id: u32| -> MPoly {
            let l = leaf(id);
            if l.is_real() {
                MPoly::leaf(id)
            } else if l.is_complex_quadratic() {
                // The conjugate root is `-b/a - theta`.
                let ints = l.ints();
                let trace = -(Rational::from_integer(ints[1].clone()) / Rational::from_integer(ints[2].clone()));
                MPoly::constant(trace).sub(&MPoly::leaf(id))
            } else {
                let c = conjugate_leaf(&l).expect("conjugate of an isolated root is isolated");
                MPoly::leaf(c.id)
            }
        };
        let plain = |p: &MPoly| p.leaves().iter().all(|&id| leaf(id).is_real());
        if plain(&self.0.num) && plain(&self.0.den) {
            return self.clone();
        }
        Self::build(self.0.num.substitute(&image), self.0.den.substitute(&image))
    }

    /// Exact decision of `self == 0`.
    pub fn is_zero(&self) -> bool {
        *self.0.zero.get_or_init(|| mpoly_is_zero(&self.0.num))
    }

    pub fn eq_exact(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    pub fn is_real(&self) -> bool {
        if self.as_rational().is_some() {
            return true;
        }
        self.eq_exact(&self.conj())
    }

    /// Disc of radius at most `2^-bits` containing the value.
    pub fn ball(&self, bits: i64) -> Ball {
        if let Some((b, ball)) = &*self.0.cache.lock() {
            if *b >= bits {
                return ball.clone();
            }
        }
        let ball = self.compute_ball(bits);
        let mut c = self.0.cache.lock();
        if c.as_ref().is_none_or(|(b, _)| *b < bits) {
            *c = Some((bits, ball.clone()));
        }
        ball
    }

    fn compute_ball(&self, bits: i64) -> Ball {
        if let Some(q) = self.as_rational() {
            return Ball::from_rational(&q, &Rational::zero(), (bits.max(0) as u32).saturating_add(64));
        }
        if self.0.den.as_rational().is_some() {
            return eval_to(&self.0.num, bits);
        }
        // |n/d - n0/d0| needs a lower bound for |d|.
        let mut extra = 8i64;
        loop {
            let d = eval_to(&self.0.den, bits + extra);
            if d.excludes_zero() {
                let lo = d.abs_lower(64);
                if lo.signum() > 0 {
                    let dl = Mag::from_dy_lower(&lo);
                    let shift = 2 - dl.log2_ceil();
                    let scale = eval_to(&self.0.num, 0).mag().log2_ceil().max(0);
                    let need = bits + shift.max(0) * 2 + scale + 4;
                    let n = eval_to(&self.0.num, need);
                    let d = eval_to(&self.0.den, need);
                    let prec = (need.max(0) as u32).saturating_add(64);
                    let q = n.div(&d, prec).expect("denominator excludes zero");
                    if q.rad <= Mag::pow2(-bits) {
                        return q;
                    }
                }
            }
            extra += 32;
        }
    }

    /// Box enclosure with both side lengths at most `width`.
    pub fn refine(&self, width: &Rational) -> ComplexBox {
        if let Some(q) = self.as_rational() {
            return ComplexBox::real(q);
        }
        let mut bits = (-width.log2_estimate().unwrap_or(0)).max(0) + 2;
        loop {
            let b = self.ball(bits);
            let bx = b.to_box();
            if bx.width() <= *width {
                return if self.is_known_real() { real_box(&bx) } else { bx };
            }
            bits += 2;
        }
    }

    fn is_known_real(&self) -> bool {
        self.0.num.leaves().iter().chain(self.0.den.leaves().iter()).all(|&id| leaf(id).is_real())
    }

    /// Coarse cached enclosure.
    pub fn enclosure(&self) -> ComplexBox {
        self.refine(&Rational::new(1, BigInt::one() << 32).expect("nonzero"))
    }

    /// Upper bound for `|self|`.
    pub fn abs_upper(&self) -> Rational {
        if let Some(q) = self.as_rational() {
            return q.abs();
        }
        Mag::from_dy_upper(&self.ball(48).abs_upper(64)).to_rational()
    }

    /// Positive lower bound for `|self|`; the value must be nonzero.
    pub fn abs_lower(&self) -> Result<Rational> {
        if let Some(q) = self.as_rational() {
            return if q.is_zero() { Err(Error::DivisionByZero) } else { Ok(q.abs()) };
        }
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut bits = 48;
        loop {
            let lo = self.ball(bits).abs_lower(64);
            if lo.signum() > 0 {
                return Ok(Mag::from_dy_lower(&lo).to_rational());
            }
            bits *= 2;
        }
    }

    /// Upper bound on the degree of the minimal polynomial.
    pub fn degree_bound(&self) -> u64 {
        let mut k = 1u64;
        for id in self.0.num.leaves().union(&self.0.den.leaves()) {
            k = k.saturating_mul(leaf(*id).degree() as u64);
        }
        k
    }

    /// Upper bound on the height of the minimal polynomial.
    pub fn height_bound(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.numer().abs().max(q.denom().clone());
        }
        if let Some(id) = self.single_leaf() {
            return leaf(id).ints().iter().map(|c| c.abs()).max().expect("nonempty");
        }
        // The value is a root of prod_sigma (C1 sigma(w2) x - C2 sigma(w1)),
        // whose length is at most (C1 U2 + C2 U1)^K; a factor of it has height
        // at most 2^K times that.
        let (c1, u1) = integrality(&self.0.num);
        let (c2, u2) = integrality(&self.0.den);
        let k = self.degree_bound().min(u32::MAX as u64) as u32;
        let base = c1.mul(u2).add(c2.mul(u1)).mul_2exp(1);
        let r = base.pow(k).to_rational();
        r.ceil()
    }

    fn single_leaf(&self) -> Option<u32> {
        if self.0.den.as_rational() != Some(Rational::one()) || self.0.num.len() != 1 {
            return None;
        }
        let (m, c) = self.0.num.terms().next()?;
        (c.is_one() && m.len() == 1 && m[0].1 == 1).then(|| m[0].0)
    }
}

fn real_box(bx: &ComplexBox) -> ComplexBox {
    ComplexBox::from_bounds(bx.re.lo().clone(), bx.re.hi().clone(), Rational::zero(), Rational::zero()).expect("ordered")
}

/// `(C, U)`: the integrality multiplier and the conjugate bound of `C * p`.
fn integrality(p: &MPoly) -> (Mag, Mag) {
    let denom = common_denominator(p.terms().map(|(_, c)| c));
    let mut c = Mag::from_rational_upper(&Rational::from_integer(denom));
    for (id, d) in p.leaf_degrees() {
        let a = Rational::from_integer(leaf(id).lead().abs());
        c = c.mul(Mag::from_rational_upper(&a).pow(d));
    }
    let u = c.mul(p.conjugate_sup());
    (c, u)
}

/// `b` such that a nonzero value of `p` has modulus at least `2^-b`.
pub(crate) fn zero_threshold_bits(p: &MPoly) -> i64 {
    let (c, u) = integrality(p);
    let mut k = 1i64;
    for id in p.leaves() {
        k = k.saturating_mul(leaf(id).degree() as i64);
    }
    c.log2_ceil().max(0) + (k - 1).saturating_mul(u.log2_ceil().max(0))
}

/// Ball around `p` with radius at most `2^-bits`.
pub(crate) fn eval_to(p: &MPoly, bits: i64) -> Ball {
    let scale = p.conjugate_sup().log2_ceil().max(0);
    let mut lp = (bits + scale + 8).max(16);
    let target = Mag::pow2(-bits);
    loop {
        let prec = (lp + scale + 32).clamp(64, u32::MAX as i64) as u32;
        let b = p.eval_ball(lp.clamp(0, u32::MAX as i64) as u32, prec);
        if b.rad <= target {
            return b;
        }
        lp += 16 + lp / 4;
    }
}

fn mpoly_is_zero(p: &MPoly) -> bool {
    if p.is_zero() {
        return true;
    }
    if p.as_rational().is_some() {
        return false;
    }
    let sep = zero_threshold_bits(p);
    let ceiling = limits().max_bits as i64;
    let mut bits = 32i64;
    loop {
        let target = bits.min(sep + 2);
        let b = eval_to(p, target);
        if b.excludes_zero() {
            return false;
        }
        if target >= sep + 2 && b.mag() < Mag::pow2(-sep) {
            return true;
        }
        if bits > ceiling.max(sep + 2) {
            // Radius below 2^-(sep+2) yet the disc still reaches past the
            // separation bound: impossible by the bound above.
            unreachable!("zero test failed to converge");
        }
        bits *= 4;
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let (re, im) = self.ball(60).center_f64();
        write!(f, "~({re:.12}{im:+.12}i)")
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(n: i64) -> AlgebraicNumber {
        let bx = ComplexBox::from_bounds(Rational::from(0), Rational::from(n), Rational::zero(), Rational::zero()).unwrap();
        AlgebraicNumber::root_of(&QPoly::from_i64(&[-n, 0, 1]), &bx).unwrap()
    }

    #[test]
    fn sqrt2_squared_minus_two_is_zero() {
        let s = sqrt(2);
        assert!(s.mul(&s).sub(&AlgebraicNumber::from_i64(2)).is_zero());
        assert!(!s.sub(&AlgebraicNumber::one()).is_zero());
    }

    #[test]
    fn nested_radical_identity() {
        let (a, b, c) = (sqrt(2), sqrt(3), sqrt(6));
        let lhs = a.add(&b).pow(2);
        let rhs = AlgebraicNumber::from_i64(5).add(&c.scale(&Rational::from(2)));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn conjugation_of_i() {
        let i = AlgebraicNumber::i();
        assert!(i.conj().add(&i).is_zero());
        assert!(i.conj().conj().eq_exact(&i));
        assert!(!i.is_real());
        let one = AlgebraicNumber::one();
        let p = one.add(&i).mul(&one.sub(&i));
        assert!(p.is_real());
        assert_eq!(p.as_rational(), Some(Rational::from(2)));
    }

    #[test]
    fn quotients_refine() {
        let s = sqrt(2);
        let q = AlgebraicNumber::one().div(&s.add(&AlgebraicNumber::one())).unwrap();
        // 1/(1+sqrt2) = sqrt2 - 1
        assert!(q.eq_exact(&s.sub(&AlgebraicNumber::one())));
        let bx = q.refine(&Rational::ratio(1, 1000));
        assert!(bx.width() <= Rational::ratio(1, 1000));
        assert!(*bx.re.lo() > Rational::ratio(41421, 100000) && *bx.re.hi() < Rational::ratio(41422, 100000));
    }

    #[test]
    fn division_by_zero_is_rejected() {
        let s = sqrt(2);
        let z = s.mul(&s).sub(&AlgebraicNumber::from_i64(2));
        assert_eq!(AlgebraicNumber::one().div(&z).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn degree_and_height_bounds() {
        let s = sqrt(2);
        assert_eq!(s.degree_bound(), 2);
        assert_eq!(s.height_bound(), BigInt::from(2));
        assert_eq!(AlgebraicNumber::from_rational(Rational::ratio(-3, 7)).height_bound(), BigInt::from(7));
        let t = s.add(&sqrt(3));
        assert!(t.degree_bound() >= 4);
        // x^4 - 10x^2 + 1
        assert!(t.height_bound() >= BigInt::from(10));
    }
}
