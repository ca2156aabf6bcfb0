//! Polynomials with algebraic coefficients.
//!
//! Polynomials whose coefficients are all rational are kept as a [`QPoly`]
//! and every operation between two of them stays on that fast path.

use std::fmt;

use crate::algebraic::leaf::register;
use crate::algebraic::AlgebraicNumber;
use crate::config::limits;
use crate::exact::{Ball, ComplexBox, Mag, Rational};
use crate::poly::isolate::{isolate_all, newton_refine_disc};
use crate::poly::{count, norm_surrogate, QPoly};
use crate::{Error, Result};

#[derive(Clone)]
enum Repr {
    Q(QPoly),
    /// Trimmed: the last coefficient is certified nonzero.
    A(Vec<AlgebraicNumber>),
}

#[derive(Clone)]
pub struct AlgPoly {
    repr: Repr,
}

/// One distinct root of a polynomial with its multiplicity.
#[derive(Clone, Debug)]
pub struct RootCluster {
    /// Box containing the root and no other root of the polynomial.
    pub bx: ComplexBox,
    pub multiplicity: usize,
    pub root: AlgebraicNumber,
}

impl AlgPoly {
    pub fn new(mut c: Vec<AlgebraicNumber>) -> Self {
        if c.iter().all(|v| v.as_rational().is_some()) {
            return Self::from_qpoly(QPoly::new(c.iter().map(|v| v.as_rational().expect("rational")).collect()));
        }
        while c.last().is_some_and(AlgebraicNumber::is_zero) {
            c.pop();
        }
        AlgPoly { repr: Repr::A(c) }
    }

    pub fn from_qpoly(q: QPoly) -> Self {
        AlgPoly { repr: Repr::Q(q) }
    }

    pub fn zero() -> Self {
        Self::from_qpoly(QPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_qpoly(QPoly::one())
    }

    pub fn constant(a: AlgebraicNumber) -> Self {
        Self::new(vec![a])
    }

    /// `z - a`.
    pub fn linear(a: &AlgebraicNumber) -> Self {
        Self::new(vec![a.neg(), AlgebraicNumber::one()])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        Self::from_qpoly(QPoly::monomial(k, Rational::one()))
    }

    pub fn as_qpoly(&self) -> Option<&QPoly> {
        match &self.repr {
            Repr::Q(q) => Some(q),
            Repr::A(_) => None,
        }
    }

    pub fn coeffs(&self) -> Vec<AlgebraicNumber> {
        match &self.repr {
            Repr::Q(q) => q.coeffs().iter().cloned().map(AlgebraicNumber::from_rational).collect(),
            Repr::A(c) => c.clone(),
        }
    }

    pub fn coeff(&self, k: usize) -> AlgebraicNumber {
        match &self.repr {
            Repr::Q(q) => AlgebraicNumber::from_rational(q.coeff(k)),
            Repr::A(c) => c.get(k).cloned().unwrap_or_else(AlgebraicNumber::zero),
        }
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Q(q) => q.coeffs().len(),
            Repr::A(c) => c.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self) -> Option<usize> {
        self.len().checked_sub(1)
    }

    /// Degree, with 0 for the zero polynomial.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    fn binary(
        &self,
        o: &AlgPoly,
        q: impl Fn(&QPoly, &QPoly) -> QPoly,
        a: impl Fn(&[AlgebraicNumber], &[AlgebraicNumber]) -> Vec<AlgebraicNumber>,
    ) -> AlgPoly {
        match (&self.repr, &o.repr) {
            (Repr::Q(x), Repr::Q(y)) => Self::from_qpoly(q(x, y)),
            _ => Self::new(a(&self.coeffs(), &o.coeffs())),
        }
    }

    pub fn add(&self, o: &AlgPoly) -> AlgPoly {
        self.binary(o, |x, y| x.add(y), |x, y| {
            let n = x.len().max(y.len());
            (0..n)
                .map(|k| match (x.get(k), y.get(k)) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect()
        })
    }

    pub fn neg(&self) -> AlgPoly {
        match &self.repr {
            Repr::Q(q) => Self::from_qpoly(q.neg()),
            Repr::A(c) => AlgPoly { repr: Repr::A(c.iter().map(AlgebraicNumber::neg).collect()) },
        }
    }

    pub fn sub(&self, o: &AlgPoly) -> AlgPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &AlgPoly) -> AlgPoly {
        self.binary(o, |x, y| x.mul(y), |x, y| {
            if x.is_empty() || y.is_empty() {
                return vec![];
            }
            let mut out = vec![AlgebraicNumber::zero(); x.len() + y.len() - 1];
            for (i, a) in x.iter().enumerate() {
                for (j, b) in y.iter().enumerate() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
            out
        })
    }

    pub fn pow(&self, k: u32) -> AlgPoly {
        let mut acc = AlgPoly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &AlgebraicNumber) -> AlgPoly {
        match (&self.repr, c.as_rational()) {
            (Repr::Q(q), Some(r)) => Self::from_qpoly(q.scale(&r)),
            _ => Self::new(self.coeffs().iter().map(|a| a.mul(c)).collect()),
        }
    }

    /// `z^k * self`.
    pub fn shift(&self, k: usize) -> AlgPoly {
        match &self.repr {
            Repr::Q(q) => Self::from_qpoly(q.shift(k)),
            Repr::A(c) => {
                let mut v = vec![AlgebraicNumber::zero(); k];
                v.extend(c.iter().cloned());
                AlgPoly { repr: Repr::A(v) }
            }
        }
    }

    pub fn derivative(&self) -> AlgPoly {
        match &self.repr {
            Repr::Q(q) => Self::from_qpoly(q.derivative()),
            Repr::A(c) => Self::new(
                c.iter().enumerate().skip(1).map(|(k, a)| a.scale(&Rational::from(k as i64))).collect(),
            ),
        }
    }

    pub fn conj(&self) -> AlgPoly {
        match &self.repr {
            Repr::Q(_) => self.clone(),
            Repr::A(c) => Self::new(c.iter().map(AlgebraicNumber::conj).collect()),
        }
    }

    /// Exact division: the quotient when `d` divides `self`.
    pub fn divides(d: &AlgPoly, p: &AlgPoly) -> Result<Option<AlgPoly>> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let (Repr::Q(dq), Repr::Q(pq)) = (&d.repr, &p.repr) {
            return Ok(pq.div_exact(dq)?.map(Self::from_qpoly));
        }
        let dc = d.coeffs();
        let mut r = p.coeffs();
        let dd = dc.len() - 1;
        if r.len() < dc.len() {
            return Ok(r.iter().all(AlgebraicNumber::is_zero).then(AlgPoly::zero));
        }
        let lead_inv = dc[dd].recip()?;
        let mut q = vec![AlgebraicNumber::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = r[k + dd].mul(&lead_inv);
            for (j, c) in dc.iter().enumerate() {
                r[k + j] = r[k + j].sub(&t.mul(c));
            }
            q[k] = t;
        }
        Ok(r[..dd].iter().all(AlgebraicNumber::is_zero).then(|| AlgPoly::new(q)))
    }

    /// Exact value at an algebraic point.
    pub fn eval(&self, a: &AlgebraicNumber) -> AlgebraicNumber {
        let mut acc = AlgebraicNumber::zero();
        for c in self.coeffs().iter().rev() {
            acc = acc.mul(a).add(c);
        }
        acc
    }

    /// Ball enclosure of the values on a disc; coefficients are enclosed to `prec` bits.
    pub fn eval_ball(&self, z: &Ball, prec: u32) -> Ball {
        match &self.repr {
            Repr::Q(q) => q.eval_ball(z, prec),
            Repr::A(c) => {
                let mut acc = Ball::zero();
                for a in c.iter().rev() {
                    acc = acc.mul(z, prec).add(&a.ball(prec as i64), prec);
                }
                acc
            }
        }
    }

    /// Conservative box enclosure of `{p(w) : w in z}`.
    pub fn eval_box(&self, z: &ComplexBox) -> ComplexBox {
        if z.is_point() {
            if let Repr::Q(q) = &self.repr {
                let (re, im) = count::eval_exact(q, z.re.lo(), z.im.lo());
                return ComplexBox::point(re, im);
            }
        }
        self.eval_ball(&Ball::from_box(z, 128), 128).to_box()
    }

    /// Certified upper bound on the sum of the coefficient moduli.
    pub fn length_upper_bound(&self) -> Rational {
        match &self.repr {
            Repr::Q(q) => q.length(),
            Repr::A(c) => c.iter().map(AlgebraicNumber::abs_upper).sum(),
        }
    }

    /// `L(p) * max(1, R)^deg p`, an upper bound for `|p|` on `|z| <= R`.
    pub fn sup_bound_on_disk(&self, r: &Rational) -> Rational {
        let m = if *r > Rational::one() { r.clone() } else { Rational::one() };
        self.length_upper_bound() * m.pow(self.deg() as u32)
    }

    /// Number of roots in `|z| < r`, with multiplicity.
    pub fn count_roots_in_disk(&self, r: &Rational) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        }
        count::count_roots_in_disk(&|b: &Ball, prec| self.eval_ball(b, prec), r, 64)
    }

    /// Number of roots in the open box `bx`, with multiplicity.
    pub fn count_roots_in_box(&self, bx: &ComplexBox) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        }
        count::count_roots_in_box(&|b: &Ball, prec| self.eval_ball(b, prec), bx, 64)
    }

    /// Distinct roots in `|z| < r` as exact algebraic numbers with multiplicities.
    pub fn isolate_roots_in_disk(&self, r: &Rational) -> Result<Vec<RootCluster>> {
        let surrogate = norm_surrogate(self)?.squarefree();
        let discs = isolate_all(&surrogate)?;
        let mut out = vec![];
        for d in discs {
            let Some(d) = inside_disk(&surrogate, d, r)? else {
                continue;
            };
            if self.eval_ball(&d, 128).excludes_zero() {
                continue;
            }
            let y = AlgebraicNumber::from_rooted(register(&surrogate, &d.to_box(), Some(d.clone()))?);
            if !self.eval(&y).is_zero() {
                continue;
            }
            out.push(RootCluster {
                bx: d.to_box(),
                multiplicity: self.multiplicity_at(&y),
                root: y,
            });
        }
        let total: usize = out.iter().map(|c| c.multiplicity).sum();
        let count = self.count_roots_in_disk(r)?;
        if total != count {
            return Err(Error::Internal(format!(
                "isolated multiplicities sum to {total}, winding count is {count}"
            )));
        }
        Ok(out)
    }

    /// Order of vanishing at a root.
    pub fn multiplicity_at(&self, y: &AlgebraicNumber) -> usize {
        let mut k = 0;
        let mut d = self.clone();
        while !d.is_zero() && d.eval(y).is_zero() {
            k += 1;
            d = d.derivative();
        }
        k
    }
}

/// Refine a root disc of `p` until it is strictly inside or outside `|z| = r`.
pub(crate) fn inside_disk(p: &QPoly, mut d: Ball, r: &Rational) -> Result<Option<Ball>> {
    let r_lo = crate::exact::Dy::from_rational_floor(r, 64);
    let r_hi = crate::exact::Dy::from_rational_ceil(r, 64);
    for _ in 0..limits().max_refine * 4 {
        if d.abs_upper(64) < r_lo {
            return Ok(Some(d));
        }
        if d.abs_lower(64) > r_hi {
            return Ok(None);
        }
        let target = d.rad.mul(Mag::pow2(-8));
        let prec = 64 + (-target.log2_ceil()).max(0) as u32;
        match newton_refine_disc(p, &d, target, prec) {
            Some(nd) => d = nd,
            None => break,
        }
    }
    Err(Error::RootOnCircle)
}

impl fmt::Debug for AlgPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Q(q) => write!(f, "{q:?}"),
            Repr::A(c) => f.debug_list().entries(c.iter()).finish(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> AlgPoly {
        AlgPoly::from_qpoly(QPoly::from_i64(c))
    }

    fn sqrt2() -> AlgebraicNumber {
        let bx = ComplexBox::from_bounds(Rational::from(1), Rational::from(2), Rational::zero(), Rational::zero()).unwrap();
        AlgebraicNumber::root_of(&QPoly::from_i64(&[-2, 0, 1]), &bx).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(q(&[-1, 1]).mul(&q(&[1, 1])).as_qpoly(), Some(&QPoly::from_i64(&[-1, 0, 1])));
        let p = q(&[0, 1, 1]);
        assert!(p.add(&p.neg()).is_zero());
        let half = AlgebraicNumber::from_rational(Rational::ratio(1, 2));
        assert_eq!(
            p.scale(&half).as_qpoly().unwrap().coeffs(),
            &[Rational::zero(), Rational::ratio(1, 2), Rational::ratio(1, 2)]
        );
    }

    #[test]
    fn algebraic_products_collapse_to_rational() {
        let s = sqrt2();
        let p = AlgPoly::linear(&s).mul(&AlgPoly::linear(&s.neg()));
        assert_eq!(p.as_qpoly(), Some(&QPoly::from_i64(&[-2, 0, 1])));
    }

    #[test]
    fn divisibility() {
        let quo = AlgPoly::divides(&q(&[-1, 1]), &q(&[-1, 0, 1])).unwrap().unwrap();
        assert_eq!(quo.as_qpoly(), Some(&QPoly::from_i64(&[1, 1])));
        assert!(AlgPoly::divides(&q(&[-1, 1]), &q(&[1, 0, 1])).unwrap().is_none());
        let i = AlgebraicNumber::i();
        let quo = AlgPoly::divides(&AlgPoly::linear(&i), &q(&[1, 0, 1])).unwrap().unwrap();
        assert!(quo.sub(&AlgPoly::linear(&i.neg())).is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let one = ComplexBox::point(Rational::zero(), Rational::one());
        assert!(q(&[1, 0, 1]).eval_box(&one).is_point());
        assert_eq!(q(&[1, 0, 1]).eval_box(&one), ComplexBox::zero());
        let two = ComplexBox::real(Rational::from(2));
        assert_eq!(q(&[0, 0, 1]).eval_box(&two), ComplexBox::real(Rational::from(4)));
    }

    #[test]
    fn length_and_sup_bounds() {
        assert_eq!(q(&[1, -1, 1]).length_upper_bound(), Rational::from(3));
        assert_eq!(AlgPoly::zero().length_upper_bound(), Rational::zero());
        assert_eq!(q(&[0, 0, 1]).sup_bound_on_disk(&Rational::from(2)), Rational::from(4));
        assert_eq!(q(&[1, 1]).sup_bound_on_disk(&Rational::ratio(1, 2)), Rational::from(2));
        assert_eq!(q(&[0, 0, 0, 2]).sup_bound_on_disk(&Rational::from(3)), Rational::from(54));
        let i2 = AlgebraicNumber::i().scale(&Rational::ratio(1, 2));
        let p = AlgPoly::linear(&i2).mul(&AlgPoly::linear(&i2.neg()));
        assert_eq!(p.length_upper_bound(), Rational::ratio(5, 4));
    }

    #[test]
    fn disk_counts() {
        let one = Rational::one();
        assert_eq!(AlgPoly::from_qpoly(QPoly::new(vec![Rational::ratio(-1, 4), Rational::zero(), one.clone()])).count_roots_in_disk(&one).unwrap(), 2);
        assert_eq!(q(&[-4, 0, 1]).count_roots_in_disk(&one).unwrap(), 0);
        assert_eq!(q(&[0, -3, 1]).count_roots_in_disk(&Rational::from(2)).unwrap(), 1);
        let big = ComplexBox::from_bounds(Rational::from(-2), Rational::from(2), Rational::from(-2), Rational::from(2)).unwrap();
        assert_eq!(q(&[-1, 0, 0, 1]).count_roots_in_box(&big).unwrap(), 3);
        assert_eq!(q(&[0, 0, 1]).count_roots_in_box(&big).unwrap(), 2);
        let unit = ComplexBox::from_bounds(Rational::from(0), Rational::from(1), Rational::from(0), Rational::from(1)).unwrap();
        assert_eq!(q(&[-5, 1]).count_roots_in_box(&unit).unwrap(), 0);
    }

    #[test]
    fn isolation_examples() {
        let c = q(&[-2, 0, 1]).isolate_roots_in_disk(&Rational::from(2)).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.multiplicity == 1));
        assert!(c.iter().any(|c| c.root.eq_exact(&sqrt2())));
        let half = AlgPoly::from_qpoly(QPoly::new(vec![Rational::ratio(-1, 2), Rational::one()])).pow(2);
        let c = half.isolate_roots_in_disk(&Rational::one()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].multiplicity, 2);
        assert_eq!(c[0].root.as_rational(), Some(Rational::ratio(1, 2)));
        let c = q(&[0, -1, 0, 1]).isolate_roots_in_disk(&Rational::ratio(1, 2)).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c[0].root.is_zero());
    }

    #[test]
    fn isolation_with_algebraic_coefficients() {
        // (z - i)^2 (z - 1/2) inside the unit-and-a-bit disc
        let i = AlgebraicNumber::i();
        let p = AlgPoly::linear(&i).pow(2).mul(&q(&[-1, 2]));
        let c = p.isolate_roots_in_disk(&Rational::ratio(3, 2)).unwrap();
        assert_eq!(c.len(), 2);
        let at_i = c.iter().find(|c| c.root.eq_exact(&i)).unwrap();
        assert_eq!(at_i.multiplicity, 2);
    }
}
