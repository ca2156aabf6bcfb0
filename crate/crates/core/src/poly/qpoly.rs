use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{common_denominator, Ball, Rational};
use crate::{Error, Result};

/// Dense univariate polynomial over Q, coefficients low-to-high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Rational::is_zero) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from(v)).collect())
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn zero() -> Self {
        QPoly { c: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(v: Rational) -> Self {
        Self::new(vec![v])
    }

    /// `z`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `z - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Self::new(vec![-a, Rational::one()])
    }

    pub fn monomial(k: usize, coeff: Rational) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = coeff;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.c
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_default()
    }

    /// Order of vanishing at 0 (`None` for the zero polynomial).
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|v| !v.is_zero())
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        Self::new(
            (0..n)
                .map(|i| match (self.c.get(i), o.c.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            c: self.c.iter().map(|v| -v).collect(),
        }
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> QPoly {
        if k.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            c: self.c.iter().map(|v| v * k).collect(),
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rational::zero(); k];
        c.extend(self.c.iter().cloned());
        QPoly { c }
    }

    /// `(d, ints)` with `self = ints / d` coefficientwise.
    pub fn to_integer_parts(&self) -> (BigInt, Vec<BigInt>) {
        let d = common_denominator(&self.c);
        let ints = self
            .c
            .iter()
            .map(|v| v.numer() * (&d / v.denom()))
            .collect();
        (d, ints)
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let (da, a) = self.to_integer_parts();
        let (db, b) = o.to_integer_parts();
        let prod = int_mul(&a, &b);
        let d = da * db;
        Self::new(
            prod.into_iter()
                .map(|v| Rational::new(v, d.clone()).expect("nonzero"))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> QPoly {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, v)| v * &Rational::from(i as i64))
                .collect(),
        )
    }

    /// Long division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        if self.c.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let inv = d.lead().recip()?;
        let mut r = self.c.clone();
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let t = &r[k + dd] * &inv;
            if !t.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[k + j] -= &(&t * dj);
                }
            }
            q[k] = t;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Exact quotient when `d | self`, otherwise `None`.
    pub fn div_exact(&self, d: &QPoly) -> Result<Option<QPoly>> {
        let (q, r) = self.div_rem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn monic(&self) -> QPoly {
        match self.c.last() {
            None => QPoly::zero(),
            Some(l) => self.scale(&l.recip().expect("nonzero lead")),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.primitive(), o.primitive());
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Remainder of `lc(d)^k * self` by `d`, computed over Z after clearing denominators.
    fn pseudo_rem(&self, d: &QPoly) -> QPoly {
        let (_, mut r) = self.to_integer_parts();
        let (_, dv) = d.to_integer_parts();
        let dd = dv.len() - 1;
        let lc = dv[dd].clone();
        while r.len() > dd {
            let t = r.pop().expect("nonempty");
            if !t.is_zero() {
                let base = r.len() - dd;
                for v in r.iter_mut() {
                    *v *= &lc;
                }
                for (j, dj) in dv.iter().take(dd).enumerate() {
                    r[base + j] -= &t * dj;
                }
            }
            let g = r.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if !g.is_zero() && !g.is_one() {
                for v in r.iter_mut() {
                    *v /= &g;
                }
            }
        }
        QPoly::from_ints(&r)
    }

    /// Integer primitive part with positive leading coefficient, as a rational polynomial.
    pub fn primitive(&self) -> QPoly {
        QPoly::from_ints(&self.primitive_ints())
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive_ints(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let (_, mut v) = self.to_integer_parts();
        let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let sign = if v.last().expect("nonzero").is_negative() { -1 } else { 1 };
        for x in v.iter_mut() {
            *x = &*x / &g * sign;
        }
        v
    }

    /// Square-free part (monic).
    pub fn squarefree(&self) -> QPoly {
        if self.deg() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("nonzero").expect("gcd divides").monic()
    }

    /// Yun decomposition `self = lc * prod f_i^i`, returned as `[(f_i, i)]` with monic, nonconstant `f_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, u32)> {
        let mut out = vec![];
        if self.deg() == 0 {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_exact(&a0).unwrap().unwrap();
        let mut c = d.div_exact(&a0).unwrap().unwrap();
        let mut dd = c.sub(&b.derivative());
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&dd);
            b = b.div_exact(&a).unwrap().unwrap();
            c = dd.div_exact(&a).unwrap().unwrap();
            dd = c.sub(&b.derivative());
            if a.deg() > 0 {
                out.push((a.monic(), i));
            }
            i += 1;
        }
        out
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for v in self.c.iter().rev() {
            acc = acc * x + v;
        }
        acc
    }

    /// Sign of `self(x)` via an integer Horner scheme (no gcds).
    pub fn sign_at(&self, x: &Rational) -> i32 {
        let (_, a) = self.to_integer_parts();
        let (p, q) = (x.numer(), x.denom());
        // q^n * f(p/q) = sum a_i p^i q^(n-i)
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for v in a.iter().rev() {
            acc = acc * p + v * &qpow;
            qpow *= q;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Ball Horner evaluation.
    pub fn eval_ball(&self, z: &Ball, prec: u32) -> Ball {
        let mut acc = Ball::zero();
        for v in self.c.iter().rev() {
            acc = acc.mul(z, prec).add(&Ball::from_rational(v, &Rational::zero(), prec), prec);
        }
        acc
    }

    /// Sum of absolute values of the coefficients.
    pub fn length(&self) -> Rational {
        self.c.iter().map(Rational::abs).sum()
    }

    /// Cauchy bound: every root has modulus `< 1 + max |a_i / a_n|`.
    pub fn cauchy_bound(&self) -> Rational {
        let lead = self.lead().abs();
        if lead.is_zero() {
            return Rational::zero();
        }
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(Rational::abs)
            .max()
            .unwrap_or_default();
        Rational::one() + m / lead
    }

    /// Sturm sequence of `self`.
    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![self.clone()];
        }
        // Scaling by positive constants only: the signs carry the information.
        let norm = |q: QPoly| {
            let l = q.lead().abs();
            q.scale(&l.recip().expect("nonzero"))
        };
        let mut seq = vec![norm(self.clone()), norm(self.derivative())];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero");
            if r.is_zero() {
                break;
            }
            seq.push(norm(r.neg()));
        }
        seq
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_real_roots(&self, a: &Rational, b: &Rational) -> usize {
        let seq = self.sturm_sequence();
        let var = |x: &Rational| {
            let signs: Vec<i32> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        var(a).saturating_sub(var(b))
    }

    /// Number of distinct real roots in the closed interval `[a, b]`.
    pub fn count_real_roots_closed(&self, a: &Rational, b: &Rational) -> usize {
        self.count_real_roots(a, b) + (self.sign_at(a) == 0) as usize
    }

    /// Composition `self(other)`.
    pub fn compose(&self, other: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for v in self.c.iter().rev() {
            acc = acc.mul(other).add(&QPoly::constant(v.clone()));
        }
        acc
    }
}

/// Schoolbook product of integer coefficient vectors.
pub(crate) fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| match i {
                0 => format!("{v}"),
                1 => format!("({v})z"),
                _ => format!("({v})z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
