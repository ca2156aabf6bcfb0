//! Enumeration `alpha_1, alpha_2, ...` of all algebraic numbers with
//! `alpha_1 = 0` and, for every `n >= 1`, a non-real conjugate pair
//! `alpha_{3n-1}, alpha_{3n}` followed by a real `alpha_{3n+1}`, all three of
//! modulus `< n`.
//!
//! Candidates come from primitive integer polynomials `a_d x^d + ... + a_0`
//! with `a_d > 0`, ordered by `d + height`, then `d`, then the coefficient
//! tuple `(a_d, ..., a_0)` lexicographically. Each `(degree + height, degree)`
//! class is finite, so this is a well-order and every polynomial is reached.
//! Polynomials of degree `>= 2` with a rational root are skipped: their
//! rational roots come from linear polynomials and their other roots from
//! other polynomials. Roots of one polynomial are taken by real part, then
//! imaginary part; a non-real root with positive imaginary part is queued
//! together with its conjugate.
//!
//! Candidates that fail the modulus bound wait in FIFO queues that are
//! consulted before the generator; since the bound grows with `n`, every
//! algebraic number is eventually emitted.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebraic::leaf::register;
use crate::algebraic::AlgebraicNumber;
use crate::exact::{Dy, Rational};
use crate::poly::isolate::isolate_all;
use crate::poly::{AlgPoly, QPoly};
use crate::Result;

/// One enumerated value with the polynomial it was generated from.
#[derive(Clone, Debug)]
pub struct Alpha {
    pub value: AlgebraicNumber,
    /// Primitive square-free integer polynomial with `value` as a root.
    pub poly: Vec<BigInt>,
    pub real: bool,
}

/// Primitive integer polynomials in the canonical order.
#[derive(Debug, Clone, Default)]
struct Generator {
    sum: usize,
    degree: usize,
    layer: VecDeque<Vec<i64>>,
}

impl Generator {
    fn next(&mut self) -> Vec<i64> {
        loop {
            if let Some(p) = self.layer.pop_front() {
                return p;
            }
            if self.degree + 1 < self.sum {
                self.degree += 1;
            } else {
                self.sum += 1;
                self.degree = 1;
                if self.sum < 2 {
                    self.sum = 2;
                }
            }
            self.layer = layer(self.degree, self.sum - self.degree).into();
        }
    }
}

/// Primitive polynomials of degree `d` and height `h`, lexicographic in `(a_d, ..., a_0)`.
fn layer(d: usize, h: usize) -> Vec<Vec<i64>> {
    let h = h as i64;
    let mut out = vec![];
    let mut high_first = vec![0i64; d + 1];
    fn rec(k: usize, d: usize, h: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k > d {
            if cur.iter().any(|c| c.abs() == h) && cur.iter().fold(0i64, |g, c| g.gcd(c)) == 1 {
                out.push(cur.iter().rev().copied().collect());
            }
            return;
        }
        let lo = if k == 0 { 1 } else { -h };
        for v in lo..=h {
            cur[k] = v;
            rec(k + 1, d, h, cur, out);
        }
    }
    rec(0, d, h, &mut high_first, &mut out);
    out
}

/// Whether an integer polynomial (low-to-high) has a rational root.
fn has_rational_root(c: &[i64]) -> bool {
    if c[0] == 0 {
        return true;
    }
    let p = QPoly::from_i64(c);
    let lead = *c.last().expect("nonconstant");
    let divisors = |n: i64| (1..=n.abs()).filter(move |k| n % k == 0);
    for num in divisors(c[0]) {
        for den in divisors(lead) {
            for s in [1, -1] {
                if p.eval(&Rational::ratio(s * num, den)).is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Certified `|a| < n`; exact ties count as not below.
fn modulus_below(a: &AlgebraicNumber, n: usize) -> bool {
    let bound = Dy::from_i64(n as i64);
    let mut bits = 32i64;
    loop {
        let b = a.ball(bits);
        if b.abs_upper(64) < bound {
            return true;
        }
        if b.abs_lower(64) > bound {
            return false;
        }
        if bits >= 256 {
            let n2 = AlgebraicNumber::from_i64((n * n) as i64);
            if a.mul(&a.conj()).eq_exact(&n2) {
                return false;
            }
        }
        bits *= 2;
    }
}

/// Certified comparison of real or imaginary parts, exact on ties.
fn cmp_part(a: &AlgebraicNumber, b: &AlgebraicNumber, imag: bool) -> Ordering {
    let part = |x: &AlgebraicNumber| {
        let s = if imag {
            x.sub(&x.conj()).mul(&AlgebraicNumber::i().neg())
        } else {
            x.add(&x.conj())
        };
        s.scale(&Rational::ratio(1, 2))
    };
    let d = part(a).sub(&part(b));
    if d.is_zero() {
        return Ordering::Equal;
    }
    let mut bits = 32;
    loop {
        let ball = d.ball(bits);
        let rad = ball.rad.to_dy();
        if ball.re > rad {
            return Ordering::Greater;
        }
        if ball.re < rad.neg() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// The constrained enumeration.
#[derive(Debug)]
pub struct AlphaStream {
    emitted: Vec<Alpha>,
    pending_pairs: VecDeque<(Alpha, Alpha)>,
    pending_reals: VecDeque<Alpha>,
    generator: Generator,
    /// Polynomials whose roots have been queued, for duplicate detection.
    seen: Vec<QPoly>,
}

impl Default for AlphaStream {
    fn default() -> Self {
        Self::new()
    }
}

impl AlphaStream {
    pub fn new() -> Self {
        AlphaStream {
            emitted: vec![Alpha {
                value: AlgebraicNumber::zero(),
                poly: vec![BigInt::zero(), BigInt::from(1)],
                real: true,
            }],
            pending_pairs: VecDeque::new(),
            pending_reals: VecDeque::new(),
            generator: Generator::default(),
            seen: vec![QPoly::x()],
        }
    }

    pub fn emitted(&self) -> &[Alpha] {
        &self.emitted
    }

    /// Make sure `alpha_1 .. alpha_{3n+1}` have been emitted.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.emitted.len() < 3 * n + 1 {
            let step = (self.emitted.len() - 1) / 3 + 1;
            let (a, b) = self.next_pair(step)?;
            let c = self.next_real(step)?;
            log::debug!("alpha triple {step}: {:?}, {:?}, {:?}", a.value, b.value, c.value);
            self.emitted.extend([a, b, c]);
        }
        Ok(())
    }

    fn next_pair(&mut self, n: usize) -> Result<(Alpha, Alpha)> {
        loop {
            if let Some(k) = self.pending_pairs.iter().position(|(a, _)| modulus_below(&a.value, n)) {
                return Ok(self.pending_pairs.remove(k).expect("in range"));
            }
            self.pull()?;
        }
    }

    fn next_real(&mut self, n: usize) -> Result<Alpha> {
        loop {
            if let Some(k) = self.pending_reals.iter().position(|a| modulus_below(&a.value, n)) {
                return Ok(self.pending_reals.remove(k).expect("in range"));
            }
            self.pull()?;
        }
    }

    /// Queue the new roots of the next polynomial.
    fn pull(&mut self) -> Result<()> {
        let c = self.generator.next();
        if c.len() > 2 && has_rational_root(&c) {
            return Ok(());
        }
        let p = QPoly::from_i64(&c).squarefree();
        let ints = p.primitive_ints();
        let roots = self.new_roots(&p)?;
        self.seen.push(p);
        for (value, real) in roots {
            let alpha = Alpha { value, poly: ints.clone(), real };
            if real {
                self.pending_reals.push_back(alpha);
            } else {
                let conj = Alpha { value: alpha.value.conj(), ..alpha.clone() };
                self.pending_pairs.push_back((alpha, conj));
            }
        }
        Ok(())
    }

    /// Roots of `p` not already queued: reals and upper-half-plane roots,
    /// ordered by real then imaginary part.
    fn new_roots(&self, p: &QPoly) -> Result<Vec<(AlgebraicNumber, bool)>> {
        let mut out = vec![];
        if p.deg() == 1 {
            let r = -(p.coeff(0) / p.coeff(1));
            out.push((AlgebraicNumber::from_rational(r), true));
        } else {
            for d in isolate_all(p)? {
                let v = AlgebraicNumber::from_rooted(register(p, &d.to_box(), Some(d.clone()))?);
                let real = v.as_rational().is_some() || v.is_real();
                if real || cmp_part(&v, &AlgebraicNumber::zero(), true) == Ordering::Greater {
                    out.push((v, real));
                }
            }
        }
        out.retain(|(v, _)| !self.is_duplicate(p, v));
        out.sort_by(|a, b| cmp_part(&a.0, &b.0, false).then_with(|| cmp_part(&a.0, &b.0, true)));
        Ok(out)
    }

    fn is_duplicate(&self, p: &QPoly, v: &AlgebraicNumber) -> bool {
        self.seen.iter().any(|q| {
            let g = p.gcd(q);
            g.deg() > 0 && AlgPoly::from_qpoly(g).eval(v).is_zero()
        })
    }
}

/// `alpha_1 .. alpha_{3n+1}`.
pub fn enumerate_alphas(n: usize) -> Result<Vec<Alpha>> {
    let mut s = AlphaStream::new();
    s.extend_to(n)?;
    Ok(s.emitted.clone())
}
