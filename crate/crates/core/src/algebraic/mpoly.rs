//! Multivariate polynomials over registered leaves, kept in normal form:
//! the exponent of every leaf stays below the degree of its defining
//! polynomial, so a leaf relation `p(theta) = 0` is applied on every product.

use std::collections::{BTreeMap, BTreeSet};

use smallvec::SmallVec;

use crate::algebraic::leaf::leaf;
use crate::exact::{Ball, Mag, Rational};

/// Monomial `prod theta_id^e` as `(id, e)` pairs sorted by id, `e >= 1`.
pub type Mono = SmallVec<[(u32, u32); 4]>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Mono, Rational>,
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = Mono::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Mono::new(), q);
        }
        MPoly { terms }
    }

    /// The leaf itself.
    pub fn leaf(id: u32) -> Self {
        let mut terms = BTreeMap::new();
        let mut m = Mono::new();
        m.push((id, 1));
        terms.insert(m, Rational::one());
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// The value when no leaf occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Mono::new()).cloned(),
            _ => None,
        }
    }

    /// Leaves occurring in the polynomial, with their largest exponent.
    pub fn leaf_degrees(&self) -> BTreeMap<u32, u32> {
        let mut out = BTreeMap::new();
        for m in self.terms.keys() {
            for &(id, e) in m {
                let v = out.entry(id).or_insert(0);
                *v = (*v).max(e);
            }
        }
        out
    }

    pub fn leaves(&self) -> BTreeSet<u32> {
        self.leaf_degrees().into_keys().collect()
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rational) -> MPoly {
        if k.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Add `c * m` to `self`, reducing exponents that reach a leaf degree.
    fn add_reduced(&mut self, m: Mono, c: Rational) {
        let over = m.iter().position(|&(id, e)| e as usize >= leaf(id).degree());
        let Some(pos) = over else {
            self.add_term(m, c);
            return;
        };
        let (id, e) = m[pos];
        let l = leaf(id);
        let rest: Mono = m.iter().enumerate().filter(|&(i, _)| i != pos).map(|(_, t)| *t).collect();
        for (k, v) in l.reduced_power(e as usize).iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let mut part = rest.clone();
            if k > 0 {
                let mut single = Mono::new();
                single.push((id, k as u32));
                part = mono_mul(&part, &single);
            }
            self.add_reduced(part, &c * v);
        }
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_reduced(mono_mul(ma, mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::constant(Rational::one());
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

    /// Replace every leaf by a polynomial.
    pub fn substitute(&self, image: &dyn Fn(u32) -> MPoly) -> MPoly {
        let mut cache: BTreeMap<(u32, u32), MPoly> = BTreeMap::new();
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(c.clone());
            for &(id, e) in m {
                let p = cache.entry((id, e)).or_insert_with(|| image(id).pow(e)).clone();
                t = t.mul(&p);
            }
            out = out.add(&t);
        }
        out
    }

    /// Ball enclosure with leaf enclosures of radius `2^-leaf_prec`.
    pub fn eval_ball(&self, leaf_prec: u32, prec: u32) -> Ball {
        let mut balls: BTreeMap<u32, Ball> = BTreeMap::new();
        let mut acc = Ball::zero();
        for (m, c) in &self.terms {
            let mut t = Ball::from_rational(c, &Rational::zero(), prec);
            for &(id, e) in m {
                let b = balls.entry(id).or_insert_with(|| leaf(id).ball(leaf_prec)).clone();
                t = t.mul(&b.pow(e, prec), prec);
            }
            acc = acc.add(&t, prec);
        }
        acc
    }

    /// `sum |c| prod B_id^e` with `B_id` the root bound of each leaf.
    pub(crate) fn conjugate_sup(&self) -> Mag {
        let mut total = Mag::zero();
        for (m, c) in &self.terms {
            let mut t = Mag::from_rational_upper(c);
            for &(id, e) in m {
                t = t.mul(Mag::from_rational_upper(leaf(id).root_bound()).pow(e));
            }
            total = total.add(t);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::leaf::{register, Rooted};
    use crate::exact::ComplexBox;
    use crate::poly::QPoly;

    fn sqrt(n: i64) -> u32 {
        let bx = ComplexBox::from_bounds(Rational::from(1), Rational::from(n), Rational::zero(), Rational::zero()).unwrap();
        match register(&QPoly::from_i64(&[-n, 0, 1]), &bx, None).unwrap() {
            Rooted::Leaf(l) => l.id,
            Rooted::Rational(_) => panic!("square"),
        }
    }

    #[test]
    fn square_of_a_square_root_reduces() {
        let s = MPoly::leaf(sqrt(3));
        assert_eq!(s.mul(&s).as_rational(), Some(Rational::from(3)));
    }

    #[test]
    fn products_of_distinct_leaves_stay_symbolic() {
        let a = MPoly::leaf(sqrt(2));
        let b = MPoly::leaf(sqrt(3));
        let ab = a.mul(&b);
        assert_eq!(ab.len(), 1);
        assert_eq!(ab.mul(&ab).as_rational(), Some(Rational::from(6)));
    }

    #[test]
    fn substitution_applies_conjugation() {
        let a = MPoly::leaf(sqrt(5));
        let minus = a.substitute(&|_| MPoly::leaf(sqrt(5)).neg());
        assert!(a.add(&minus).is_zero());
    }
}
