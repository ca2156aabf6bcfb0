//! Polynomials kept as sums and products of dense parts.
//!
//! Expanding `f_n + eps z^k prod P_i^e_i` produces coefficients that cancel
//! heavily on circles of moderate radius; evaluating the structured form
//! keeps ball enclosures tight.

use crate::algebraic::AlgebraicNumber;
use crate::exact::Ball;
use crate::poly::AlgPoly;

#[derive(Clone, Debug)]
pub enum PolyForm {
    Dense(AlgPoly),
    Sum(Vec<PolyForm>),
    Product(Vec<(PolyForm, u32)>),
    Scaled(AlgebraicNumber, Box<PolyForm>),
}

impl PolyForm {
    pub fn dense(p: AlgPoly) -> Self {
        PolyForm::Dense(p)
    }

    /// `self - a`.
    pub fn minus_constant(&self, a: &AlgebraicNumber) -> Self {
        PolyForm::Sum(vec![self.clone(), PolyForm::Dense(AlgPoly::constant(a.neg()))])
    }

    pub fn degree(&self) -> usize {
        match self {
            PolyForm::Dense(p) => p.deg(),
            PolyForm::Sum(v) => v.iter().map(PolyForm::degree).max().unwrap_or(0),
            PolyForm::Product(v) => v.iter().map(|(f, e)| f.degree() * *e as usize).sum(),
            PolyForm::Scaled(_, f) => f.degree(),
        }
    }

    pub fn eval_ball(&self, z: &Ball, prec: u32) -> Ball {
        match self {
            PolyForm::Dense(p) => p.eval_ball(z, prec),
            PolyForm::Sum(v) => v.iter().fold(Ball::zero(), |acc, f| acc.add(&f.eval_ball(z, prec), prec)),
            PolyForm::Product(v) => v.iter().fold(Ball::from_i64(1), |acc, (f, e)| {
                acc.mul(&f.eval_ball(z, prec).pow(*e, prec), prec)
            }),
            PolyForm::Scaled(a, f) => a.ball(prec as i64).mul(&f.eval_ball(z, prec), prec),
        }
    }

    /// Exact value at an algebraic point.
    pub fn eval(&self, a: &AlgebraicNumber) -> AlgebraicNumber {
        match self {
            PolyForm::Dense(p) => p.eval(a),
            PolyForm::Sum(v) => v.iter().fold(AlgebraicNumber::zero(), |acc, f| acc.add(&f.eval(a))),
            PolyForm::Product(v) => {
                let mut acc = AlgebraicNumber::one();
                for (f, e) in v {
                    let x = f.eval(a);
                    if x.as_rational().is_some_and(|q| q.is_zero()) {
                        return AlgebraicNumber::zero();
                    }
                    acc = acc.mul(&x.pow(*e));
                }
                acc
            }
            PolyForm::Scaled(c, f) => c.mul(&f.eval(a)),
        }
    }

    pub fn expand(&self) -> AlgPoly {
        match self {
            PolyForm::Dense(p) => p.clone(),
            PolyForm::Sum(v) => v.iter().fold(AlgPoly::zero(), |acc, f| acc.add(&f.expand())),
            PolyForm::Product(v) => v.iter().fold(AlgPoly::one(), |acc, (f, e)| acc.mul(&f.expand().pow(*e))),
            PolyForm::Scaled(c, f) => f.expand().scale(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rational;
    use crate::poly::QPoly;

    #[test]
    fn structured_and_dense_agree() {
        let a = AlgPoly::from_qpoly(QPoly::from_i64(&[1, -3, 1]));
        let b = AlgPoly::from_qpoly(QPoly::from_i64(&[2, 1]));
        let eps = AlgebraicNumber::from_rational(Rational::ratio(1, 7));
        let form = PolyForm::Sum(vec![
            PolyForm::Dense(a.clone()),
            PolyForm::Scaled(eps.clone(), Box::new(PolyForm::Product(vec![(PolyForm::Dense(b.clone()), 3)]))),
        ]);
        let dense = a.add(&b.pow(3).scale(&eps));
        assert!(form.expand().sub(&dense).is_zero());
        assert_eq!(form.degree(), 3);
        let z = AlgebraicNumber::i();
        assert!(form.eval(&z).eq_exact(&dense.eval(&z)));
        let w = Ball::from_rational(&Rational::ratio(3, 4), &Rational::ratio(-1, 3), 128);
        let (x, y) = (form.eval_ball(&w, 128), dense.eval_ball(&w, 128));
        assert!(!crate::poly::isolate::discs_disjoint(&x, &y));
    }
}
