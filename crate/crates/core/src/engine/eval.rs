//! Certified evaluation of a constructed polynomial at rational points.

use crate::config::limits;
use crate::engine::state::ConstructionState;
use crate::engine::tail::{tail_bound, TailBound};
use crate::exact::{Ball, ComplexBox, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Evaluation {
    /// Box containing `f_N(z)` with both sides at most the requested width.
    pub value: ComplexBox,
    /// Bound for `|f - f_N|` on the disc `|w| <= |z|`.
    pub tail: TailBound,
}

/// Evaluate `f_N` at `re + im i`, refining until the box has width `width`.
pub fn evaluate(state: &ConstructionState, re: &Rational, im: &Rational, width: &Rational) -> Result<Evaluation> {
    if !width.is_positive() {
        return Err(Error::InvalidArgument("width must be positive".into()));
    }
    let n = state.n();
    let form = state.f_form(n);
    let max_bits = limits().max_bits;
    let mut prec = 64u32;
    let value = loop {
        let z = Ball::from_rational(re, im, prec);
        let bx = form.eval_ball(&z, prec).to_box();
        if bx.width() <= *width {
            break bx;
        }
        if u64::from(prec) >= max_bits {
            return Err(Error::limit("evaluation", format!("width {width} not reached at {prec} bits")));
        }
        prec = prec.saturating_mul(2);
    };
    let modulus = (re * re + im * im).sqrt_ceil(64)?;
    let tail = tail_bound(state, n, &modulus.max(Rational::pow2(-64)))?;
    Ok(Evaluation { value, tail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_evaluated_exactly() {
        let s = ConstructionState::init(1).unwrap();
        let half = Rational::ratio(1, 2);
        let e = evaluate(&s, &half, &Rational::ratio(-1, 3), &Rational::pow2(-20)).unwrap();
        assert!(e.value.contains_point(&half, &Rational::ratio(-1, 3)));
        assert!(e.value.width() <= Rational::pow2(-20));
        assert!(e.tail.certified());
    }

    #[test]
    fn width_must_be_positive() {
        let s = ConstructionState::init(1).unwrap();
        let z = Rational::zero();
        assert!(evaluate(&s, &z, &z, &z).is_err());
    }
}
