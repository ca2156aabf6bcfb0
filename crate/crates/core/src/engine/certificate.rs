//! The evidence recorded for one step.

use crate::algebraic::AlgebraicNumber;
use crate::exact::Rational;
use crate::persist::poly_digest;
use crate::poly::AlgPoly;
use crate::Result;

/// `P` is written out in full up to this degree.
pub const INLINE_DEGREE: usize = 64;

/// Per-alpha circle data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaBound {
    /// `i`, 1-based.
    pub index: usize,
    /// `m_i <= min |f_n - alpha_i|` on the circle.
    pub min_bound: Rational,
    /// Roots of `f_n - alpha_i` in the disc.
    pub count_before: usize,
    /// Roots of `f_{n+1} - alpha_i` in the disc.
    pub count_after: usize,
}

/// Identity of `P_{n+1}`.
#[derive(Clone, Debug)]
pub struct PFingerprint {
    pub degree: usize,
    /// Upper bound for the length of `P_{n+1}`.
    pub length: Rational,
    /// SHA-256 of the canonical JSON coefficient list.
    pub sha256: String,
    pub coeffs: Option<AlgPoly>,
}

impl PFingerprint {
    pub fn of(p: &AlgPoly, length: Rational) -> Result<Self> {
        Ok(PFingerprint {
            degree: p.deg(),
            length,
            sha256: poly_digest(p),
            coeffs: (p.deg() <= INLINE_DEGREE).then(|| p.clone()),
        })
    }
}

#[derive(Clone, Debug)]
pub struct StepCertificate {
    /// The step `n -> n+1`.
    pub n: usize,
    /// `r_{n+1}`.
    pub radius: Rational,
    pub alphas: Vec<AlphaBound>,
    pub p: PFingerprint,
    /// `M >= max |z^{n+1} P_{n+1}|` on the circle.
    pub max_bound: Rational,
    /// Coefficient of `z^{n+1}` in `f_n`.
    pub c: AlgebraicNumber,
    /// Bound on `|p/q - c|` used for the choice.
    pub threshold: Rational,
    /// `p/q = a_{n+1}`.
    pub coefficient: Rational,
    pub epsilon: AlgebraicNumber,
    /// Lower bound for `1/(L (n+1)^{n+1+deg P}) - |eps|`.
    pub condition_iv_margin: Rational,
    /// Lower bounds for `m_i - |eps| M`.
    pub rouche_margins: Vec<Rational>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_polynomials_are_inlined() {
        let small = AlgPoly::monomial(INLINE_DEGREE);
        let large = AlgPoly::monomial(INLINE_DEGREE + 1);
        let a = PFingerprint::of(&small, Rational::one()).unwrap();
        let b = PFingerprint::of(&large, Rational::one()).unwrap();
        assert!(a.coeffs.is_some() && b.coeffs.is_none());
        assert_eq!(b.degree, INLINE_DEGREE + 1);
        assert_eq!(a.sha256.len(), 64);
        assert_ne!(a.sha256, b.sha256);
    }
}
