//! Uniform bounds for `f - f_m` on discs.

use crate::engine::state::ConstructionState;
use crate::exact::Rational;
use crate::{Error, Result};

/// `|f_k - f_m| <= built` for every built `k`, and `|f - f_m| <= built + tail`
/// when the unbuilt tail is certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailBound {
    /// `sum_{k=m+1..n} (rho/k)^{k + deg P_k}`, `rho = max(1, R)`.
    pub built: Rational,
    /// Geometric majorant of the terms `k > n`, present when `rho < m + 1`.
    pub tail: Option<Rational>,
}

impl TailBound {
    pub fn certified(&self) -> bool {
        self.tail.is_some()
    }

    /// `built + tail`, when the tail is certified.
    pub fn total(&self) -> Option<Rational> {
        self.tail.as_ref().map(|t| &self.built + t)
    }
}

/// Single term `(rho/k)^{k + deg P_k}`.
pub fn term_bound(rho: &Rational, k: usize, deg_p: usize) -> Rational {
    (rho / &Rational::from(k as i64)).pow((k + deg_p) as u32)
}

/// Bound on `|f_n - f_m|` (and on `|f - f_m|` where certified) for `|z| <= R`.
pub fn tail_bound(state: &ConstructionState, m: usize, r: &Rational) -> Result<TailBound> {
    let n = state.n();
    if m == 0 || m > n || !r.is_positive() {
        return Err(Error::InvalidArgument(format!("need 1 <= m <= {n} and R > 0")));
    }
    let rho = r.clone().max(Rational::one());
    let built = (m + 1..=n).map(|k| term_bound(&rho, k, state.p(k).degree())).sum();
    let limit = Rational::from(m as i64 + 1);
    // For k > n: (rho/k)^{k + deg P_k} <= x^k with x = rho/(m+1) < 1.
    let tail = (rho < limit).then(|| {
        let x = &rho / &limit;
        x.pow(n as u32 + 1) / (Rational::one() - x)
    });
    Ok(TailBound { built, tail })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_terms() {
        assert_eq!(term_bound(&Rational::one(), 3, 449), Rational::ratio(1, 3).pow(452));
        assert_eq!(term_bound(&Rational::from(2), 2, 6), Rational::one());
    }

    #[test]
    fn geometric_tail_of_the_initial_state() {
        let s = ConstructionState::init(1).unwrap();
        let t = tail_bound(&s, 1, &Rational::one()).unwrap();
        assert_eq!(t.built, Rational::zero());
        // x = 1/2: x^2 / (1 - x) = 1/2.
        assert_eq!(t.total(), Some(Rational::ratio(1, 2)));
        assert!(!tail_bound(&s, 1, &Rational::from(2)).unwrap().certified());
        assert!(tail_bound(&s, 0, &Rational::one()).is_err());
        assert!(tail_bound(&s, 2, &Rational::one()).is_err());
    }
}
