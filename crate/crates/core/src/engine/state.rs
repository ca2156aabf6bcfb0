//! The data carried from one step of the construction to the next.

use crate::algebraic::enumerate::{enumerate_alphas, Alpha};
use crate::algebraic::AlgebraicNumber;
use crate::exact::Rational;
use crate::poly::{AlgPoly, PolyForm};
use crate::Result;

/// `poly^exp`, one factor of some `P_m`.
#[derive(Clone, Debug)]
pub struct Factor {
    pub poly: AlgPoly,
    pub exp: u32,
}

/// `P` as a product of factors.
#[derive(Clone, Debug, Default)]
pub struct Factored(pub Vec<Factor>);

impl Factored {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|f| f.poly.deg() * f.exp as usize).sum()
    }

    pub fn form(&self) -> PolyForm {
        PolyForm::Product(self.0.iter().map(|f| (PolyForm::dense(f.poly.clone()), f.exp)).collect())
    }

    pub fn expand(&self) -> AlgPoly {
        self.0.iter().fold(AlgPoly::one(), |acc, f| acc.mul(&f.poly.pow(f.exp)))
    }

    /// `P(0)`, exactly.
    pub fn at_zero(&self) -> AlgebraicNumber {
        self.0
            .iter()
            .fold(AlgebraicNumber::one(), |acc, f| acc.mul(&f.poly.coeff(0).pow(f.exp)))
    }
}

/// What step `n -> n+1` added.
#[derive(Clone, Debug)]
pub struct StepRecord {
    /// `n`; the step builds `f_{n+1}`.
    pub n: usize,
    /// `r_{n+1}`.
    pub radius: Rational,
    /// `P_{n+1}` in full.
    pub p: Factored,
    /// `eps_{n+1}`.
    pub epsilon: AlgebraicNumber,
    /// `a_{n+1}`, the chosen `p/q`.
    pub coefficient: Rational,
}

/// A certified solution of `f_k(y) = alpha_j` with `|y| < r_{k+1}`.
#[derive(Clone, Debug)]
pub struct LedgerEntry {
    /// The step `k` whose radius `r_{k+1}` the point was collected for.
    pub step: usize,
    /// `j`, 1-based.
    pub alpha: usize,
    pub point: AlgebraicNumber,
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct ConstructionState {
    pub seed: u64,
    /// `alpha_1 .. alpha_{3n+1}`.
    pub alphas: Vec<Alpha>,
    pub steps: Vec<StepRecord>,
    /// `f_n`, dense.
    pub f: AlgPoly,
    pub ledger: Vec<LedgerEntry>,
}

impl ConstructionState {
    /// `f_1 = z`, `P_1 = 1`, `alpha_1 .. alpha_4`.
    pub fn init(seed: u64) -> Result<Self> {
        Ok(ConstructionState {
            seed,
            alphas: enumerate_alphas(1)?,
            steps: vec![],
            f: AlgPoly::monomial(1),
            ledger: vec![],
        })
    }

    /// The index `n` of the current `f_n`.
    pub fn n(&self) -> usize {
        self.steps.len() + 1
    }

    /// `P_k` for `1 <= k <= n`.
    pub fn p(&self, k: usize) -> Factored {
        if k <= 1 {
            Factored::default()
        } else {
            self.steps[k - 2].p.clone()
        }
    }

    /// `a_1 .. a_n`.
    pub fn prefix(&self) -> Vec<Rational> {
        std::iter::once(Rational::one()).chain(self.steps.iter().map(|s| s.coefficient.clone())).collect()
    }

    /// `f_k = z + sum_{m=2..k} eps_m z^m P_m` in factored form.
    pub fn f_form(&self, k: usize) -> PolyForm {
        let mut parts = vec![PolyForm::dense(AlgPoly::monomial(1))];
        for s in &self.steps[..k - 1] {
            parts.push(update_form(s));
        }
        PolyForm::Sum(parts)
    }

    /// `f_k` expanded from the step records.
    pub fn f_dense(&self, k: usize) -> AlgPoly {
        self.steps[..k - 1]
            .iter()
            .fold(AlgPoly::monomial(1), |acc, s| acc.add(&update_dense(s)))
    }
}

/// `eps z^{n+1} P_{n+1}` in factored form.
pub fn update_form(s: &StepRecord) -> PolyForm {
    let mut factors = vec![(PolyForm::dense(AlgPoly::monomial(1)), s.n as u32 + 1)];
    if let PolyForm::Product(v) = s.p.form() {
        factors.extend(v);
    }
    PolyForm::Scaled(s.epsilon.clone(), Box::new(PolyForm::Product(factors)))
}

/// `eps z^{n+1} P_{n+1}` expanded.
pub fn update_dense(s: &StepRecord) -> AlgPoly {
    s.p.expand().shift(s.n + 1).scale(&s.epsilon)
}
