//! The inductive construction.
//!
//! Starting from `f_1 = z`, `P_1 = 1`, step `n` picks a radius
//! `r_{n+1} in (n+1, n+2)`, collects the solutions `y` of
//! `f_n(y) = alpha_j` (`j <= 3n+1`) inside it, forms
//! `P_{n+1} = P_n (z - alpha_{3n-1})(z - alpha_{3n})(z - alpha_{3n+1}) prod (z - y)^{deg f_n}`
//! and sets `f_{n+1} = f_n + eps_{n+1} z^{n+1} P_{n+1}` with `eps_{n+1}`
//! chosen so that the new coefficient `a_{n+1}` is rational and small enough
//! for the root counts of every `f_n - alpha_j` in the disc to survive.

pub mod certificate;
pub mod construct;
pub mod eval;
pub mod state;
pub mod tail;
pub mod verify;

pub use certificate::{AlphaBound, PFingerprint, StepCertificate};
pub use construct::step;
pub use eval::{evaluate, Evaluation};
pub use state::{ConstructionState, Factor, Factored, LedgerEntry, StepRecord};
pub use tail::{tail_bound, TailBound};
pub use verify::{verify_run, Check, Report};

use crate::{Error, Result};

/// A run that stopped early: everything completed before the failing step.
#[derive(Debug)]
pub struct RunFailure {
    pub state: ConstructionState,
    pub certificates: Vec<StepCertificate>,
    pub error: Error,
}

/// Steps `1 .. N`, building `f_2 .. f_{N+1}`.
pub fn run(steps: usize, seed: u64) -> std::result::Result<(ConstructionState, Vec<StepCertificate>), Box<RunFailure>> {
    let state = ConstructionState::init(seed).map_err(|error| {
        Box::new(RunFailure {
            state: ConstructionState {
                seed,
                alphas: vec![],
                steps: vec![],
                f: crate::poly::AlgPoly::monomial(1),
                ledger: vec![],
            },
            certificates: vec![],
            error,
        })
    })?;
    resume(state, vec![], steps)
}

/// Continue `state` until `N` steps are complete.
pub fn resume(
    mut state: ConstructionState,
    mut certificates: Vec<StepCertificate>,
    steps: usize,
) -> std::result::Result<(ConstructionState, Vec<StepCertificate>), Box<RunFailure>> {
    let fail = |state, certificates, error| Box::new(RunFailure { state, certificates, error });
    if steps == 0 {
        return Err(fail(state, certificates, Error::InvalidArgument("N >= 1 required".into())));
    }
    if state.seed == 0 {
        return Err(fail(state, certificates, Error::InvalidArgument("branch seed must be >= 1".into())));
    }
    while state.steps.len() < steps {
        let n = state.n();
        match step(&state) {
            Ok((next, cert)) => {
                state = next;
                certificates.push(cert);
            }
            Err(e) => return Err(fail(state, certificates, e.at_step(n))),
        }
    }
    Ok((state, certificates))
}

/// Convenience wrapper returning only the error of a failed run.
pub fn run_checked(steps: usize, seed: u64) -> Result<(ConstructionState, Vec<StepCertificate>)> {
    run(steps, seed).map_err(|f| f.error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_steps_are_rejected_with_the_state_kept() {
        let s = ConstructionState::init(1).unwrap();
        let f = resume(s, vec![], 0).unwrap_err();
        assert_eq!(f.error.code(), "invalid_argument");
        assert_eq!(f.state.n(), 1);
    }

    #[test]
    fn one_step_then_resume() {
        let (s, c) = run(1, 1).unwrap();
        assert_eq!(c.len(), 1);
        let (again, c2) = resume(s.clone(), c, 1).unwrap();
        assert_eq!(again.n(), 2);
        assert_eq!(c2.len(), 1);
    }
}
