//! Re-verification of a finished run from its recorded data.

use crate::algebraic::enumerate::enumerate_alphas;
use crate::algebraic::AlgebraicNumber;
use crate::engine::certificate::StepCertificate;
use crate::engine::construct::{compute_epsilon, condition_iv_bound, counts, shifted, update_shape};
use crate::engine::state::{update_form, ConstructionState, Factored};
use crate::exact::{Ball, Mag, Rational};
use crate::persist::poly_digest;
use crate::poly::circle::{certify_max, certify_min};
use crate::poly::isolate::discs_disjoint;
use crate::poly::{AlgPoly, PolyForm};

/// One named check.
#[derive(Clone, Debug)]
pub struct Check {
    /// The step `n -> n+1`, or 0 for whole-run checks.
    pub step: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn push(&mut self, step: usize, name: &'static str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            step,
            name,
            pass,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

fn same(a: &AlgebraicNumber, b: &AlgebraicNumber) -> bool {
    a.eq_exact(b)
}

fn same_poly(a: &AlgPoly, b: &AlgPoly) -> bool {
    a.deg() == b.deg() && a.sub(b).is_zero()
}

/// Everything about step `n` that can be checked from the run data.
struct StepData<'a> {
    n: usize,
    cert: &'a StepCertificate,
    f: AlgPoly,
    f_next: AlgPoly,
    f_form: PolyForm,
    next_form: PolyForm,
    p: AlgPoly,
    p_prev: AlgPoly,
    factored: &'a Factored,
    alphas: Vec<AlgebraicNumber>,
}

/// Checks over a whole run: the alphas, the final polynomial and every step.
pub fn verify_run(state: &ConstructionState, certs: &[StepCertificate]) -> Report {
    let mut report = Report::default();
    let steps = state.steps.len();
    let shape_ok = certs.len() == steps && certs.iter().enumerate().all(|(k, c)| c.n == k + 1);
    report.push(0, "certificates", shape_ok, format!("{} steps, {} certificates", steps, certs.len()));
    if !shape_ok {
        return report;
    }

    let needed = 3 * steps.max(1) + 1;
    let alphas_ok = state.alphas.len() >= needed
        && enumerate_alphas(steps.max(1))
            .map(|fresh| fresh.iter().zip(&state.alphas).all(|(a, b)| same(&a.value, &b.value)))
            .unwrap_or(false);
    report.push(0, "alpha enumeration", alphas_ok, format!("{} alphas", state.alphas.len()));

    let n_final = state.n();
    let dense = state.f_dense(n_final);
    report.push(0, "update identity", same_poly(&dense, &state.f), "f_N = z + sum eps_m z^m P_m");
    let prefix = state.prefix();
    let prefix_ok = state.f.coeff(0).is_zero()
        && (1..=n_final).all(|k| state.f.coeff(k).as_rational().as_ref() == Some(&prefix[k - 1]));
    report.push(0, "rational prefix", prefix_ok, format!("a_1..a_{n_final}"));
    let real = state.f.coeffs().iter().all(|c| c.sub(&c.conj()).is_zero());
    report.push(0, "conjugation symmetry", real, "coefficients are real");

    let mut f = AlgPoly::monomial(1);
    let mut p_prev = AlgPoly::one();
    for (k, cert) in certs.iter().enumerate() {
        let n = k + 1;
        if state.alphas.len() < 3 * n + 1 {
            break;
        }
        let p = state.steps[k].p.expand();
        let f_next = state.f_dense(n + 1);
        let data = StepData {
            n,
            cert,
            f_form: state.f_form(n),
            next_form: state.f_form(n + 1),
            f: f.clone(),
            f_next: f_next.clone(),
            p: p.clone(),
            p_prev: p_prev.clone(),
            factored: &state.steps[k].p,
            alphas: state.alphas[..3 * n + 1].iter().map(|a| a.value.clone()).collect(),
        };
        report.extend(verify_step_conditions(state, &data));
        report.extend(verify_rouche(&data));
        report.extend(verify_preimage_stability(state, &data));
        report.extend(verify_value_stability(&data));
        f = f_next;
        p_prev = p;
    }
    report
}

fn verify_step_conditions(state: &ConstructionState, d: &StepData) -> Report {
    let mut r = Report::default();
    let (n, cert) = (d.n, d.cert);
    let rec = &state.steps[n - 1];

    let radius_ok = rec.radius == cert.radius
        && cert.radius > Rational::from(n as i64 + 1)
        && cert.radius < Rational::from(n as i64 + 2);
    r.push(n, "radius", radius_ok, format!("r = {}", cert.radius));

    let fp = &cert.p;
    let length = d.p.length_upper_bound();
    let inline_ok = fp.coeffs.as_ref().is_none_or(|c| same_poly(c, &d.p));
    let fp_ok = fp.degree == d.p.deg() && fp.sha256 == poly_digest(&d.p) && inline_ok && fp.length >= length;
    r.push(n, "P fingerprint", fp_ok, format!("deg P = {}, L <= {}", d.p.deg(), fp.length));

    let deg = d.f_next.deg();
    r.push(n, "(i) degree", deg > n + 1, format!("deg f_{} = {deg}", n + 1));

    let divides = AlgPoly::divides(&d.p_prev, &d.p).ok().flatten().is_some();
    let p0 = d.p.coeff(0);
    r.push(n, "(ii) divisibility", divides && !p0.is_zero(), "P_n | P_{n+1}, P_{n+1}(0) != 0");

    let eps_ok = same(&cert.epsilon, &rec.epsilon) && !cert.epsilon.is_zero();
    let formula_ok = compute_epsilon(&cert.c, &cert.coefficient, &p0)
        .map(|e| same(&e, &cert.epsilon))
        .unwrap_or(false)
        && same(&cert.c, &d.f.coeff(n + 1));
    r.push(n, "(iii) epsilon", eps_ok && formula_ok, "eps = (p/q - c) / P(0)");

    let bound = condition_iv_bound(&fp.length, n, fp.degree);
    let eps_hi = cert.epsilon.abs_upper();
    let iv_ok = fp_ok && cert.condition_iv_margin.is_positive() && &eps_hi + &cert.condition_iv_margin <= bound;
    r.push(n, "(iv) epsilon bound", iv_ok, format!("margin {}", cert.condition_iv_margin));

    let a = d.f_next.coeff(n + 1).as_rational();
    let prefix_ok = a.as_ref() == Some(&cert.coefficient)
        && rec.coefficient == cert.coefficient
        && (0..=n).all(|k| same(&d.f.coeff(k), &d.f_next.coeff(k)))
        && (1..=n + 1).all(|k| d.f_next.coeff(k).as_rational().is_some());
    r.push(n, "(v) rational coefficients", prefix_ok, format!("a_{} = {}", n + 1, cert.coefficient));
    r
}

fn verify_rouche(d: &StepData) -> Report {
    let mut r = Report::default();
    let (n, cert) = (d.n, d.cert);
    let radius = &cert.radius;
    let eps_hi = cert.epsilon.abs_upper();
    let shaped = cert.alphas.len() == d.alphas.len() && cert.rouche_margins.len() == d.alphas.len();
    if !shaped {
        r.push(n, "Rouche margins", false, "certificate lists the wrong number of alphas");
        return r;
    }
    let shape = update_shape(n, d.factored);
    let max_ok = certify_max(&|z: &Ball, prec| shape.eval_ball(z, prec), radius, &cert.max_bound).unwrap_or(false);
    let mut worst: Option<Rational> = None;
    let mut ok = max_ok;
    for ((a, bound), margin) in d.alphas.iter().zip(&cert.alphas).zip(&cert.rouche_margins) {
        let g = shifted(&d.f_form, a);
        let min_ok = certify_min(&g, radius, &bound.min_bound).unwrap_or(false);
        let margin_ok = margin.is_positive() && &bound.min_bound - &(&eps_hi * &cert.max_bound) >= *margin;
        ok &= min_ok && margin_ok;
        if worst.as_ref().is_none_or(|w| margin < w) {
            worst = Some(margin.clone());
        }
    }
    let detail = match worst {
        Some(w) => format!("min margin {w}"),
        None => "no alphas".into(),
    };
    r.push(n, "Rouche margins", ok, detail);
    r
}

fn verify_preimage_stability(state: &ConstructionState, d: &StepData) -> Report {
    let mut r = Report::default();
    let (n, cert) = (d.n, d.cert);
    let radius = &cert.radius;
    let before = counts(&d.f_form, &d.alphas, radius);
    let after = counts(&d.next_form, &d.alphas, radius);
    let recorded_b: Vec<usize> = cert.alphas.iter().map(|a| a.count_before).collect();
    let recorded_a: Vec<usize> = cert.alphas.iter().map(|a| a.count_after).collect();
    let counts_ok = match (&before, &after) {
        (Ok(b), Ok(a)) => *b == recorded_b && *a == recorded_a && a == b,
        _ => false,
    };
    r.push(n, "root-count conservation", counts_ok, format!("counts {recorded_b:?}"));

    // Ledger of this step: exact preimages inside the disc, accounting for every root.
    let mut ledger_ok = true;
    let mut totals = vec![0usize; d.alphas.len()];
    for e in state.ledger.iter().filter(|e| e.step == n) {
        if e.alpha == 0 || e.alpha > d.alphas.len() {
            ledger_ok = false;
            continue;
        }
        let g = d.f.sub(&AlgPoly::constant(d.alphas[e.alpha - 1].clone()));
        let root = g.eval(&e.point).is_zero();
        let inside = e.point.abs_upper() < *radius;
        ledger_ok &= root && inside && g.multiplicity_at(&e.point) == e.multiplicity;
        totals[e.alpha - 1] += e.multiplicity;
    }
    ledger_ok &= before.as_ref().is_ok_and(|b| *b == totals);
    r.push(n, "preimage ledger", ledger_ok, format!("{} points", state.ledger.iter().filter(|e| e.step == n).count()));

    // Every earlier preimage stays one.
    let update = update_form(&state.steps[n - 1]);
    let stable = state.ledger.iter().filter(|e| e.step <= n).all(|e| update.eval(&e.point).is_zero());
    r.push(n, "preimage stability", stable, "f_{n+1}(y) = f_n(y) on the ledger");
    r
}

/// Ball of `f(a)` of radius at most `2^-65`.
fn tight_value(f: &PolyForm, a: &AlgebraicNumber) -> Option<Ball> {
    let target = Mag::pow2(-65);
    let mut prec = 128u32;
    for _ in 0..8 {
        let v = f.eval_ball(&a.ball(prec as i64), prec);
        if v.rad <= target {
            return Some(v);
        }
        prec *= 2;
    }
    None
}

fn verify_value_stability(d: &StepData) -> Report {
    let mut r = Report::default();
    let n = d.n;
    let update = PolyForm::Scaled(d.cert.epsilon.clone(), Box::new(update_shape(n, d.factored)));
    let exact = d.alphas.iter().all(|a| update.eval(a).is_zero());
    r.push(n, "value stability", exact, "f_{n+1}(alpha_j) = f_n(alpha_j)");
    let boxes = d.alphas.iter().all(|a| match (tight_value(&d.f_form, a), tight_value(&d.next_form, a)) {
        (Some(x), Some(y)) => !discs_disjoint(&x, &y),
        _ => false,
    });
    r.push(n, "value boxes", boxes, "enclosures of width 2^-64 overlap");
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_state_verifies() {
        let s = ConstructionState::init(1).unwrap();
        let r = verify_run(&s, &[]);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.checks.iter().any(|c| c.name == "alpha enumeration"));
    }

    #[test]
    fn missing_certificates_fail() {
        let mut s = ConstructionState::init(1).unwrap();
        s.steps.push(crate::engine::StepRecord {
            n: 1,
            radius: Rational::ratio(5, 2),
            p: Factored::default(),
            epsilon: AlgebraicNumber::one(),
            coefficient: Rational::one(),
        });
        let r = verify_run(&s, &[]);
        assert!(!r.passed());
        assert_eq!(r.failures().next().unwrap().name, "certificates");
    }
}
