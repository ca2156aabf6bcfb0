//! One inductive step `f_n -> f_{n+1}`.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::algebraic::enumerate::{enumerate_alphas, Alpha};
use crate::algebraic::leaf::register;
use crate::algebraic::AlgebraicNumber;
use crate::engine::certificate::{AlphaBound, PFingerprint, StepCertificate};
use crate::engine::state::{update_form, ConstructionState, Factor, Factored, LedgerEntry, StepRecord};
use crate::exact::{Ball, Rational};
use crate::par;
use crate::poly::circle::{circle_max, circle_min};
use crate::poly::count::count_roots_in_disk;
use crate::poly::isolate::isolate_all;
use crate::poly::{inside_disk, norm_surrogate, AlgPoly, PolyForm, QPoly};
use crate::{Error, Result};

/// Relative tolerance of the circle minima and maxima.
const CIRCLE_GAP: (i64, i64) = (1, 64);
/// Radius candidates tried before giving up on one that keeps rational factors whole.
const PREFER_WHOLE: usize = 16;
/// Dyadic refinement depth of the radius candidates.
const MAX_RADIUS_DEPTH: u32 = 10;

/// Roots of `f_n - alpha_j` for a set of `j`, through one rational polynomial.
#[derive(Debug)]
pub(crate) struct Source {
    /// 1-based alpha indices.
    pub members: Vec<usize>,
    /// `prod_j (f_n - alpha_j)` when it is rational.
    pub composed: Option<QPoly>,
    /// Square-free rational polynomial whose roots include every preimage.
    pub sqf: QPoly,
    pub discs: Vec<Ball>,
}

/// `alpha_j` grouped by defining polynomial; a group that holds every root of
/// its polynomial gives the rational `prod_j (f - alpha_j) = poly(f) / lead`.
pub(crate) fn sources(f: &AlgPoly, alphas: &[Alpha]) -> Result<Vec<Source>> {
    let mut groups: Vec<(Vec<BigInt>, Vec<usize>)> = vec![];
    for (k, a) in alphas.iter().enumerate() {
        match groups.iter_mut().find(|(p, _)| *p == a.poly) {
            Some((_, m)) => m.push(k + 1),
            None => groups.push((a.poly.clone(), vec![k + 1])),
        }
    }
    let mut jobs: Vec<(Vec<usize>, Option<QPoly>)> = vec![];
    for (poly, members) in groups {
        let complete = members.len() == poly.len() - 1;
        match (f.as_qpoly(), complete) {
            (Some(fq), true) => {
                let p = QPoly::from_ints(&poly);
                let composed = p.compose(fq).scale(&p.lead().recip()?);
                jobs.push((members, Some(composed)));
            }
            _ => jobs.extend(members.into_iter().map(|j| (vec![j], None))),
        }
    }
    par::try_map(&jobs, |(members, composed)| {
        let sqf = match composed {
            Some(c) => c.squarefree(),
            None => {
                let g = f.sub(&AlgPoly::constant(alphas[members[0] - 1].value.clone()));
                norm_surrogate(&g)?.squarefree()
            }
        };
        let discs = isolate_all(&sqf)?;
        Ok(Source {
            members: members.clone(),
            composed: composed.clone(),
            sqf,
            discs,
        })
    })
}

/// `n + 3/2`, then `n + 1 + k/2^d` for odd `k`, `d = 2, 3, ...`.
fn radius_candidates(n: usize) -> impl Iterator<Item = Rational> {
    let base = Rational::from(n as i64 + 1);
    let first = std::iter::once(&base + &Rational::ratio(1, 2));
    let rest = (2..=MAX_RADIUS_DEPTH).flat_map(move |d| {
        let base = base.clone();
        (1..1i64 << d).step_by(2).map(move |k| &base + &Rational::ratio(k, 1 << d))
    });
    first.chain(rest)
}

/// Each disc refined to lie strictly inside (`Some`) or outside (`None`) `|z| = r`.
type Placement = Vec<Vec<Option<Ball>>>;

fn place(sources: &[Source], r: &Rational) -> Result<Placement> {
    sources
        .iter()
        .map(|s| s.discs.iter().map(|d| inside_disk(&s.sqf, d.clone(), r)).collect())
        .collect()
}

/// Whether `d` is the disc of the root `0`.
fn is_origin(s: &Source, d: &Ball) -> bool {
    s.sqf.coeff(0).is_zero() && d.to_box().contains_zero()
}

/// Whether a rational group has nonzero roots on both sides of the circle.
fn splits(sources: &[Source], placement: &Placement) -> bool {
    sources.iter().zip(placement).any(|(s, p)| {
        if s.composed.is_none() {
            return false;
        }
        let nonzero: Vec<bool> = s
            .discs
            .iter()
            .zip(p)
            .filter(|(d, _)| !is_origin(s, d))
            .map(|(_, q)| q.is_some())
            .collect();
        nonzero.iter().any(|&x| x) && nonzero.iter().any(|&x| !x)
    })
}

/// `r_{n+1}` in `(n+1, n+2)` with no preimage on `|z| = r`.
pub(crate) fn choose_radius(n: usize, sources: &[Source]) -> Result<(Rational, Placement)> {
    let mut fallback = None;
    for (k, r) in radius_candidates(n).enumerate() {
        let placement = match place(sources, &r) {
            Ok(p) => p,
            Err(Error::RootOnCircle) => continue,
            Err(e) => return Err(e),
        };
        if !splits(sources, &placement) {
            return Ok((r, placement));
        }
        log::debug!("radius {r} splits a rational preimage group");
        if fallback.is_none() {
            fallback = Some((r, placement));
        }
        if k + 1 >= PREFER_WHOLE {
            break;
        }
    }
    fallback.ok_or_else(|| Error::limit("choose_radius", "no admissible radius candidate"))
}

/// A preimage `y` with `f_n(y) = alpha_j`.
#[derive(Debug, Clone)]
pub(crate) struct Preimage {
    pub alpha: usize,
    pub point: AlgebraicNumber,
    pub multiplicity: usize,
}

/// Preimages inside the circle, per source.
pub(crate) fn collect_preimages(
    f: &AlgPoly,
    alphas: &[Alpha],
    sources: &[Source],
    placement: &Placement,
) -> Result<Vec<Vec<Preimage>>> {
    let jobs: Vec<(&Source, &Vec<Option<Ball>>)> = sources.iter().zip(placement).collect();
    par::try_map(&jobs, |(s, p)| {
        let decomposition = s.composed.as_ref().map(QPoly::squarefree_decomposition);
        let mut out = vec![];
        for d in p.iter().flatten() {
            let y = AlgebraicNumber::from_rooted(register(&s.sqf, &d.to_box(), Some(d.clone()))?);
            let fy = f.eval(&y);
            let alpha = if s.members.len() == 1 {
                s.members[0]
            } else {
                *s.members
                    .iter()
                    .find(|&&j| fy.sub(&alphas[j - 1].value).is_zero())
                    .ok_or_else(|| Error::Internal("preimage matches no alpha of its group".into()))?
            };
            let g = f.sub(&AlgPoly::constant(alphas[alpha - 1].value.clone()));
            let multiplicity = match &decomposition {
                Some(dec) => dec
                    .iter()
                    .find(|(q, _)| AlgPoly::from_qpoly(q.clone()).eval(&y).is_zero())
                    .map(|(_, k)| *k as usize)
                    .ok_or_else(|| Error::Internal("preimage outside the decomposition".into()))?,
                None => {
                    if !g.eval(&y).is_zero() {
                        continue;
                    }
                    g.multiplicity_at(&y)
                }
            };
            out.push(Preimage { alpha, point: y, multiplicity });
        }
        Ok(out)
    })
}

fn same_poly(a: &AlgPoly, b: &AlgPoly) -> bool {
    match (a.as_qpoly(), b.as_qpoly()) {
        (Some(x), Some(y)) => x == y,
        (None, None) => a.deg() == b.deg() && a.sub(b).is_zero(),
        _ => false,
    }
}

fn push_factor(fs: &mut Vec<Factor>, poly: AlgPoly, exp: u32) {
    if poly.deg() == 0 {
        return;
    }
    match fs.iter_mut().find(|f| same_poly(&f.poly, &poly)) {
        Some(f) => f.exp += exp,
        None => fs.push(Factor { poly, exp }),
    }
}

/// `P_{n+1} = P_n (z - a_{3n-1})(z - a_{3n})(z - a_{3n+1}) prod (z - y)^{deg f_n}`.
pub(crate) fn build_p_next(
    state: &ConstructionState,
    sources: &[Source],
    placement: &Placement,
    preimages: &[Vec<Preimage>],
) -> Result<Factored> {
    let n = state.n();
    let mut fs = state.p(n).0;
    let a = &state.alphas;
    let pair = AlgPoly::linear(&a[3 * n - 2].value).mul(&AlgPoly::linear(&a[3 * n - 1].value));
    push_factor(&mut fs, pair, 1);
    push_factor(&mut fs, AlgPoly::linear(&a[3 * n].value), 1);
    let e = state.f.deg() as u32;
    for ((s, p), ys) in sources.iter().zip(placement).zip(preimages) {
        let nonzero: Vec<&Preimage> = ys.iter().filter(|y| !y.point.is_zero()).collect();
        let whole = s.composed.is_some() && p.iter().all(Option::is_some);
        let factor = if whole {
            let q = s.sqf.monic();
            let q = if q.coeff(0).is_zero() { q.div_exact(&QPoly::x())?.expect("root at 0") } else { q };
            AlgPoly::from_qpoly(q)
        } else {
            nonzero.iter().fold(AlgPoly::one(), |acc, y| acc.mul(&AlgPoly::linear(&y.point)))
        };
        push_factor(&mut fs, factor, e);
    }
    let p = Factored(fs);
    if p.at_zero().is_zero() {
        return Err(Error::Internal("P(0) vanishes".into()));
    }
    Ok(p)
}

fn gap() -> Rational {
    Rational::ratio(CIRCLE_GAP.0, CIRCLE_GAP.1)
}

/// `f(z) - a` on balls.
pub(crate) fn shifted<'f>(f: &'f PolyForm, a: &AlgebraicNumber) -> impl Fn(&Ball, u32) -> Ball + Sync + 'f {
    let a = a.clone();
    move |z: &Ball, prec| f.eval_ball(z, prec).sub(&a.ball(prec as i64), prec)
}

/// `z^{n+1} P(z)` in factored form.
pub(crate) fn update_shape(n: usize, p: &Factored) -> PolyForm {
    let mut v = vec![(PolyForm::dense(AlgPoly::monomial(1)), n as u32 + 1)];
    if let PolyForm::Product(fs) = p.form() {
        v.extend(fs);
    }
    PolyForm::Product(v)
}

/// `m_i <= min |f_n - alpha_i|` and `M >= max |z^{n+1} P|` on `|z| = r`.
pub(crate) fn bound_circle_quantities(
    f: &PolyForm,
    alphas: &[AlgebraicNumber],
    n: usize,
    p: &Factored,
    r: &Rational,
) -> Result<(Vec<Rational>, Rational)> {
    let mins = par::try_map(alphas, |a| circle_min(&shifted(f, a), r, &gap()))?;
    let shape = update_shape(n, p);
    let max = circle_max(&|z: &Ball, prec| shape.eval_ball(z, prec), r, &gap())?;
    Ok((mins, max))
}

/// Simplest rational (least denominator) in the open interval `(a, b)`.
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    debug_assert!(a < b);
    let fl = Rational::from_integer(a.floor());
    let next = &fl + &Rational::one();
    if &next < b {
        // Several integers: the one of least modulus.
        if a.is_negative() && b.is_positive() {
            return Rational::zero();
        }
        return if b.signum() <= 0 { Rational::from_integer(b.ceil()) - Rational::one() } else { next };
    }
    if &fl == a {
        // (fl, b) with b <= fl + 1.
        let k = (b - &fl).recip().expect("b > fl").floor() + 1;
        return fl + Rational::from_integer(k).recip().expect("k > 0");
    }
    let inner = simplest_between(&(b - &fl).recip().expect("b > fl"), &(a - &fl).recip().expect("a > fl"));
    fl + inner.recip().expect("inner > 0")
}

/// The `k`-th rational (1-based) of `(c - t, c + t) \ {c}` in the order:
/// increasing denominator, then increasing `|p|`, then `+` before `-`.
pub fn choose_rational(c: &AlgebraicNumber, t: &Rational, k: u64) -> Result<Rational> {
    if k == 0 || !t.is_positive() {
        return Err(Error::InvalidArgument("need k >= 1 and a positive threshold".into()));
    }
    let (lo, hi) = match c.as_rational() {
        Some(q) => (&q - t, &q + t),
        None => {
            let bx = c.refine(&(t / &Rational::from(4)));
            (bx.re.hi() - t, bx.re.lo() + t)
        }
    };
    // The simplest rational of an open interval is unique, so removing it
    // splits the search into two smaller open intervals.
    let mut open: Vec<(Rational, Rational)> = match c.as_rational() {
        Some(q) => vec![(lo, q.clone()), (q, hi)],
        None => vec![(lo, hi)],
    };
    let key = |x: &Rational| (x.denom().clone(), x.numer().abs(), x.is_negative());
    let mut best: Vec<Rational> = open.iter().map(|(a, b)| simplest_between(a, b)).collect();
    for round in 1..=k {
        let i = (0..best.len()).min_by_key(|&i| key(&best[i])).expect("nonempty");
        let x = best.swap_remove(i);
        let (a, b) = open.swap_remove(i);
        if round == k {
            return Ok(x);
        }
        best.push(simplest_between(&a, &x));
        open.push((a, x.clone()));
        best.push(simplest_between(&x, &b));
        open.push((x, b));
    }
    unreachable!("k >= 1")
}

/// `eps = (p/q - c) / P(0)`.
pub fn compute_epsilon(c: &AlgebraicNumber, pq: &Rational, p0: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    AlgebraicNumber::from_rational(pq.clone()).sub(c).div(p0)
}

/// `1 / (L * m^{m + deg P})`, the bound of condition (iv) at `m = n + 1`.
pub fn condition_iv_bound(length: &Rational, n: usize, degree: usize) -> Rational {
    let m = Rational::from(n as i64 + 1);
    (length * &m.pow((n + 1 + degree) as u32)).recip().expect("positive")
}

/// Winding counts of `f - a` in `|z| < r` for each `a`.
pub(crate) fn counts(f: &PolyForm, alphas: &[AlgebraicNumber], r: &Rational) -> Result<Vec<usize>> {
    par::try_map(alphas, |a| count_roots_in_disk(&shifted(f, a), r, 64))
}

/// Perform step `n -> n+1`; the input state is left untouched.
pub fn step(state: &ConstructionState) -> Result<(ConstructionState, StepCertificate)> {
    let n = state.n();
    let mut next = state.clone();
    if next.alphas.len() < 3 * n + 1 {
        let fresh = enumerate_alphas(n)?;
        for (a, b) in next.alphas.iter().zip(&fresh) {
            if !a.value.eq_exact(&b.value) {
                return Err(Error::Internal("stored alphas disagree with the enumeration".into()));
            }
        }
        next.alphas = fresh;
    }
    let alphas = &next.alphas[..3 * n + 1];
    let values: Vec<AlgebraicNumber> = alphas.iter().map(|a| a.value.clone()).collect();

    let srcs = sources(&state.f, alphas)?;
    let (r, placement) = choose_radius(n, &srcs)?;
    log::info!("step {n}: radius {r}");
    let pre = collect_preimages(&state.f, alphas, &srcs, &placement)?;
    let p = build_p_next(&next, &srcs, &placement, &pre)?;
    let p_dense = p.expand();
    let degree = p_dense.deg();
    log::info!("step {n}: deg P = {degree}");

    let f_form = state.f_form(n);
    let (mins, max) = bound_circle_quantities(&f_form, &values, n, &p, &r)?;
    let min_m = mins.iter().min().expect("alpha_1 exists").clone();

    let length = p_dense.length_upper_bound();
    let bound_iv = condition_iv_bound(&length, n, degree);
    let p0 = p.at_zero();
    let p0_lo = p0.abs_lower()?;
    let c = state.f.coeff(n + 1);
    let mut threshold = (&p0_lo * &bound_iv).min(&p0_lo * &min_m / &max);

    let mut attempt = 0;
    let (pq, eps, eps_hi) = loop {
        let pq = choose_rational(&c, &threshold, state.seed)?;
        let eps = compute_epsilon(&c, &pq, &p0)?;
        let eps_hi = eps.abs_upper();
        if eps_hi < bound_iv && &eps_hi * &max < min_m {
            break (pq, eps, eps_hi);
        }
        attempt += 1;
        if attempt > 16 {
            return Err(Error::limit("epsilon", "cannot certify the epsilon bounds"));
        }
        threshold = threshold / Rational::from(2);
    };
    log::info!("step {n}: a_{} = {pq}", n + 1);

    let record = StepRecord {
        n,
        radius: r.clone(),
        p: p.clone(),
        epsilon: eps.clone(),
        coefficient: pq.clone(),
    };
    let update = update_form(&record);
    let f_next = state.f.add(&p_dense.shift(n + 1).scale(&eps));
    if f_next.coeff(n + 1).as_rational().as_ref() != Some(&pq) {
        return Err(Error::Internal("new coefficient differs from p/q".into()));
    }

    let next_form = PolyForm::Sum(vec![f_form.clone(), update.clone()]);
    let before = counts(&f_form, &values, &r)?;
    let after = counts(&next_form, &values, &r)?;
    if before != after {
        return Err(Error::Internal(format!("root counts changed: {before:?} -> {after:?}")));
    }

    let mut ledger = vec![];
    for ys in &pre {
        for y in ys {
            ledger.push(LedgerEntry {
                step: n,
                alpha: y.alpha,
                point: y.point.clone(),
                multiplicity: y.multiplicity,
            });
        }
    }
    for (j, count) in before.iter().enumerate() {
        let total: usize = ledger.iter().filter(|e| e.alpha == j + 1).map(|e| e.multiplicity).sum();
        if total != *count {
            return Err(Error::Internal(format!("alpha_{}: {total} ledger roots, winding count {count}", j + 1)));
        }
    }
    next.ledger.extend(ledger);
    for v in values.iter().chain(next.ledger.iter().map(|e| &e.point)) {
        if !update.eval(v).is_zero() {
            return Err(Error::Internal("update term does not vanish at a recorded point".into()));
        }
    }

    let margins: Vec<Rational> = mins.iter().map(|m| m - &(&eps_hi * &max)).collect();
    let cert = StepCertificate {
        n,
        radius: r,
        alphas: mins
            .iter()
            .zip(before.iter().zip(&after))
            .enumerate()
            .map(|(k, (m, (b, a)))| AlphaBound {
                index: k + 1,
                min_bound: m.clone(),
                count_before: *b,
                count_after: *a,
            })
            .collect(),
        p: PFingerprint::of(&p_dense, length)?,
        max_bound: max,
        c,
        threshold,
        coefficient: pq,
        epsilon: eps,
        condition_iv_margin: &bound_iv - &eps_hi,
        rouche_margins: margins,
    };
    next.steps.push(record);
    next.f = f_next;
    Ok((next, cert))
}
