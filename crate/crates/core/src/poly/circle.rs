//! Certified bounds for `min |f|` and `max |f|` on a circle `|z| = r`.
//!
//! The circle is covered by arcs between rational Pythagorean points; each
//! arc lies in the disc on its chord, so the image ball of that disc bounds
//! `|f|` on the arc. Arcs whose bound is still far from the best sampled
//! value are bisected; each round evaluates its arcs through [`par::map`],
//! so the result does not depend on the thread count.

use crate::config::limits;
use crate::exact::{Ball, Dy, Mag, Rational};
use crate::par;
use crate::poly::count::{CircleArc, Piece};
use crate::poly::AlgPoly;
use crate::{Error, Result};

const BASE_PREC: u32 = 64;
const INITIAL_ARCS: u32 = 8;
const OUT_BITS: u32 = 40;

struct Arc {
    arc: CircleArc,
    depth: u32,
    /// Lower (for minima) or upper (for maxima) bound of `|f|` on the arc.
    bound: Dy,
}

fn point_ball(p: &(Rational, Rational), prec: u32) -> Ball {
    Ball::from_rational(&p.0, &p.1, prec)
}

fn check_radius(r: &Rational) -> Result<()> {
    if !r.is_positive() {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    Ok(())
}

/// Bound `|f|` on each arc; `lower` selects the lower bound.
fn evaluate<F>(arcs: Vec<(CircleArc, u32)>, f: &F, lower: bool) -> Vec<(Arc, Dy)>
where
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    par::map(&arcs, |(arc, depth)| {
        let prec = BASE_PREC + 2 * depth;
        let img = f(&arc.ball(prec), prec);
        let mid = f(&point_ball(&arc.midpoint(), prec), prec);
        let (bound, sample) = if lower {
            (img.abs_lower(prec), mid.abs_upper(prec))
        } else {
            (img.abs_upper(prec), mid.abs_lower(prec))
        };
        (
            Arc {
                arc: arc.clone(),
                depth: *depth,
                bound,
            },
            sample,
        )
    })
}

fn split_all(active: Vec<Arc>) -> Vec<(CircleArc, u32)> {
    let mut out = Vec::with_capacity(active.len() * 2);
    for a in active {
        let (x, y) = a.arc.split();
        out.push((x, a.depth + 1));
        out.push((y, a.depth + 1));
    }
    out
}

/// Positive `m <= min_{|z|=r} |f(z)|`, within relative `gap` of the sampled minimum.
pub fn circle_min<F>(f: &F, r: &Rational, gap: &Rational) -> Result<Rational>
where
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    check_radius(r)?;
    let lim = limits();
    let keep = Dy::from_rational_floor(&(Rational::one() - gap), 32);
    let mut done: Vec<Arc> = vec![];
    let mut pending: Vec<(CircleArc, u32)> = CircleArc::cover(r, INITIAL_ARCS).into_iter().map(|a| (a, 0)).collect();
    let mut best: Option<Dy> = None;
    let mut evaluated = 0usize;
    while !pending.is_empty() {
        evaluated += pending.len();
        if evaluated > lim.max_pieces {
            return Err(Error::limit("circle_min", format!("more than {} arcs", lim.max_pieces)));
        }
        let results = evaluate(pending, f, true);
        for (_, s) in &results {
            if best.as_ref().is_none_or(|b| s < b) {
                best = Some(s.clone());
            }
        }
        let threshold = best.as_ref().expect("sampled").mul(&keep);
        let mut active = vec![];
        for (a, _) in results {
            if a.bound >= threshold && a.bound.signum() > 0 {
                done.push(a);
            } else if a.depth >= lim.max_refine + 8 {
                if a.bound.signum() > 0 {
                    done.push(a);
                } else {
                    return Err(Error::RootOnCircle);
                }
            } else {
                active.push(a);
            }
        }
        pending = split_all(active);
    }
    let lo = done.iter().map(|a| a.bound.clone()).min().expect("nonempty cover");
    Ok(Mag::from_dy_lower(&lo).to_rational().round_down_sig(OUT_BITS))
}

/// `M >= max_{|z|=r} |f(z)|`, within relative `gap` of the sampled maximum.
pub fn circle_max<F>(f: &F, r: &Rational, gap: &Rational) -> Result<Rational>
where
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    check_radius(r)?;
    let lim = limits();
    let keep = Dy::from_rational_ceil(&(Rational::one() + gap), 32);
    let mut done: Vec<Arc> = vec![];
    let mut pending: Vec<(CircleArc, u32)> = CircleArc::cover(r, INITIAL_ARCS).into_iter().map(|a| (a, 0)).collect();
    let mut best = Dy::zero();
    let mut evaluated = 0usize;
    while !pending.is_empty() {
        evaluated += pending.len();
        if evaluated > lim.max_pieces {
            return Err(Error::limit("circle_max", format!("more than {} arcs", lim.max_pieces)));
        }
        let results = evaluate(pending, f, false);
        for (_, s) in &results {
            if *s > best {
                best = s.clone();
            }
        }
        let threshold = best.mul(&keep);
        let mut active = vec![];
        for (a, _) in results {
            if a.bound <= threshold || a.depth >= lim.max_refine + 8 {
                done.push(a);
            } else {
                active.push(a);
            }
        }
        pending = split_all(active);
    }
    let hi = done.iter().map(|a| a.bound.clone()).max().expect("nonempty cover");
    Ok(Mag::from_dy_upper(&hi).to_rational().round_up_sig(OUT_BITS))
}

/// Whether `|f| >= m` on the whole circle can be certified by subdivision.
pub fn certify_min<F>(f: &F, r: &Rational, m: &Rational) -> Result<bool>
where
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    certify(f, r, m, true)
}

/// Whether `|f| <= m` on the whole circle can be certified by subdivision.
pub fn certify_max<F>(f: &F, r: &Rational, m: &Rational) -> Result<bool>
where
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    certify(f, r, m, false)
}

fn certify<F>(f: &F, r: &Rational, m: &Rational, lower: bool) -> Result<bool>
where
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    check_radius(r)?;
    let lim = limits();
    let target = if lower {
        Dy::from_rational_ceil(m, 96)
    } else {
        Dy::from_rational_floor(m, 96)
    };
    let mut pending: Vec<(CircleArc, u32)> = CircleArc::cover(r, INITIAL_ARCS).into_iter().map(|a| (a, 0)).collect();
    let mut evaluated = 0usize;
    while !pending.is_empty() {
        evaluated += pending.len();
        if evaluated > lim.max_pieces {
            return Ok(false);
        }
        let results = evaluate(pending, f, lower);
        let mut active = vec![];
        for (a, s) in results {
            let ok = if lower { a.bound >= target } else { a.bound <= target };
            if ok {
                continue;
            }
            // A sample on the circle already violates the claim.
            let refuted = if lower { s < target } else { s > target };
            if refuted || a.depth >= lim.max_refine + 8 {
                return Ok(false);
            }
            active.push(a);
        }
        pending = split_all(active);
    }
    Ok(true)
}

/// `m <= min |p|` on `|z| = r`; `gap` is the relative tolerance.
pub fn circle_min_bound(p: &AlgPoly, r: &Rational, gap: &Rational) -> Result<Rational> {
    circle_min(&|b: &Ball, prec| p.eval_ball(b, prec), r, gap)
}

/// `M >= max |p|` on `|z| = r`: the tighter of the length bound and a subdivision bound.
pub fn circle_max_bound(p: &AlgPoly, r: &Rational) -> Result<Rational> {
    let coarse = p.sup_bound_on_disk(r);
    let fine = circle_max(&|b: &Ball, prec| p.eval_ball(b, prec), r, &Rational::ratio(1, 64))?;
    Ok(coarse.min(fine))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{AlgPoly, QPoly};

    fn eval(c: &[i64]) -> impl Fn(&Ball, u32) -> Ball + Sync {
        let p = AlgPoly::from_qpoly(QPoly::from_i64(c));
        move |b: &Ball, prec| p.eval_ball(b, prec)
    }

    fn close(x: &Rational, want: &Rational, rel: &Rational) -> bool {
        (x - want).abs() <= want * rel
    }

    #[test]
    fn minimum_examples() {
        let gap = Rational::ratio(1, 1000);
        let m = circle_min(&eval(&[0, 1]), &Rational::ratio(3, 2), &gap).unwrap();
        assert!(m <= Rational::ratio(3, 2) && close(&m, &Rational::ratio(3, 2), &Rational::ratio(1, 100)));
        let m = circle_min(&eval(&[-2, 1]), &Rational::one(), &gap).unwrap();
        assert!(m <= Rational::one() && close(&m, &Rational::one(), &Rational::ratio(1, 100)));
        let m = circle_min(&eval(&[-2, 0, 1]), &Rational::from(2), &gap).unwrap();
        assert!(m <= Rational::from(2) && close(&m, &Rational::from(2), &Rational::ratio(1, 100)));
    }

    #[test]
    fn maximum_examples() {
        let gap = Rational::ratio(1, 1000);
        let m = circle_max(&eval(&[0, 1]), &Rational::from(2), &gap).unwrap();
        assert!(m >= Rational::from(2) && close(&m, &Rational::from(2), &Rational::ratio(1, 100)));
        let m = circle_max(&eval(&[1, 0, 1]), &Rational::one(), &gap).unwrap();
        assert!(m >= Rational::from(2) && close(&m, &Rational::from(2), &Rational::ratio(1, 100)));
        let m = circle_max(&eval(&[7]), &Rational::from(5), &gap).unwrap();
        assert!(m >= Rational::from(7) && close(&m, &Rational::from(7), &Rational::ratio(1, 100)));
    }

    #[test]
    fn root_on_circle_is_reported() {
        let e = circle_min(&eval(&[-1, 1]), &Rational::one(), &Rational::ratio(1, 10)).unwrap_err();
        assert_eq!(e, Error::RootOnCircle);
    }

    #[test]
    fn certification_accepts_and_refutes() {
        let f = eval(&[-2, 0, 1]);
        let r = Rational::from(2);
        assert!(certify_min(&f, &r, &Rational::ratio(19, 10)).unwrap());
        assert!(!certify_min(&f, &r, &Rational::ratio(21, 10)).unwrap());
        assert!(certify_max(&f, &r, &Rational::ratio(61, 10)).unwrap());
        assert!(!certify_max(&f, &r, &Rational::ratio(59, 10)).unwrap());
    }
}
