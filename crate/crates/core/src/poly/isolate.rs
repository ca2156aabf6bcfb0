//! Certified isolation of the complex roots of rational polynomials.
//!
//! Approximations come from the Aberth iteration in `f64`, are polished by
//! Newton steps in dyadic ball arithmetic, and are certified by the Krawczyk
//! test: if `K(D) = c - Y p(c) + (1 - Y p'(D)) (D - c)` lies inside the disc
//! `D`, then `D` holds exactly one root and that root lies in `K(D)`.

use num_complex::Complex64;

use crate::config::limits;
use crate::exact::{Ball, ComplexBox, Dy, Mag, Rational};
use crate::poly::{count, QPoly};
use crate::{Error, Result};

/// Approximations of all complex roots (Aberth iteration in `f64`).
pub fn approx_roots(p: &QPoly) -> Vec<Complex64> {
    let n = p.deg();
    if n == 0 {
        return vec![];
    }
    let lead = p.lead();
    let a: Vec<f64> = p.coeffs().iter().map(|c| (c / &lead).to_f64()).collect();
    let bound = (0..n)
        .filter(|&k| a[k] != 0.0)
        .map(|k| a[k].abs().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    };
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / z[k].norm().max(1e-300));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

fn ball_center(b: &Ball) -> Ball {
    Ball::exact(b.re.clone(), b.im.clone())
}

/// `|center(a) - center(b)|` rounded up.
fn center_dist_upper(a: &Ball, b: &Ball) -> Dy {
    let dx = a.re.sub(&b.re);
    let dy = a.im.sub(&b.im);
    dx.mul(&dx).add(&dy.mul(&dy)).sqrt_ceil(40)
}

/// Whether disc `a` lies inside disc `b` (strictly when `strict`).
pub(crate) fn disc_inside(a: &Ball, b: &Ball, strict: bool) -> bool {
    let lhs = center_dist_upper(a, b).add(&a.rad.to_dy());
    let rhs = b.rad.to_dy();
    if strict {
        lhs < rhs
    } else {
        lhs <= rhs
    }
}

/// Whether two discs are certainly disjoint.
pub(crate) fn discs_disjoint(a: &Ball, b: &Ball) -> bool {
    let dx = a.re.sub(&b.re);
    let dy = a.im.sub(&b.im);
    let d = dx.mul(&dx).add(&dy.mul(&dy)).sqrt_floor(40);
    d > a.rad.add(b.rad).to_dy()
}

/// Krawczyk image of the disc `d`.
fn krawczyk_image(p: &QPoly, dp: &QPoly, d: &Ball, prec: u32) -> Option<Ball> {
    let c = ball_center(d);
    let pc = p.eval_ball(&c, prec);
    let y = ball_center(&dp.eval_ball(&c, prec).inv(prec)?);
    let dpd = dp.eval_ball(d, prec);
    let one_minus = Ball::from_i64(1).sub(&y.mul(&dpd, prec), prec);
    let spread = one_minus.mag().mul(d.rad);
    Some(c.sub(&y.mul(&pc, prec), prec).add_error(spread))
}

/// Krawczyk test: `Some(K)` when `K(d)` lies strictly inside `d`.
pub fn krawczyk(p: &QPoly, dp: &QPoly, d: &Ball, prec: u32) -> Option<Ball> {
    let k = krawczyk_image(p, dp, d, prec)?;
    disc_inside(&k, d, true).then_some(k)
}

/// Newton polishing of an approximate root at `prec` bits.
fn polish(p: &QPoly, dp: &QPoly, z: Ball, prec: u32) -> (Ball, Mag) {
    let mut z = ball_center(&z);
    let mut last = Mag::pow2(i64::MAX / 8);
    for _ in 0..200 {
        let pz = p.eval_ball(&z, prec);
        let Some(step) = pz.div(&dp.eval_ball(&z, prec), prec) else {
            break;
        };
        let size = step.center_mag();
        if size.is_zero() {
            return (z, Mag::zero());
        }
        if size >= last {
            return (z, last);
        }
        last = size;
        z = ball_center(&z.sub(&step, prec));
        let scale = z.center_mag().log2_ceil().max(0);
        if size.log2_ceil() < scale - prec as i64 + 8 {
            break;
        }
    }
    (z, last)
}

/// Certified disc around the root of `p` nearest to `z`.
pub fn certify_near(p: &QPoly, dp: &QPoly, z: &Ball, prec: u32) -> Option<Ball> {
    let (c, step) = polish(p, dp, z.clone(), prec);
    let scale = c.center_mag().log2_ceil().max(0);
    let floor = Mag::pow2(scale - prec as i64 + 12);
    let mut rho = step.mul_2exp(2).add(floor);
    for _ in 0..48 {
        let d = Ball::new(c.re.clone(), c.im.clone(), rho);
        if let Some(k) = krawczyk(p, dp, &d, prec) {
            return Some(k);
        }
        rho = rho.mul_2exp(2);
    }
    None
}

/// Shrink a certified isolating disc of `poly` to radius `target`.
///
/// Returns `None` when no progress is possible within the precision ceiling.
pub fn newton_refine_disc(poly: &QPoly, disc: &Ball, target: Mag, prec: u32) -> Option<Ball> {
    let dp = poly.derivative();
    let max_bits = limits().max_bits.min(u32::MAX as u64 / 2) as u32;
    let mut d = disc.clone();
    let mut prec = prec.max(64);
    let mut progressed = false;
    for _ in 0..200 {
        if d.rad <= target {
            return Some(d);
        }
        match krawczyk_image(poly, &dp, &d, prec) {
            Some(k) if disc_inside(&k, &d, false) && k.rad < d.rad => {
                d = k;
                progressed = true;
            }
            _ => {
                if prec >= max_bits {
                    break;
                }
                prec = (prec * 2).min(max_bits);
            }
        }
    }
    progressed.then_some(d)
}

/// For a disc isolating one root of `p`: `Some([lo, hi])` holding that root and
/// no other root when it is real, `None` when it is not real.
///
/// A disc centred on the real axis that isolates a root holds its conjugate
/// too, so the root is real.
pub fn real_root_interval(p: &QPoly, d: &Ball) -> Result<Option<(Rational, Rational)>> {
    let dp = p.derivative();
    let mut d = d.clone();
    let mut prec = 128u32;
    for _ in 0..limits().max_refine * 4 {
        let rad = d.rad.to_dy();
        if d.im.abs() > rad {
            return Ok(None);
        }
        let r = Mag::from_dy_upper(&d.im).add(d.rad);
        let sym = Ball::new(d.re.clone(), Dy::zero(), r);
        if krawczyk(p, &dp, &sym, prec).is_some() {
            let (c, r) = (d.re.to_rational(), r.to_rational());
            return Ok(Some((&c - &r, &c + &r)));
        }
        let target = d.rad.mul(Mag::pow2(-8));
        prec = prec.max(64 + (-target.log2_ceil()).max(0) as u32);
        match newton_refine_disc(p, &d, target, prec) {
            Some(nd) => d = nd,
            None => prec *= 2,
        }
    }
    Err(Error::limit("real_root_interval", "could not decide whether the root is real"))
}

/// Certified discs for all roots of a square-free rational polynomial.
pub fn isolate_all(p: &QPoly) -> Result<Vec<Ball>> {
    let n = p.deg();
    if n == 0 {
        return Ok(vec![]);
    }
    let dp = p.derivative();
    let approx = approx_roots(p);
    let bits = p.coeffs().iter().map(|c| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0);
    let mut prec = 96 + (bits as u32).min(1 << 16);
    let max_bits = limits().max_bits.min(1 << 20) as u32;
    loop {
        let mut out: Vec<Ball> = Vec::with_capacity(n);
        let mut ok = true;
        for z in &approx {
            let start = Ball::exact(
                Dy::from_rational_floor(&f64_to_rational(z.re), 60),
                Dy::from_rational_floor(&f64_to_rational(z.im), 60),
            );
            match certify_near(p, &dp, &start, prec) {
                Some(k) if out.iter().all(|o| discs_disjoint(o, &k)) => out.push(k),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && out.len() == n {
            return Ok(out);
        }
        if prec >= max_bits {
            return Err(Error::limit("isolation", format!("could not separate the {n} roots")));
        }
        prec = (prec * 2).min(max_bits);
    }
}

pub(crate) fn f64_to_rational(x: f64) -> Rational {
    if !x.is_finite() || x == 0.0 {
        return Rational::zero();
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = if x < 0.0 { -(m as i64) } else { m as i64 };
    Dy::new(m.into(), e).to_rational()
}

/// Certified disc for the unique root of `p` in `bx` (the caller has
/// verified that `bx` holds exactly one root).
pub fn locate_in_box(p: &QPoly, bx: &ComplexBox) -> Result<Ball> {
    if let Ok(all) = isolate_all(&p.squarefree()) {
        let sq = p.squarefree();
        let mut cands: Vec<Ball> = all.into_iter().filter(|b| b.to_box().intersects(bx)).collect();
        for round in 0..32 {
            if let Some(inside) = cands.iter().find(|b| b.to_box().is_subset_of(bx)) {
                return Ok(inside.clone());
            }
            if cands.len() == 1 {
                return Ok(cands.pop().expect("one candidate"));
            }
            let target = Mag::pow2(-(16 << round.min(8)));
            cands = cands
                .into_iter()
                .map(|b| newton_refine_disc(&sq, &b, target, 128).unwrap_or(b))
                .filter(|b| b.to_box().intersects(bx))
                .collect();
        }
    }
    bisect_to_disc(p, bx)
}

/// Quadtree fallback: halve the box, keeping the half with the root.
fn bisect_to_disc(p: &QPoly, bx: &ComplexBox) -> Result<Ball> {
    let sq = p.squarefree();
    let dp = sq.derivative();
    let mut cur = bx.clone();
    for _ in 0..limits().max_refine * 4 {
        let d = Ball::from_box(&cur, 128);
        if let Some(k) = krawczyk(&sq, &dp, &d, 128) {
            return Ok(k);
        }
        let [x0, x1, y0, y1] = cur.bounds();
        let wide = x1 - x0 >= y1 - y0;
        let mut next = None;
        for nudge in [0i64, 1, -1, 3, -3] {
            let t = Rational::ratio(32 + nudge, 64);
            let halves = if wide {
                let m = x0 + &(&(x1 - x0) * &t);
                [
                    ComplexBox::from_bounds(x0.clone(), m.clone(), y0.clone(), y1.clone())?,
                    ComplexBox::from_bounds(m, x1.clone(), y0.clone(), y1.clone())?,
                ]
            } else {
                let m = y0 + &(&(y1 - y0) * &t);
                [
                    ComplexBox::from_bounds(x0.clone(), x1.clone(), y0.clone(), m.clone())?,
                    ComplexBox::from_bounds(x0.clone(), x1.clone(), m, y1.clone())?,
                ]
            };
            match count::count_roots_in_box_exact(&sq, &halves[0]) {
                Ok(1) => next = Some(halves[0].clone()),
                Ok(0) => next = Some(halves[1].clone()),
                _ => continue,
            }
            break;
        }
        cur = next.ok_or_else(|| Error::limit("isolation", "could not split the isolating box"))?;
    }
    Err(Error::limit("isolation", "bisection depth exceeded"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aberth_finds_roots_of_unity() {
        let p = QPoly::from_i64(&[-1, 0, 0, 0, 0, 1]);
        let roots = approx_roots(&p);
        assert_eq!(roots.len(), 5);
        for z in roots {
            assert!((z.powu(5) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn all_roots_are_certified_and_disjoint() {
        let p = QPoly::from_i64(&[1, -3, 0, 2, 0, 0, 1]);
        let discs = isolate_all(&p).unwrap();
        assert_eq!(discs.len(), 6);
        for (i, a) in discs.iter().enumerate() {
            assert!(a.rad < Mag::pow2(-40));
            for b in &discs[i + 1..] {
                assert!(discs_disjoint(a, b));
            }
        }
    }

    #[test]
    fn refinement_reaches_high_precision() {
        let p = QPoly::from_i64(&[-2, 0, 1]);
        let d = isolate_all(&p).unwrap().into_iter().find(|b| b.re.signum() > 0).unwrap();
        let fine = newton_refine_disc(&p, &d, Mag::pow2(-300), 128).unwrap();
        assert!(fine.rad <= Mag::pow2(-300));
        let x = fine.re.to_rational();
        let err = (&x * &x - Rational::from(2)).abs();
        assert!(err < Rational::new(1, num_bigint::BigInt::from(1) << 290usize).unwrap());
    }

    #[test]
    fn box_location_picks_the_right_root() {
        let p = QPoly::from_i64(&[1, 0, 1]);
        let bx = ComplexBox::from_bounds(Rational::from(-1), Rational::from(1), Rational::ratio(1, 2), Rational::from(2)).unwrap();
        let d = locate_in_box(&p, &bx).unwrap();
        assert!(d.im.signum() > 0 && d.rad < Mag::pow2(-20));
    }
}
