//! Argument-principle root counting.
//!
//! A closed contour is split into pieces, each enclosed by a disc. The image
//! of every piece under the function is enclosed by a ball that must exclude
//! 0; pieces are bisected until it does. Consecutive image balls share a
//! point, so the argument turns by less than `pi` between their centers and
//! the winding number follows exactly from quadrant labels of the centers,
//! with the sign of a cross product settling half turns.

use crate::config::limits;
use crate::exact::{Ball, ComplexBox, Dy, Mag, Rational};
use crate::par;
use crate::poly::QPoly;
use crate::{Error, Result};

/// A piece of a contour that can be enclosed by a disc and bisected.
pub trait Piece: Sized + Send + Sync + Clone {
    fn ball(&self, prec: u32) -> Ball;
    fn split(&self) -> (Self, Self);
}

/// Point `r * ((1 - t^2) + 2ti) / (1 + t^2)` rotated by `i^quadrant`.
pub fn circle_point(r: &Rational, quadrant: u8, t: &Rational) -> (Rational, Rational) {
    let t2 = t * t;
    let s = Rational::one() + &t2;
    let x = r * &(Rational::one() - &t2) / &s;
    let y = r * &(t * &Rational::from(2)) / &s;
    match quadrant % 4 {
        0 => (x, y),
        1 => (-y, x),
        2 => (-x, -y),
        _ => (y, -x),
    }
}

/// Disc whose diameter is the segment `ab`.
pub fn chord_ball(a: &(Rational, Rational), b: &(Rational, Rational), prec: u32) -> Ball {
    let half = Rational::ratio(1, 2);
    let mid_re = (&a.0 + &b.0) * &half;
    let mid_im = (&a.1 + &b.1) * &half;
    let mut ball = Ball::from_rational(&mid_re, &mid_im, prec);
    let dx = &a.0 - &b.0;
    let dy = &a.1 - &b.1;
    let h2 = (&dx * &dx + &dy * &dy) * Rational::ratio(1, 4);
    if !h2.is_zero() {
        let r = Dy::from_rational_ceil(&h2, 40).sqrt_ceil(40);
        ball.rad = ball.rad.add(Mag::from_dy_upper(&r));
    }
    ball
}

/// Arc of the circle `|z| = r` inside one closed quadrant, `t` in `[t0, t1]`.
#[derive(Debug, Clone)]
pub struct CircleArc {
    pub r: Rational,
    pub quadrant: u8,
    pub t0: Rational,
    pub t1: Rational,
}

impl CircleArc {
    /// The whole circle as `4 * per_quadrant` arcs, counterclockwise from `r`.
    pub fn cover(r: &Rational, per_quadrant: u32) -> Vec<CircleArc> {
        let mut out = Vec::with_capacity(4 * per_quadrant as usize);
        for q in 0..4u8 {
            for k in 0..per_quadrant {
                out.push(CircleArc {
                    r: r.clone(),
                    quadrant: q,
                    t0: Rational::ratio(k as i64, per_quadrant as i64),
                    t1: Rational::ratio(k as i64 + 1, per_quadrant as i64),
                });
            }
        }
        out
    }

    pub fn start(&self) -> (Rational, Rational) {
        circle_point(&self.r, self.quadrant, &self.t0)
    }

    pub fn end(&self) -> (Rational, Rational) {
        circle_point(&self.r, self.quadrant, &self.t1)
    }

    pub fn midpoint(&self) -> (Rational, Rational) {
        circle_point(&self.r, self.quadrant, &((&self.t0 + &self.t1) * Rational::ratio(1, 2)))
    }
}

impl Piece for CircleArc {
    fn ball(&self, prec: u32) -> Ball {
        // An arc shorter than a half circle lies in the disc on its chord.
        chord_ball(&self.start(), &self.end(), prec)
    }

    fn split(&self) -> (Self, Self) {
        let mid = (&self.t0 + &self.t1) * Rational::ratio(1, 2);
        (
            CircleArc { t1: mid.clone(), ..self.clone() },
            CircleArc { t0: mid, ..self.clone() },
        )
    }
}

/// Straight segment from `a` to `b`.
#[derive(Debug, Clone)]
pub struct Segment {
    pub a: (Rational, Rational),
    pub b: (Rational, Rational),
}

impl Piece for Segment {
    fn ball(&self, prec: u32) -> Ball {
        chord_ball(&self.a, &self.b, prec)
    }

    fn split(&self) -> (Self, Self) {
        let half = Rational::ratio(1, 2);
        let m = ((&self.a.0 + &self.b.0) * &half, (&self.a.1 + &self.b.1) * &half);
        (
            Segment { a: self.a.clone(), b: m.clone() },
            Segment { a: m, b: self.b.clone() },
        )
    }
}

/// Boundary of a nondegenerate box, counterclockwise, each edge in `per_edge` pieces.
pub fn box_boundary(bx: &ComplexBox, per_edge: u32) -> Vec<Segment> {
    let [x0, x1, y0, y1] = bx.bounds();
    let corners = [
        (x0.clone(), y0.clone()),
        (x1.clone(), y0.clone()),
        (x1.clone(), y1.clone()),
        (x0.clone(), y1.clone()),
    ];
    let mut out = vec![];
    for k in 0..4 {
        let (a, b) = (&corners[k], &corners[(k + 1) % 4]);
        for j in 0..per_edge {
            let s0 = Rational::ratio(j as i64, per_edge as i64);
            let s1 = Rational::ratio(j as i64 + 1, per_edge as i64);
            let at = |s: &Rational| (&a.0 + &(&(&b.0 - &a.0) * s), &a.1 + &(&(&b.1 - &a.1) * s));
            out.push(Segment { a: at(&s0), b: at(&s1) });
        }
    }
    out
}

fn label(x: &Dy, y: &Dy) -> i64 {
    let (sx, sy) = (x.signum(), y.signum());
    if sx > 0 && sy >= 0 {
        0
    } else if sx <= 0 && sy > 0 {
        1
    } else if sx < 0 && sy <= 0 {
        2
    } else {
        3
    }
}

/// Refine one piece until every sub-piece image excludes 0; returns image centers in order.
fn resolve_piece<P, F>(piece: &P, f: &F, prec: u32, fail: &Error) -> Result<Vec<(Dy, Dy)>>
where
    P: Piece,
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    let lim = limits();
    let max_depth = lim.max_refine + 8;
    let mut out = vec![];
    let mut stack = vec![(piece.clone(), 0u32)];
    let mut evaluated = 0usize;
    while let Some((p, depth)) = stack.pop() {
        evaluated += 1;
        if evaluated > lim.max_pieces {
            return Err(Error::limit("winding", format!("more than {} contour pieces", lim.max_pieces)));
        }
        let pr = prec + 2 * depth;
        let img = f(&p.ball(pr), pr);
        if img.excludes_zero() {
            out.push((img.re, img.im));
            continue;
        }
        if depth >= max_depth {
            return Err(fail.clone());
        }
        let (a, b) = p.split();
        stack.push((b, depth + 1));
        stack.push((a, depth + 1));
    }
    Ok(out)
}

/// Winding number around 0 of the image of the closed contour made of `pieces`.
pub fn winding<P, F>(pieces: &[P], f: &F, prec: u32, fail: Error) -> Result<i64>
where
    P: Piece,
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    let parts = par::try_map(pieces, |p| resolve_piece(p, f, prec, &fail))?;
    let centers: Vec<(Dy, Dy)> = parts.into_iter().flatten().collect();
    let n = centers.len();
    let mut quarter_turns = 0i64;
    for k in 0..n {
        let (x1, y1) = &centers[k];
        let (x2, y2) = &centers[(k + 1) % n];
        let d = (label(x2, y2) - label(x1, y1)).rem_euclid(4);
        quarter_turns += match d {
            0 => 0,
            1 => 1,
            3 => -1,
            _ => match x1.mul(y2).sub(&y1.mul(x2)).signum() {
                s if s > 0 => 2,
                s if s < 0 => -2,
                _ => return Err(Error::Internal("opposite consecutive image centers".into())),
            },
        };
    }
    if quarter_turns % 4 != 0 {
        return Err(Error::Internal("winding is not a whole number of turns".into()));
    }
    Ok(quarter_turns / 4)
}

fn to_count(w: i64) -> Result<usize> {
    usize::try_from(w).map_err(|_| Error::Internal(format!("negative root count {w}")))
}

/// Number of zeros (with multiplicity) of a polynomial-like `f` in `|z| < r`.
pub fn count_roots_in_disk<F>(f: &F, r: &Rational, prec: u32) -> Result<usize>
where
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    if !r.is_positive() {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    to_count(winding(&CircleArc::cover(r, 4), f, prec, Error::RootOnCircle)?)
}

/// Number of zeros (with multiplicity) of `f` in the open nondegenerate box `bx`.
pub fn count_roots_in_box<F>(f: &F, bx: &ComplexBox, prec: u32) -> Result<usize>
where
    F: Fn(&Ball, u32) -> Ball + Sync,
{
    if bx.re.is_point() || bx.im.is_point() {
        return Err(Error::InvalidArgument("box must have positive width and height".into()));
    }
    to_count(winding(&box_boundary(bx, 2), f, prec, Error::RootOnBoundary)?)
}

/// `p(z)` split into real and imaginary parts along a horizontal line
/// `z = x + ci` (in `x`) or a vertical line `z = c + yi` (in `y`).
fn line_parts(p: &QPoly, c: &Rational, horizontal: bool) -> (QPoly, QPoly) {
    let (mut re, mut im) = (QPoly::zero(), QPoly::zero());
    for a in p.coeffs().iter().rev() {
        let (nr, ni) = if horizontal {
            // (R + iI)(x + ci)
            (re.shift(1).sub(&im.scale(c)), im.shift(1).add(&re.scale(c)))
        } else {
            // (R + iI)(c + yi)
            (re.scale(c).sub(&im.shift(1)), im.scale(c).add(&re.shift(1)))
        };
        re = nr.add(&QPoly::constant(a.clone()));
        im = ni;
    }
    (re, im)
}

/// Exact value of `p` at a complex rational point.
pub fn eval_exact(p: &QPoly, re: &Rational, im: &Rational) -> (Rational, Rational) {
    let (mut a, mut b) = (Rational::zero(), Rational::zero());
    for c in p.coeffs().iter().rev() {
        let na = &(&a * re) - &(&b * im) + c;
        let nb = &(&a * im) + &(&b * re);
        a = na;
        b = nb;
    }
    (a, b)
}

/// Roots of a rational polynomial in a closed box.
///
/// Nondegenerate boxes are handled by the argument principle (roots with
/// multiplicity, none allowed on the boundary); segments and points are
/// decided exactly and count distinct roots.
pub fn count_roots_in_box_exact(p: &QPoly, bx: &ComplexBox) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    match (bx.re.is_point(), bx.im.is_point()) {
        (true, true) => {
            let (a, b) = eval_exact(p, bx.re.lo(), bx.im.lo());
            Ok((a.is_zero() && b.is_zero()) as usize)
        }
        (false, true) | (true, false) => {
            let horizontal = bx.im.is_point();
            let (c, lo, hi) = if horizontal {
                (bx.im.lo(), bx.re.lo(), bx.re.hi())
            } else {
                (bx.re.lo(), bx.im.lo(), bx.im.hi())
            };
            let (re, im) = line_parts(p, c, horizontal);
            let g = if im.is_zero() { re.monic() } else { re.gcd(&im) };
            if g.degree().unwrap_or(0) == 0 {
                return Ok(0);
            }
            Ok(g.count_real_roots_closed(lo, hi))
        }
        (false, false) => {
            let bits = p.coeffs().iter().map(|c| c.numer().bits() + c.denom().bits()).max().unwrap_or(0);
            // Small boxes need extra bits to resolve the image of their edges.
            let scale = bx.width().log2_estimate().map_or(0, |e| (-e).max(0) as u32);
            let prec = 64 + (bits as u32).min(4096) + scale.min(4096);
            count_roots_in_box(&|z: &Ball, pr: u32| p.eval_ball(z, pr), bx, prec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn bx(a: &str, b: &str, c: &str, d: &str) -> ComplexBox {
        ComplexBox::from_bounds(q(a), q(b), q(c), q(d)).unwrap()
    }

    fn count_box(p: &QPoly, b: &ComplexBox) -> usize {
        count_roots_in_box(&|z: &Ball, pr: u32| p.eval_ball(z, pr), b, 64).unwrap()
    }

    fn count_disk(p: &QPoly, r: &str) -> usize {
        count_roots_in_disk(&|z: &Ball, pr: u32| p.eval_ball(z, pr), &q(r), 64).unwrap()
    }

    #[test]
    fn circle_points_lie_on_the_circle() {
        let r = q("5/2");
        for quad in 0..4 {
            for t in ["0", "1/3", "1/2", "7/9", "1"] {
                let (x, y) = circle_point(&r, quad, &q(t));
                assert_eq!(&x * &x + &y * &y, &r * &r);
            }
        }
    }

    #[test]
    fn box_examples() {
        assert_eq!(count_box(&QPoly::from_i64(&[-1, 0, 0, 1]), &bx("-2", "2", "-2", "2")), 3);
        assert_eq!(count_box(&QPoly::from_i64(&[0, 0, 1]), &bx("-1/3", "1/2", "-1/5", "1/7")), 2);
        assert_eq!(count_box(&QPoly::from_i64(&[-5, 1]), &bx("0", "1", "0", "1")), 0);
    }

    #[test]
    fn disk_examples() {
        assert_eq!(count_disk(&QPoly::new(vec![q("-1/4"), q("0"), q("1")]), "1"), 2);
        assert_eq!(count_disk(&QPoly::from_i64(&[-4, 0, 1]), "1"), 0);
        assert_eq!(count_disk(&QPoly::from_i64(&[0, -3, 1]), "2"), 1);
    }

    #[test]
    fn root_on_the_circle_is_reported() {
        let p = QPoly::from_i64(&[-1, 1]);
        let err = count_roots_in_disk(&|z: &Ball, pr: u32| p.eval_ball(z, pr), &q("1"), 64).unwrap_err();
        assert_eq!(err, Error::RootOnCircle);
    }

    #[test]
    fn degenerate_boxes_are_exact() {
        let p = QPoly::from_i64(&[1, 0, 1]);
        assert_eq!(count_roots_in_box_exact(&p, &bx("0", "0", "0", "2")).unwrap(), 1);
        assert_eq!(count_roots_in_box_exact(&p, &bx("0", "0", "-2", "2")).unwrap(), 2);
        assert_eq!(count_roots_in_box_exact(&p, &bx("0", "0", "1", "1")).unwrap(), 1);
        assert_eq!(count_roots_in_box_exact(&p, &bx("-1", "1", "0", "0")).unwrap(), 0);
        let s = QPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(count_roots_in_box_exact(&s, &bx("1", "2", "0", "0")).unwrap(), 1);
        // z^2 - 2z + 2 has roots 1 +- i.
        let t = QPoly::from_i64(&[2, -2, 1]);
        assert_eq!(count_roots_in_box_exact(&t, &bx("0", "3", "1", "1")).unwrap(), 1);
    }
}
