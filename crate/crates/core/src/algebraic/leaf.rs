//! Registry of `RootOf(p, box)` leaves.
//!
//! A leaf is a root of a primitive square-free integer polynomial together
//! with a box that isolates it. Leaves are registered once per process and
//! addressed by a dense id; registering an already known root returns the
//! existing leaf.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Signed;
use parking_lot::{Mutex, RwLock};

use crate::config::limits;
use crate::exact::{Ball, ComplexBox, Dy, Mag, Rational};
use crate::poly::{count, isolate, QPoly};
use crate::{Error, Result};

#[derive(Debug, Clone)]
enum Encl {
    /// Real root in `[lo, hi]` with `sign(p(lo)) = sign_lo != 0`.
    Interval { lo: Rational, hi: Rational, sign_lo: i32 },
    /// `re = -b/2a` exactly, `im = sign * sqrt(4ac - b^2) / 2a`.
    ComplexQuadratic { sign: i32 },
    /// Certified disc containing exactly this root.
    Disc(Ball),
}

pub struct LeafData {
    pub id: u32,
    ints: Vec<BigInt>,
    poly: QPoly,
    real: bool,
    root_bound: Rational,
    isolating_box: ComplexBox,
    /// `theta^(d + k)` reduced to degree `< d`, for `k = 0 ..= d - 2`.
    reduce_table: Vec<Vec<Rational>>,
    state: Mutex<Encl>,
    balls: Mutex<BTreeMap<u32, Ball>>,
}

impl std::fmt::Debug for LeafData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RootOf({:?}, {:?})", self.poly, self.isolating_box)
    }
}

impl LeafData {
    pub fn ints(&self) -> &[BigInt] {
        &self.ints
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.ints.len() - 1
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn lead(&self) -> &BigInt {
        self.ints.last().expect("nonconstant")
    }

    /// Upper bound on the modulus of every root of the defining polynomial.
    pub fn root_bound(&self) -> &Rational {
        &self.root_bound
    }

    pub fn isolating_box(&self) -> &ComplexBox {
        &self.isolating_box
    }

    /// Whether this is a non-real root of a quadratic (its conjugate is then
    /// expressed through the trace rather than as a second leaf).
    pub fn is_complex_quadratic(&self) -> bool {
        !self.real && self.degree() == 2
    }

    /// Reduced coefficients of `theta^e` for `d <= e <= 2d - 2`.
    pub(crate) fn reduced_power(&self, e: usize) -> &[Rational] {
        &self.reduce_table[e - self.degree()]
    }

    /// Disc of radius at most `2^-prec` containing the root.
    pub fn ball(&self, prec: u32) -> Ball {
        if let Some(b) = self.balls.lock().get(&prec) {
            return b.clone();
        }
        let b = self.compute_ball(prec);
        self.balls.lock().insert(prec, b.clone());
        b
    }

    fn compute_ball(&self, prec: u32) -> Ball {
        let mag_bits = self.root_bound.log2_estimate().unwrap_or(0).max(0) as u32;
        let work = prec + 16 + mag_bits;
        let mut st = self.state.lock();
        match &mut *st {
            Encl::Interval { lo, hi, sign_lo } => {
                let target = Rational::new(1, BigInt::from(1) << (prec as usize + 1)).expect("nonzero");
                while &*hi - &*lo > target {
                    let mid = ((&*lo + &*hi) * Rational::ratio(1, 2)).floor_dyadic(prec + 8);
                    let mid = if &mid <= lo || &mid >= hi {
                        (&*lo + &*hi) * Rational::ratio(1, 2)
                    } else {
                        mid
                    };
                    let s = self.poly.sign_at(&mid);
                    if s == 0 {
                        *lo = mid.clone();
                        *hi = mid;
                        break;
                    }
                    if s == *sign_lo {
                        *lo = mid;
                    } else {
                        *hi = mid;
                    }
                }
                let c = (&*lo + &*hi) * Rational::ratio(1, 2);
                let (re, err) = Dy::from_rational(&c, work);
                let half = Mag::from_rational_upper(&((&*hi - &*lo) * Rational::ratio(1, 2)));
                Ball::new(re, Dy::zero(), err.add(half))
            }
            Encl::ComplexQuadratic { sign } => {
                let (c, b, a) = (&self.ints[0], &self.ints[1], &self.ints[2]);
                let two_a = Rational::from_integer(a * 2);
                let re = Rational::from_integer(-b) / &two_a;
                let neg_disc = Dy::new(a * c * 4 - b * b, 0);
                let lo = neg_disc.sqrt_floor(work + 8).to_rational() / &two_a;
                let hi = neg_disc.sqrt_ceil(work + 8).to_rational() / &two_a;
                let (lo, hi) = if *sign > 0 { (lo, hi) } else { (-hi, -lo) };
                let mid = (&lo + &hi) * Rational::ratio(1, 2);
                let mut ball = Ball::from_rational(&re, &mid, work);
                ball.rad = ball.rad.add(Mag::from_rational_upper(&(&hi - &lo)));
                ball
            }
            Encl::Disc(d) => {
                let target = Mag::pow2(-(prec as i64) - 1);
                let mut guard = 0;
                while d.rad > target && guard < 64 {
                    guard += 1;
                    match isolate::newton_refine_disc(&self.poly, d, target, work) {
                        Some(nd) => *d = nd,
                        None => break,
                    }
                }
                d.clone()
            }
        }
    }

    /// Box enclosure of width at most `2^-prec`.
    pub fn enclosure(&self, prec: u32) -> ComplexBox {
        let b = self.ball(prec);
        if self.real {
            let r = b.rad.to_rational();
            let c = b.re.to_rational();
            ComplexBox::from_bounds(&c - &r, &c + &r, Rational::zero(), Rational::zero()).expect("ordered")
        } else {
            b.to_box()
        }
    }

    /// Certified disc for the root, if the leaf is tracked by one.
    pub(crate) fn disc_hint(&self) -> Option<Ball> {
        match &*self.state.lock() {
            Encl::Disc(d) => Some(d.clone()),
            _ => None,
        }
    }
}

/// Bisect a sign-change bracket of `poly` to width `2^-bits`.
fn probe(poly: &QPoly, lo: &mut Rational, hi: &mut Rational, sign_lo: i32, bits: u32) {
    let target = Rational::new(1, BigInt::from(1) << (bits as usize + 1)).expect("nonzero");
    while &*hi - &*lo > target {
        let mid = (&*lo + &*hi) * Rational::ratio(1, 2);
        let s = poly.sign_at(&mid);
        if s == 0 {
            *lo = mid.clone();
            *hi = mid;
            return;
        }
        if s == sign_lo {
            *lo = mid;
        } else {
            *hi = mid;
        }
    }
}

static REGISTRY: RwLock<Vec<Arc<LeafData>>> = RwLock::new(Vec::new());

pub fn leaf(id: u32) -> Arc<LeafData> {
    REGISTRY.read()[id as usize].clone()
}

/// Outcome of registering a root: either a rational value or a leaf.
#[derive(Debug, Clone)]
pub enum Rooted {
    Rational(Rational),
    Leaf(Arc<LeafData>),
}

fn reduce_table(ints: &[BigInt]) -> Vec<Vec<Rational>> {
    let d = ints.len() - 1;
    let lead = Rational::from_integer(ints[d].clone());
    // theta^d = -(a_0 + ... + a_{d-1} theta^{d-1}) / a_d
    let base: Vec<Rational> = ints[..d]
        .iter()
        .map(|a| -(Rational::from_integer(a.clone()) / &lead))
        .collect();
    let mut table = vec![base.clone()];
    for _ in 1..d.saturating_sub(1) {
        let prev = table.last().expect("nonempty");
        let top = prev[d - 1].clone();
        let mut next = vec![Rational::zero(); d];
        next[1..d].clone_from_slice(&prev[..d - 1]);
        if !top.is_zero() {
            for (n, b) in next.iter_mut().zip(&base) {
                *n += &(&top * b);
            }
        }
        table.push(next);
    }
    table
}

/// Primitive square-free integer form of a polynomial.
pub(crate) fn normalize_poly(p: &QPoly) -> Result<Vec<BigInt>> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidArgument("defining polynomial must be nonconstant".into()));
    }
    Ok(p.squarefree().primitive_ints())
}

/// Rational root of `p` inside `[lo, hi]`, if there is one.
fn rational_root_in(p: &QPoly, ints: &[BigInt], lo: &Rational, hi: &Rational) -> Option<Rational> {
    for x in [lo, hi] {
        if p.sign_at(x) == 0 {
            return Some(x.clone());
        }
    }
    // A rational root u/v has v | lead, so lead * root is an integer.
    let lead = Rational::from_integer(ints.last().expect("nonconstant").abs());
    let a = (lo * &lead).ceil();
    let b = (hi * &lead).floor();
    if &b - &a > BigInt::from(64) {
        return None;
    }
    let mut k = a;
    while k <= b {
        let x = Rational::from_integer(k.clone()) / &lead;
        if p.sign_at(&x) == 0 {
            return Some(x);
        }
        k += 1;
    }
    None
}

/// Register the root of `p` isolated by `bx`.
///
/// `hint` is an optional certified disc (from a Krawczyk test) containing
/// exactly that root of `p` and lying inside `bx`; without it the box is
/// checked by the argument principle.
pub fn register(p: &QPoly, bx: &ComplexBox, hint: Option<Ball>) -> Result<Rooted> {
    let ints = normalize_poly(p)?;
    let poly = QPoly::from_ints(&ints);
    let d = ints.len() - 1;
    if d == 1 {
        return Ok(Rooted::Rational(
            -(Rational::from_integer(ints[0].clone()) / Rational::from_integer(ints[1].clone())),
        ));
    }
    let certified;
    let bx = match &hint {
        Some(h) => {
            certified = box_from_disc(&poly, h)?;
            &certified
        }
        None => bx,
    };
    if hint.is_none() {
        let n = count::count_roots_in_box_exact(&poly, bx).map_err(|e| match e {
            Error::RootOnBoundary => Error::NotIsolating("a root lies on the box boundary".into()),
            e => e,
        })?;
        if n != 1 {
            return Err(Error::NotIsolating(format!("box contains {n} roots")));
        }
    }

    // The unique root is real iff the box's real segment carries a real root.
    let mut real_segment = None;
    if let Some(h) = &hint {
        real_segment = isolate::real_root_interval(&poly, h)?;
    } else if bx.im.contains_zero() {
        let (lo, hi) = (bx.re.lo().clone(), bx.re.hi().clone());
        if poly.count_real_roots_closed(&lo, &hi) >= 1 {
            real_segment = Some((lo, hi));
        }
    }

    let encl = if let Some((mut lo, mut hi)) = real_segment {
        if let Some(r) = rational_root_in(&poly, &ints, &lo, &hi) {
            return Ok(Rooted::Rational(r));
        }
        let sign_lo = poly.sign_at(&lo);
        // Narrow the bracket so at most a handful of candidates `k / lead` remain.
        let bits = ints.last().expect("nonconstant").bits() as u32 + 4;
        probe(&poly, &mut lo, &mut hi, sign_lo, bits);
        if let Some(r) = rational_root_in(&poly, &ints, &lo, &hi) {
            return Ok(Rooted::Rational(r));
        }
        Encl::Interval { lo, hi, sign_lo }
    } else if d == 2 {
        // The box holds exactly one of the conjugates c +- i*t (t > 0); when it
        // straddles the axis it holds c + i*t iff it reaches further up than down.
        let up = bx.im.lo().is_positive() || (bx.im.hi().is_positive() && *bx.im.hi() > -bx.im.lo());
        Encl::ComplexQuadratic { sign: if up { 1 } else { -1 } }
    } else {
        let disc = match hint {
            Some(h) => h,
            None => isolate::locate_in_box(&poly, bx)?,
        };
        Encl::Disc(disc)
    };

    let real = matches!(encl, Encl::Interval { .. });
    let root_bound = poly.cauchy_bound();
    let candidate = LeafData {
        id: 0,
        reduce_table: reduce_table(&ints),
        ints,
        poly,
        real,
        root_bound,
        isolating_box: bx.clone(),
        state: Mutex::new(encl),
        balls: Mutex::new(BTreeMap::new()),
    };
    insert_dedup(candidate).map(Rooted::Leaf)
}

/// A box around an isolating disc that provably holds no other root.
fn box_from_disc(poly: &QPoly, disc: &Ball) -> Result<ComplexBox> {
    // Prefer short dyadic boxes on a grid.
    let (cre, cim) = (disc.re.to_rational(), disc.im.to_rational());
    let rad = disc.rad.to_rational();
    let nearest = |x: &Rational, bits: u32| (x + &Rational::pow2(-(bits as i64) - 1)).floor_dyadic(bits);
    for k in (2..120u32).step_by(3) {
        let h = Rational::pow2(-(k as i64));
        if h <= rad {
            break;
        }
        let (x, y) = (nearest(&cre, k + 2), nearest(&cim, k + 2));
        let bx = ComplexBox::from_bounds(&x - &h, &x + &h, &y - &h, &y + &h)?;
        if disc.is_interior_of(&bx) && matches!(count::count_roots_in_box_exact(poly, &bx), Ok(1)) {
            return Ok(bx);
        }
    }
    let mut d = disc.clone();
    for _ in 0..limits().max_refine.max(8) {
        let bx = d.to_box();
        if matches!(count::count_roots_in_box_exact(poly, &bx), Ok(1)) {
            return Ok(bx);
        }
        let target = d.rad.clone().mul_2exp(-8);
        d = isolate::newton_refine_disc(poly, &d, target, 64)
            .ok_or_else(|| Error::NotIsolating("disc cannot be shrunk to an isolating box".into()))?;
    }
    Err(Error::NotIsolating("disc cannot be shrunk to an isolating box".into()))
}

/// Two leaves with the same polynomial denote the same root iff their enclosures eventually nest.
fn same_root(a: &LeafData, b: &LeafData) -> bool {
    if a.ints != b.ints || a.real != b.real {
        return false;
    }
    let max = limits().max_refine.max(8);
    for k in 0..max {
        let prec = 16u32 << k.min(10);
        let (ea, eb) = (a.enclosure(prec), b.enclosure(prec));
        if !ea.intersects(&eb) {
            return false;
        }
        if ea.is_subset_of(b.isolating_box()) || eb.is_subset_of(a.isolating_box()) {
            return true;
        }
    }
    // Undecided: keep them apart. Duplicate leaves cost time, never soundness.
    false
}

fn insert_dedup(mut candidate: LeafData) -> Result<Arc<LeafData>> {
    let known: Vec<Arc<LeafData>> = REGISTRY
        .read()
        .iter()
        .filter(|l| l.ints == candidate.ints)
        .cloned()
        .collect();
    for existing in &known {
        if same_root(existing, &candidate) {
            return Ok(existing.clone());
        }
    }
    let mut reg = REGISTRY.write();
    // Entries added while the lock was released.
    for existing in reg.iter().skip(known.last().map_or(0, |l| l.id as usize + 1)) {
        if existing.ints == candidate.ints && same_root(existing, &candidate) {
            return Ok(existing.clone());
        }
    }
    candidate.id = u32::try_from(reg.len()).map_err(|_| Error::Internal("leaf registry overflow".into()))?;
    let arc = Arc::new(candidate);
    reg.push(arc.clone());
    Ok(arc)
}

/// Leaf for the complex conjugate of a non-real leaf.
pub(crate) fn conjugate_leaf(l: &LeafData) -> Result<Arc<LeafData>> {
    let hint = l.disc_hint().map(|d| d.conj());
    match register(&l.poly, &l.isolating_box.conj(), hint)? {
        Rooted::Leaf(c) => Ok(c),
        Rooted::Rational(_) => Err(Error::Internal("conjugate of a non-real leaf is rational".into())),
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

    #[test]
    fn sqrt2_is_a_real_leaf() {
        let r = register(&QPoly::from_i64(&[-2, 0, 1]), &bx("1", "2", "0", "0"), None).unwrap();
        let Rooted::Leaf(l) = r else { panic!("expected leaf") };
        assert!(l.is_real());
        let e = l.enclosure(40);
        assert!(e.re.lo() < &q("1414213562373096/1000000000000000"));
        assert!(e.re.hi() > &q("1414213562373095/1000000000000000"));
        assert!(e.width() <= Rational::new(1, BigInt::from(1) << 40).unwrap());
    }

    #[test]
    fn imaginary_unit_is_a_complex_leaf() {
        let Rooted::Leaf(l) = register(&QPoly::from_i64(&[1, 0, 1]), &bx("0", "0", "0", "2"), None).unwrap() else {
            panic!("expected leaf")
        };
        assert!(!l.is_real());
        let e = l.enclosure(30);
        assert!(e.contains_point(&q("0"), &q("1")));
    }

    #[test]
    fn two_roots_are_rejected() {
        let err = register(&QPoly::from_i64(&[-2, 0, 1]), &bx("-2", "2", "-1", "1"), None).unwrap_err();
        assert!(matches!(err, Error::NotIsolating(_)));
    }

    #[test]
    fn rational_roots_are_recognized() {
        let p = QPoly::from_i64(&[-1, 2]).mul(&QPoly::from_i64(&[-2, 0, 1]));
        let r = register(&p, &bx("0", "1", "-1", "1"), None).unwrap();
        assert!(matches!(r, Rooted::Rational(v) if v == q("1/2")));
    }

    #[test]
    fn registration_deduplicates() {
        let p = QPoly::from_i64(&[-3, 0, 0, 1]);
        let Rooted::Leaf(a) = register(&p, &bx("1", "2", "-1", "1"), None).unwrap() else { panic!() };
        let Rooted::Leaf(b) = register(&p, &bx("7/5", "3/2", "-1/8", "1/8"), None).unwrap() else { panic!() };
        assert_eq!(a.id, b.id);
    }

    #[test]
    fn cubic_complex_leaf_refines() {
        let p = QPoly::from_i64(&[-2, 0, 0, 1]);
        let Rooted::Leaf(l) = register(&p, &bx("-1", "0", "1/2", "2"), None).unwrap() else { panic!() };
        assert!(!l.is_real());
        let b = l.ball(100);
        assert!(b.rad <= Mag::pow2(-100));
        let (x, y) = b.center_f64();
        assert!((x + 0.629960524947).abs() < 1e-9 && (y - 1.091123635971).abs() < 1e-9);
    }

    #[test]
    fn reduction_table_matches_direct_power() {
        let ints: Vec<BigInt> = [1, 0, -3, 2].iter().map(|&v| BigInt::from(v)).collect();
        let t = reduce_table(&ints);
        // theta^3 = (3 theta^2 - 1)/2
        assert_eq!(t[0], vec![q("-1/2"), q("0"), q("3/2")]);
        // theta^4 = (3 theta^3 - theta)/2 = (9 theta^2 - 2 theta - 3)/4
        assert_eq!(t[1], vec![q("-3/4"), q("-1/2"), q("9/4")]);
    }
}
