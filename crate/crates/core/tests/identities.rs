//! Exact zero tests on random algebraic identities and circle bounds on
//! random circle points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use entireforge::algebraic::AlgebraicNumber;
use entireforge::exact::{ComplexBox, Rational};
use entireforge::poly::circle::{circle_max_bound, circle_min_bound};
use entireforge::poly::count::eval_exact;
use entireforge::poly::{AlgPoly, QPoly};

fn square_free(n: i64) -> bool {
    n >= 2 && (2..=n).take_while(|k| k * k <= n).all(|k| n % (k * k) != 0)
}

fn sqrt(a: i64) -> AlgebraicNumber {
    let bx = ComplexBox::from_bounds(Rational::zero(), Rational::from(a), Rational::zero(), Rational::zero()).unwrap();
    AlgebraicNumber::root_of(&QPoly::from_i64(&[-a, 0, 1]), &bx).unwrap()
}

fn q(n: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_i64(n)
}

fn rat(p: i64, d: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_rational(Rational::ratio(p, d))
}

/// An expression together with whether it is zero.
fn identity(rng: &mut ChaCha8Rng, pool: &[i64]) -> (String, AlgebraicNumber, bool) {
    let mut pick = || pool[rng.gen_range(0..pool.len())];
    let (a, b) = (pick(), pick());
    let (sa, sb) = (sqrt(a), sqrt(b));
    let k = rng.gen_range(1..=1_000_000);
    let i = AlgebraicNumber::i();
    match rng.gen_range(0..10) {
        0 => (format!("(sqrt {a})^2 - {a}"), sa.mul(&sa).sub(&q(a)), true),
        1 => (format!("(sqrt {a})^2 - {a} - 1/{k}"), sa.mul(&sa).sub(&q(a)).sub(&rat(1, k)), false),
        2 => (
            format!("(sqrt {a} + sqrt {b})(sqrt {a} - sqrt {b}) - ({a} - {b})"),
            sa.add(&sb).mul(&sa.sub(&sb)).sub(&q(a - b)),
            true,
        ),
        3 => (
            format!("(sqrt {a} + sqrt {b})^2 - {a} - {b} - 2 sqrt {a} sqrt {b}"),
            sa.add(&sb).pow(2).sub(&q(a + b)).sub(&sa.mul(&sb).scale(&Rational::from(2))),
            true,
        ),
        4 => (format!("sqrt {a} sqrt {b} - sqrt {}", a * b), sa.mul(&sb).sub(&sqrt(a * b)), true),
        5 => (format!("sqrt {a} + sqrt {b} - sqrt {}", a + b), sa.add(&sb).sub(&sqrt(a + b)), false),
        6 => {
            let y = rat(rng.gen_range(-9..=9), rng.gen_range(1..=9));
            let z = sa.add(&i.mul(&y));
            let expected = q(a).add(&y.mul(&y));
            (format!("|sqrt {a} + {y} i|^2 - ({a} + {y}^2)"), z.mul(&z.conj()).sub(&expected), true)
        }
        7 => (
            format!("(sqrt {a} + i)^2 - ({a} - 1 + 2 sqrt {a} i)"),
            sa.add(&i).pow(2).sub(&q(a - 1).add(&sa.mul(&i).scale(&Rational::from(2)))),
            true,
        ),
        8 => (format!("(sqrt {a})^3 - {a} sqrt {a}"), sa.pow(3).sub(&sa.scale(&Rational::from(a))), true),
        _ => {
            // A decimal truncation of sqrt a is never equal to it.
            let scale = 1_000_000i64;
            let approx = ((a as f64).sqrt() * scale as f64).floor() as i64;
            (format!("sqrt {a} - {approx}/{scale}"), sa.sub(&rat(approx, scale)), false)
        }
    }
}

#[test]
fn thousand_random_identities() {
    let pool: Vec<i64> = (2..=50).filter(|&n| square_free(n)).collect();
    assert_eq!(pool.len(), 30);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut zeros, mut nonzeros) = (0, 0);
    for _ in 0..1000 {
        let (text, value, zero) = identity(&mut rng, &pool);
        assert_eq!(value.is_zero(), zero, "{text}");
        if zero {
            zeros += 1;
        } else {
            nonzeros += 1;
        }
    }
    assert!(zeros > 500 && nonzeros > 200);
    // Every square-free a <= 50 satisfies (sqrt a)^2 = a.
    for &a in &pool {
        let s = sqrt(a);
        assert!(s.mul(&s).sub(&q(a)).is_zero(), "sqrt {a}");
        assert!(!s.sub(&s.neg()).is_zero());
    }
}

/// The point of `|z| = r` at parameter `t` in quadrant `k`, as exact rationals.
fn circle_point(r: &Rational, t: &Rational, k: u8) -> (Rational, Rational) {
    let one = Rational::one();
    let d = &one + &(t * t);
    let x = (&one - &(t * t)).checked_div(&d).unwrap() * r;
    let y = (&Rational::from(2) * t).checked_div(&d).unwrap() * r;
    match k {
        0 => (x, y),
        1 => (-y, x),
        2 => (-x, -y),
        _ => (y, -x),
    }
}

#[test]
fn circle_bounds_dominate_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let gap = Rational::ratio(1, 64);
    let mut points = 0;
    while points < 10_000 {
        let deg = rng.gen_range(1..=8);
        let c: Vec<i64> = (0..=deg).map(|k| if k == deg { rng.gen_range(1..=5) } else { rng.gen_range(-9..=9) }).collect();
        let qp = QPoly::from_i64(&c);
        let p = AlgPoly::from_qpoly(qp.clone());
        let r = Rational::ratio(rng.gen_range(1..=16), 4);
        let Ok(m) = circle_min_bound(&p, &r, &gap) else { continue };
        let big_m = circle_max_bound(&p, &r).unwrap();
        assert!(m.is_positive() && m <= big_m);
        let (m2, big_m2) = (&m * &m, &big_m * &big_m);
        for _ in 0..500 {
            let t = Rational::ratio(rng.gen_range(0..=1_000_000), 1_000_000);
            let (x, y) = circle_point(&r, &t, rng.gen_range(0..4));
            let (a, b) = eval_exact(&qp, &x, &y);
            let norm = &a * &a + &b * &b;
            assert!(m2 <= norm && norm <= big_m2, "{c:?} at r = {r}");
            points += 1;
        }
    }
}
