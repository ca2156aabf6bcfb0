//! Root counts in discs and boxes against independent oracles.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use entireforge::algebraic::AlgebraicNumber;
use entireforge::exact::{ComplexBox, Rational};
use entireforge::poly::count::{count_roots_in_box, count_roots_in_box_exact, count_roots_in_disk};
use entireforge::poly::{AlgPoly, QPoly};

fn small(rng: &mut ChaCha8Rng) -> Rational {
    Rational::ratio(rng.gen_range(-12..=12), rng.gen_range(1..=4))
}

fn gaussian(re: &Rational, im: &Rational) -> AlgebraicNumber {
    AlgebraicNumber::from_rational(re.clone()).add(&AlgebraicNumber::i().scale(im))
}

/// Polynomials with known Gaussian rational roots (repeats allowed).
#[test]
fn known_roots_in_discs_and_boxes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut discs, mut boxes) = (0, 0);
    for _ in 0..150 {
        let deg = rng.gen_range(1..=8);
        let mut roots: Vec<(Rational, Rational)> = vec![];
        for _ in 0..deg {
            if !roots.is_empty() && rng.gen_bool(0.25) {
                let k = rng.gen_range(0..roots.len());
                roots.push(roots[k].clone());
            } else {
                roots.push((small(&mut rng), small(&mut rng)));
            }
        }
        let p = roots
            .iter()
            .fold(AlgPoly::one(), |acc, (a, b)| acc.mul(&AlgPoly::linear(&gaussian(a, b))));
        let f = |z: &entireforge::exact::Ball, prec: u32| p.eval_ball(z, prec);

        let r = Rational::ratio(rng.gen_range(1..=8), 2);
        let r2 = &r * &r;
        let norms: Vec<Rational> = roots.iter().map(|(a, b)| a * a + b * b).collect();
        if norms.iter().all(|n| *n != r2) {
            let expected = norms.iter().filter(|n| **n < r2).count();
            assert_eq!(count_roots_in_disk(&f, &r, 64).unwrap(), expected, "roots {roots:?}, r = {r}");
            discs += 1;
        }

        let mut edge = || Rational::ratio(rng.gen_range(-20..=20), 3);
        let (x0, x1, y0, y1) = (edge(), edge(), edge(), edge());
        if x0 == x1 || y0 == y1 {
            continue;
        }
        let bx = ComplexBox::from_bounds(x0.clone().min(x1.clone()), x0.max(x1), y0.clone().min(y1.clone()), y0.max(y1)).unwrap();
        let [a, b, c, d] = bx.bounds();
        let on_edge = roots.iter().any(|(x, y)| {
            (bx.contains_point(x, y)) && (x == a || x == b || y == c || y == d)
        });
        if on_edge {
            continue;
        }
        let expected = roots.iter().filter(|(x, y)| bx.contains_point(x, y)).count();
        assert_eq!(count_roots_in_box(&f, &bx, 64).unwrap(), expected, "roots {roots:?}, box {bx}");
        boxes += 1;
    }
    assert!(discs > 100 && boxes > 50, "{discs} discs, {boxes} boxes compared");
}

/// All roots by Durand-Kerner iteration in double precision.
fn brute_force_roots(c: &[i64]) -> Option<Vec<Complex64>> {
    let lead = *c.last().unwrap() as f64;
    let monic: Vec<f64> = c.iter().map(|&x| x as f64 / lead).collect();
    let d = c.len() - 1;
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..5000 {
        let mut moved = 0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 {
            return Some(z);
        }
    }
    None
}

/// Random integer polynomials, compared with double-precision root finding.
#[test]
fn integer_polynomials_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut compared = 0;
    for _ in 0..300 {
        let deg = rng.gen_range(1..=8);
        let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        if c[deg] == 0 {
            c[deg] = 1;
        }
        let q = QPoly::from_i64(&c);
        if q.squarefree().deg() != deg {
            continue;
        }
        let Some(roots) = brute_force_roots(&c) else { continue };
        let r = Rational::ratio(rng.gen_range(1..=12), 4);
        let rf = r.to_f64();
        if roots.iter().any(|z| (z.norm() - rf).abs() < 1e-6) {
            continue;
        }
        let expected = roots.iter().filter(|z| z.norm() < rf).count();
        let p = AlgPoly::from_qpoly(q.clone());
        assert_eq!(p.count_roots_in_disk(&r).unwrap(), expected, "{c:?} in |z| < {r}");

        let h = Rational::ratio(rng.gen_range(1..=8), 2);
        let bx = ComplexBox::from_bounds(-h.clone(), h.clone(), -h.clone(), h.clone()).unwrap();
        let hf = h.to_f64();
        if roots.iter().any(|z| ((z.re.abs() - hf).abs() < 1e-6) || ((z.im.abs() - hf).abs() < 1e-6)) {
            continue;
        }
        let expected = roots.iter().filter(|z| z.re.abs() < hf && z.im.abs() < hf).count();
        assert_eq!(count_roots_in_box_exact(&q, &bx).unwrap(), expected, "{c:?} in box {bx}");
        compared += 1;
    }
    assert!(compared > 200, "only {compared} polynomials compared");
}
