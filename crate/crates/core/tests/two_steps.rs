//! Steps 1 and 2 with seed 1: certificates, verification and tail bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use entireforge::engine::{run_checked, tail_bound, verify_run};
use entireforge::exact::{Ball, Mag, Rational};
use entireforge::persist::{cert_from_json, cert_to_json, state_from_json, state_to_json};

#[test]
fn two_steps_certify_and_verify() {
    let (state, certs) = run_checked(2, 1).unwrap();
    let c = &certs[1];
    assert_eq!(c.radius, Rational::ratio(15, 4));
    assert_eq!(c.p.degree, 449);
    assert_eq!(state.f.deg(), 452);
    assert!(c.p.coeffs.is_none(), "P_3 is above the inline threshold");
    assert_eq!(state.prefix()[1], Rational::ratio(1, 57601));
    assert!(certs.iter().all(|c| c.condition_iv_margin.is_positive()));
    assert!(certs.iter().flat_map(|c| &c.rouche_margins).all(Rational::is_positive));
    assert!(certs.iter().flat_map(|c| &c.alphas).all(|a| a.count_before == a.count_after));

    let report = verify_run(&state, &certs);
    let failures: Vec<_> = report.failures().collect();
    assert!(failures.is_empty(), "{failures:?}");

    // Files survive a round trip unchanged and verify again.
    let text = state_to_json(&state);
    let back = state_from_json(&text).unwrap();
    assert_eq!(state_to_json(&back), text);
    let certs_back: Vec<_> = certs.iter().map(|c| cert_from_json(&cert_to_json(c)).unwrap()).collect();
    for (a, b) in certs.iter().zip(&certs_back) {
        assert_eq!(cert_to_json(a), cert_to_json(b));
    }

    // |f_3 - f_2| <= (1/3)^{3 + deg P_3} on |z| <= 1, at random points.
    let bound = Rational::ratio(1, 3).pow(3 + 449);
    let f2 = state.f_form(2);
    let f3 = state.f_form(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 20 {
        let (x, y) = (Rational::ratio(rng.gen_range(-1000..=1000), 1000), Rational::ratio(rng.gen_range(-1000..=1000), 1000));
        if &x * &x + &y * &y > Rational::one() {
            continue;
        }
        let prec = 2048;
        let z = Ball::from_rational(&x, &y, prec);
        let d = f3.eval_ball(&z, prec).sub(&f2.eval_ball(&z, prec), prec);
        let hi = Mag::from_dy_upper(&d.abs_upper(prec)).to_rational();
        assert!(hi <= bound, "at {x} + {y} i");
        tested += 1;
    }
    let t = tail_bound(&state, 2, &Rational::one()).unwrap();
    assert_eq!(t.built, bound);
    assert!(t.certified());
}
