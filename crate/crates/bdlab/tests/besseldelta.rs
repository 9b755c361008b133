use bdlab::besseldelta::{
    bessel_integral, bessel_integral_signed, delta_identity, diagonal_main_term, verify_offdiagonal_decay, weber_identity_check, DeltaParams,
};
use bdlab::quad::QuadOptions;
use bdlab::special::make_bump_u;
use proptest::prelude::*;

#[test]
fn weber_identity_on_two_samples() {
    for (a, b, x, k) in [(1.0, 1.05, 100.0, 12), (0.3, 0.26, 400.0, 2)] {
        let r = weber_identity_check(a, b, x, k).unwrap();
        assert!(r.relative_difference < 1e-10, "{r:?}");
    }
}

#[test]
fn diagonal_integral_approaches_main_term() {
    let u = make_bump_u();
    let x = 4000.0;
    let i = bessel_integral(1.0, 1.0, x, 12, &u).unwrap();
    let main = diagonal_main_term(1.0, x, 12, &u);
    // error O(X^{1/4}) with a small constant
    assert!((i.value - main).norm() < 0.01 * x.powf(0.25), "{:?} vs {main}", i.value);
}

#[test]
fn far_offdiagonal_integral_is_negligible() {
    let u = make_bump_u();
    let x = 1e4f64;
    let onset = 10.0 * x.powf(0.05);
    let c = verify_offdiagonal_decay(12, &u, 1.0, 1.0 + 3.0 * onset / x.sqrt(), x, onset, 1e-8).unwrap();
    assert!(c.in_regime && c.pass, "{c:?}");
}

#[test]
fn delta_params_check_hypotheses() {
    let u = make_bump_u();
    assert!(DeltaParams::new(30, 1e3, 1e6, 12, 0.05, u).is_err(), "p must be prime");
    assert!(DeltaParams::new(31, 1e3, 1e6, 12, 0.05, u).is_ok());
}

#[test]
fn delta_identity_vanishes_off_the_congruence() {
    let p = DeltaParams::new(31, 1e3, 1e6, 12, 0.05, make_bump_u()).unwrap();
    assert_eq!(delta_identity(1000, 1001, &p).unwrap().norm(), 0.0);
    let d = delta_identity(1000, 1000, &p).unwrap();
    assert!((d - 1.0).norm() < 10.0 * p.error_scale(), "{d}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn flipping_the_sign_conjugates(a in 0.5f64..2.0, b in 0.5f64..2.0) {
        let u = make_bump_u();
        let opts = QuadOptions::with_tol(0.0, 1e-12);
        let plus = bessel_integral(a, b, 500.0, 12, &u).unwrap().value;
        let minus = bessel_integral_signed(a, b, 500.0, 12, &u, -1.0, &opts).unwrap().value;
        prop_assert!((plus - minus.conj()).norm() <= 1e-9 * plus.norm().max(1.0));
    }
}
