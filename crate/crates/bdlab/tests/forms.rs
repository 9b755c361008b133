use std::collections::BTreeMap;

use bdlab::forms::{
    coefficients_11a, coefficients_delta, divisor_counts, hecke_extend, qseries, ramanujan_report, FormsError,
};
use proptest::prelude::*;
use std::sync::OnceLock;

// tau(n) from 756 tau = 65 s11 + 691 s5 - 691*252 sum s5(k) s5(n-k), an
// identity independent of the product expansion
const TAU_REF: &[(usize, i128)] = &[
    (97, 75013568546),
    (100, 37534859200),
    (720, -541834695843840),
    (1000, -30328412970240000),
    (2310, 261491051450603520),
    (4999, -384969625179145057000),
    (9973, -808737643658836893778),
    (10000, -482606811957501440000),
];

fn delta_1e4() -> &'static bdlab::forms::CoefficientTable {
    static T: OnceLock<bdlab::forms::CoefficientTable> = OnceLock::new();
    T.get_or_init(|| coefficients_delta(10_000).unwrap())
}

fn level11_1e4() -> &'static bdlab::forms::CoefficientTable {
    static T: OnceLock<bdlab::forms::CoefficientTable> = OnceLock::new();
    T.get_or_init(|| coefficients_11a(10_000).unwrap())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn tau_matches_divisor_sum_identity() {
    let a = delta_1e4().integers().unwrap();
    for &(n, v) in TAU_REF {
        assert_eq!(a[n], v, "tau({n})");
    }
}

#[test]
fn level11_matches_eta_product() {
    let t = coefficients_11a(1000).unwrap();
    let eta = qseries::eta_product_11(1000).unwrap();
    let a = t.integers().unwrap();
    for n in 1..=1000 {
        assert_eq!(a[n], eta[n - 1], "a({n})");
    }
}

#[test]
fn hecke_extension_reproduces_delta() {
    let t = delta_1e4();
    let a = t.integers().unwrap();
    let mut pv = BTreeMap::new();
    for p in bdlab::forms::primes_up_to(2000) {
        pv.insert(p, a[p as usize]);
    }
    let ext = hecke_extend(&pv, 1, 12, 2000).unwrap();
    assert_eq!(ext.integers().unwrap(), &a[..=2000]);
    // lambda(4) = lambda(2)^2 - 1 and lambda(12) = lambda(4) lambda(3)
    assert!((t.lambda(4) - (t.lambda(2).powi(2) - 1.0)).abs() < 1e-14);
    assert!((t.lambda(12) - t.lambda(4) * t.lambda(3)).abs() < 1e-14);
}

#[test]
fn deligne_bound_both_forms() {
    for t in [delta_1e4(), level11_1e4()] {
        let r = ramanujan_report(t);
        assert!(r.max_ratio <= 1.0 + 1e-12, "{}: {}", t.descriptor().label, r.max_ratio);
        assert!(r.pass, "{:?}", r.mean_square);
        assert!(!r.mean_square.is_empty());
    }
}

#[test]
fn lambda_one_is_one() {
    assert_eq!(delta_1e4().lambda(1), 1.0);
    assert_eq!(level11_1e4().lambda(1), 1.0);
    let d = divisor_counts(1);
    assert_eq!(d[1], 1);
}

#[test]
fn errors_are_descriptive() {
    assert_eq!(coefficients_delta(0).unwrap_err(), FormsError::EmptyTable);
    let msg = FormsError::Overflow { n: 123 }.to_string();
    assert!(msg.contains("123"));
    assert_eq!(bdlab::forms::curve::trace_of_frobenius(91), Err(FormsError::NotPrime(91)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplicative_on_coprime_pairs(m in 1usize..=100, n in 1usize..=100) {
        prop_assume!(gcd(m, n) == 1);
        for t in [delta_1e4(), level11_1e4()] {
            let a = t.integers().unwrap();
            prop_assert_eq!(a[m * n], a[m] * a[n]);
            let lhs = t.lambda(m * n);
            let rhs = t.lambda(m) * t.lambda(n);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
    }
}
