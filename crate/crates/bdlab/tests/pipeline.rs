use std::sync::OnceLock;

use bdlab::forms::{coefficients_delta, CoefficientTable};
use bdlab::pipeline::{
    calibrate_table, congruence_residue, kloosterman, mod_inverse, poisson_r_identity_check, s_decomposed, s_direct, s_sharp,
    split_congruence, voronoi_check, DecompositionConfig, JSetup, KloostermanTable, PhaseSpec, Phi, PipelineError, TestFunction,
    VNatural, WeightedPhase,
};
use bdlab::special::make_weight_v;
use num_complex::Complex64;
use proptest::prelude::*;

const PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 29, 31, 101];

fn delta_calibrated() -> &'static CoefficientTable {
    static T: OnceLock<CoefficientTable> = OnceLock::new();
    T.get_or_init(|| {
        let t = coefficients_delta(9000).unwrap();
        calibrate_table(&t, &[5, 7], &TestFunction::bump(1000.0)).unwrap().0
    })
}

#[test]
fn delta_calibrates_to_plus_one() {
    assert_eq!(delta_calibrated().descriptor().eta(), Some(Complex64::new(1.0, 0.0)));
}

#[test]
fn voronoi_holds_for_delta() {
    let r = voronoi_check(delta_calibrated(), 3, 7, &TestFunction::bump(1000.0)).unwrap();
    assert!(r.pass && r.relative_residual < 1e-8, "{r:?}");
}

#[test]
fn voronoi_needs_calibration_and_a_long_enough_table() {
    let short = coefficients_delta(500).unwrap();
    assert!(calibrate_table(&short, &[5], &TestFunction::bump(1000.0)).is_err());
    let uncal = coefficients_delta(3000).unwrap();
    assert!(matches!(voronoi_check(&uncal, 1, 5, &TestFunction::bump(1000.0)), Err(PipelineError::Uncalibrated)));
}

#[test]
fn phase_validation() {
    assert!(PhaseSpec::new(0.5, 0.0, 100.0, Phi::NegLog).is_err());
    assert!(PhaseSpec::new(10.0, 0.0, 100.0, Phi::Power { beta: 1.0, sign: 1.0 }).is_err());
    assert!(PhaseSpec::new(10.0, 0.0, 100.0, Phi::Power { beta: 2.0, sign: 0.5 }).is_err());
    let p = PhaseSpec::new(10.0, 0.0, 100.0, Phi::NegLog).unwrap();
    // N^eps Delta <= T
    assert!(WeightedPhase::new(p, make_weight_v(20.0, 2.0).unwrap(), 0.05).is_err());
}

#[test]
fn sharp_sum_at_zero_phase_is_the_coefficient_sum() {
    let t = delta_calibrated();
    let p = PhaseSpec::new(0.0, 0.0, 1000.0, Phi::NegLog).unwrap();
    let want: f64 = (1000..=2000).map(|n| t.lambda(n)).sum();
    assert!((s_sharp(t, &p).unwrap() - want).norm() < 1e-12);
}

#[test]
fn integer_gamma_does_not_change_the_smooth_sum() {
    let t = delta_calibrated();
    let v = make_weight_v(4.0, 2.0).unwrap();
    let a = PhaseSpec::new(200.0, 0.0, 1000.0, Phi::NegLog).unwrap();
    let b = PhaseSpec::new(200.0, 5.0, 1000.0, Phi::NegLog).unwrap();
    let sa = s_direct(t, &WeightedPhase::new(a, v.clone(), 0.05).unwrap()).unwrap();
    let sb = s_direct(t, &WeightedPhase::new(b, v, 0.05).unwrap()).unwrap();
    assert!((sa - sb).norm() < 1e-9 * sa.norm().max(1.0));
}

#[test]
fn poisson_identity_one_configuration() {
    let desc = delta_calibrated().descriptor().clone();
    let weight = VNatural::new(make_weight_v(4.0, 2.0).unwrap(), &desc).unwrap();
    let phase = PhaseSpec::new(1000.0, 0.0, 1000.0, Phi::NegLog).unwrap();
    let r = poisson_r_identity_check(&JSetup { phase, weight, level: 1.0 }, 50_000, 31).unwrap();
    assert!(r.pass && r.relative_difference < 1e-8, "{r:?}");
}

#[test]
fn poisson_identity_with_zero_weight_is_zero() {
    let phase = PhaseSpec::new(1000.0, 0.0, 1000.0, Phi::NegLog).unwrap();
    let weight = VNatural::zero(make_weight_v(4.0, 2.0).unwrap());
    let r = poisson_r_identity_check(&JSetup { phase, weight, level: 1.0 }, 50_000, 31).unwrap();
    assert_eq!(r.lhs, Complex64::new(0.0, 0.0));
    assert_eq!(r.rhs, Complex64::new(0.0, 0.0));
}

#[test]
fn decomposition_with_zero_amplitude_vanishes() {
    let phase = PhaseSpec::new(200.0, 0.0, 1000.0, Phi::NegLog).unwrap();
    let wp = WeightedPhase::new(phase, make_weight_v(4.0, 2.0).unwrap(), 0.05).unwrap();
    let mut cfg = DecompositionConfig::new(20.0, 50.0);
    cfg.enforce_hypotheses = false;
    cfg.amplitude = 0.0;
    let r = s_decomposed(delta_calibrated(), &wp, &cfg, 10.0).unwrap();
    assert_eq!(r.residual, 0.0);
    assert!(!r.violated.is_empty());
}

#[test]
fn decomposition_enforces_its_hypotheses() {
    let phase = PhaseSpec::new(200.0, 0.0, 1000.0, Phi::NegLog).unwrap();
    let wp = WeightedPhase::new(phase, make_weight_v(4.0, 2.0).unwrap(), 0.05).unwrap();
    let r = s_decomposed(delta_calibrated(), &wp, &DecompositionConfig::new(20.0, 50.0), 10.0);
    assert!(matches!(r, Err(PipelineError::Hypothesis(_))));
}

#[test]
fn kloosterman_rejects_composite_moduli() {
    assert!(matches!(kloosterman(1, 1, 15), Err(PipelineError::NotPrime(15))));
    assert!(KloostermanTable::new(21).is_err());
}

proptest! {
    #[test]
    fn kloosterman_symmetric_and_weil(n in -500i64..500, r in -500i64..500, i in 0usize..8) {
        let p = PRIMES[i];
        let s = kloosterman(n, r, p).unwrap();
        prop_assert!((s - kloosterman(r, n, p).unwrap()).abs() < 1e-9);
        if (n * r).rem_euclid(p as i64) != 0 {
            prop_assert!(s.abs() <= 2.0 * (p as f64).sqrt() + 1e-9);
        }
    }

    #[test]
    fn kloosterman_depends_on_the_product(n in 1i64..300, r in 1i64..300, i in 0usize..8) {
        let p = PRIMES[i];
        prop_assume!(n % p as i64 != 0);
        let a = kloosterman(n, r, p).unwrap();
        let b = kloosterman(1, n * r, p).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn congruence_split_inverts(n in 1i64..100_000, i in 0usize..8, j in 0usize..8) {
        let (p1, p2) = (PRIMES[i] as i64, PRIMES[j] as i64);
        prop_assume!(p1 != p2 && n % p1 != 0 && n % p2 != 0);
        let (r1, r2) = split_congruence(n, p1, p2).unwrap();
        prop_assert_eq!(congruence_residue(r1, r2, p1, p2).unwrap(), n.rem_euclid(p1 * p2));
    }

    #[test]
    fn inverse_is_an_inverse(a in 1i64..10_000, i in 0usize..8) {
        let p = PRIMES[i] as i64;
        prop_assume!(a % p != 0);
        prop_assert_eq!((a * mod_inverse(a, p).unwrap()).rem_euclid(p), 1);
    }
}
