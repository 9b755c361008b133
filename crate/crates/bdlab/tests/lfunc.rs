use std::sync::OnceLock;

use bdlab::forms::{coefficients_11a, coefficients_delta, CoefficientTable, FormLabel};
use bdlab::lfunc::{
    afe_lvalue, afe_value_at, analytic_conductor, dirichlet_direct, required_n_max, AfeMode, Cutoff, LfuncError, CUTOFF_NARROW,
    CUTOFF_WIDE,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn with_eta(t: CoefficientTable, eta: f64) -> CoefficientTable {
    let d = t.descriptor().clone().with_eta(Complex64::new(eta, 0.0)).unwrap();
    t.with_descriptor(d)
}

/// Long enough for every t used below with either cutoff.
fn sized(label: FormLabel) -> usize {
    required_n_max(&label.descriptor(), 200.0, CUTOFF_WIDE)
}

fn delta() -> &'static CoefficientTable {
    static T: OnceLock<CoefficientTable> = OnceLock::new();
    T.get_or_init(|| with_eta(coefficients_delta(sized(FormLabel::Delta)).unwrap(), 1.0))
}

fn level11() -> &'static CoefficientTable {
    static T: OnceLock<CoefficientTable> = OnceLock::new();
    T.get_or_init(|| with_eta(coefficients_11a(sized(FormLabel::Level11)).unwrap(), -1.0))
}

#[test]
fn central_values() {
    for (t, want) in [(delta(), 0.792122838646031), (level11(), 0.253841860855913)] {
        let (v, _) = afe_value_at(t, Complex64::new(0.5, 0.0), CUTOFF_NARROW).unwrap();
        assert!((v.re - want).abs() < 1e-12 && v.im.abs() < 1e-12, "{v}");
    }
}

#[test]
fn dirichlet_series_in_the_absolute_convergence_region() {
    let s = Complex64::new(2.0, 7.3);
    for t in [delta(), level11()] {
        let (afe, _) = afe_value_at(t, s, CUTOFF_WIDE).unwrap();
        let (direct, _) = dirichlet_direct(t, s).unwrap();
        assert!((afe - direct).norm() < 1e-7, "{afe} vs {direct}");
    }
    assert!(matches!(dirichlet_direct(delta(), Complex64::new(1.0, 0.0)), Err(LfuncError::Config(_))));
}

#[test]
fn uncalibrated_and_short_tables_are_rejected() {
    let raw = coefficients_delta(100).unwrap();
    assert_eq!(afe_lvalue(&raw, 10.0, CUTOFF_NARROW, AfeMode::Exact).unwrap_err(), LfuncError::Uncalibrated);
    let short = with_eta(coefficients_delta(100).unwrap(), 1.0);
    assert!(matches!(afe_lvalue(&short, 300.0, CUTOFF_NARROW, AfeMode::Exact), Err(LfuncError::TableTooShort { .. })));
    assert!(afe_lvalue(delta(), 10.0, Cutoff::Erfc { width: 0.01 }, AfeMode::Exact).is_err());
}

#[test]
fn predicted_table_size_covers_the_truncation() {
    for t in [10.0, 100.0, 200.0] {
        for c in [CUTOFF_NARROW, CUTOFF_WIDE] {
            let p = afe_lvalue(level11(), t, c, AfeMode::Exact).unwrap();
            assert!(p.truncation_n <= required_n_max(level11().descriptor(), t, c));
        }
    }
}

#[test]
fn literal_mode_stays_near_the_exact_value() {
    let t = 150.0;
    let exact = afe_lvalue(delta(), t, CUTOFF_NARROW, AfeMode::Exact).unwrap();
    let literal = afe_lvalue(delta(), t, CUTOFF_NARROW, AfeMode::Literal).unwrap();
    let envelope = 10.0 / analytic_conductor(delta().descriptor(), t).powf(0.25);
    assert!((exact.value - literal.value).norm() < envelope);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn cutoffs_agree_and_conjugation_holds(t in 1.0f64..150.0) {
        for table in [delta(), level11()] {
            let a = afe_lvalue(table, t, CUTOFF_NARROW, AfeMode::Exact).unwrap().value;
            let b = afe_lvalue(table, t, CUTOFF_WIDE, AfeMode::Exact).unwrap().value;
            let (c, _) = afe_value_at(table, Complex64::new(0.5, -t), CUTOFF_NARROW).unwrap();
            let scale = a.norm().max(1e-3);
            prop_assert!((a - b).norm() <= 1e-8 * scale, "t = {t}: {a} vs {b}");
            prop_assert!((a - c.conj()).norm() <= 1e-8 * scale);
        }
    }
}
