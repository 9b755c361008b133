use bdlab::quad::{e, integrate, integrate_oscillatory, QuadOptions, WithFreq};
use bdlab::special::{bump_u, make_bump_u};
use num_complex::Complex64;
use proptest::prelude::*;

/// Midpoint rule with `n` points; spectrally accurate for integrands that
/// vanish to all orders at both ends.
fn midpoint(f: impl Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        s += f(a + (i as f64 + 0.5) * h);
    }
    s * h
}

#[test]
fn zero_phase_gives_integral_of_bump() {
    let u = make_bump_u();
    let r = integrate_oscillatory(|x| Complex64::new(bump_u(x), 0.0), |_| 0.0, None, 1.0, 2.0, &QuadOptions::default());
    assert!(r.converged);
    assert!((r.value.re - u.integral()).abs() <= 1e-10 * u.integral());
    assert_eq!(r.value.im, 0.0);
}

#[test]
fn fresnel_against_corrected_trapezoid() {
    // integral_0^1 e(50 x^2) dx; trapezoid with the first Euler-Maclaurin
    // correction on 10^6 intervals
    let f = |x: f64| e(50.0 * x * x);
    let df = |x: f64| Complex64::new(0.0, std::f64::consts::TAU * 100.0 * x) * f(x);
    let n = 1_000_000;
    let h = 1.0 / n as f64;
    let mut s = 0.5 * (f(0.0) + f(1.0));
    for i in 1..n {
        s += f(i as f64 * h);
    }
    let oracle = s * h - (df(1.0) - df(0.0)) * (h * h / 12.0);
    let r = integrate_oscillatory(|_| Complex64::new(1.0, 0.0), |x| 50.0 * x * x, Some(&|x| 100.0 * x), 0.0, 1.0, &QuadOptions::default());
    assert!((r.value - oracle).norm() < 1e-10, "{} vs {}", r.value, oracle);
}

#[test]
fn fast_phase_on_bump_is_negligible() {
    let r = integrate_oscillatory(|x| Complex64::new(bump_u(x), 0.0), |x| 1e4 * x, Some(&|_| 1e4), 1.0, 2.0, &QuadOptions::with_tol(1e-18, 1e-12));
    assert!(r.value.norm() <= 1e-8);
    let brute = midpoint(|x| bump_u(x) * e(1e4 * x), 1.0, 2.0, 1_000_000);
    assert!(brute.norm() <= 1e-8);
}

#[test]
fn refinement_error_is_monotone() {
    // uniform partitions of P and 2P panels, starting at two wavelengths per
    // panel: the merged-pair estimate must not grow when the partition doubles
    for &(lam, c) in &[(30.0, 0.3), (80.0, -0.7), (150.0, 1.1)] {
        let g = |x: f64| bump_u(x) * e(lam * x * x + c * x);
        let max_freq = 4.0 * lam + c.abs();
        let start = ((max_freq / 2.0).ceil() as usize).next_power_of_two();
        let mut last = f64::INFINITY;
        for panels in (0..5).map(|j| start << j) {
            let opts = QuadOptions { min_panels: panels, max_panels: panels, ..QuadOptions::with_tol(0.0, 0.0) };
            let r = integrate(&g, 1.0, 2.0, &opts);
            assert!(r.err_estimate <= last * 1.0001 + 1e-16, "lam={lam} panels={panels}: {} after {}", r.err_estimate, last);
            last = r.err_estimate;
        }
    }
}

#[test]
fn scaling_the_amplitude_scales_the_result() {
    let c = Complex64::new(-2.5, 0.75);
    let opts = QuadOptions::default();
    let a = integrate_oscillatory(|x| Complex64::new(bump_u(x), 0.0), |x| 40.0 * x.ln(), None, 1.0, 2.0, &opts);
    let b = integrate_oscillatory(|x| c * bump_u(x), |x| 40.0 * x.ln(), None, 1.0, 2.0, &opts);
    // relative to the natural scale |c| integral |g|; the oscillating
    // integral itself cancels by a factor of about 10^6
    assert!((b.value - c * a.value).norm() <= 1e-12 * c.norm() * a.abs_integral);
    let d = integrate_oscillatory(|x| 2.0 * Complex64::new(bump_u(x), 0.0), |x| 40.0 * x.ln(), None, 1.0, 2.0, &opts);
    assert_eq!(d.value, 2.0 * a.value);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn matches_brute_force(a1 in -600.0f64..600.0, a2 in -150.0f64..150.0, a3 in -50.0f64..50.0, c in -0.5f64..0.5) {
        // |f'| <= 600 + 600 + 50 < 10^3 on [1, 2]
        let phase = move |x: f64| a1 * x + a2 * (x - 1.5) * (x - 1.5) + a3 * (3.0 * x).sin() / 3.0;
        let dphase = move |x: f64| a1 + 2.0 * a2 * (x - 1.5) + a3 * (3.0 * x).cos();
        let amp = move |x: f64| Complex64::new(bump_u(x) * (1.0 + c * x), c * x * bump_u(x));
        let g = WithFreq { f: move |x: f64| amp(x) * e(phase(x)), freq: move |x: f64| dphase(x).abs() };
        let r = integrate(&g, 1.0, 2.0, &QuadOptions::default());
        let brute = midpoint(|x| amp(x) * e(phase(x)), 1.0, 2.0, 1_000_000);
        prop_assert!(r.converged);
        prop_assert!((r.value - brute).norm() <= 1e-8, "{} vs {}", r.value, brute);
    }
}
