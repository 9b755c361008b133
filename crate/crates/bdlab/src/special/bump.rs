//! The fixed bump `U(x) = exp(-1/((x-1)(2-x)))` on `(1, 2)` and its Mellin
//! transform.

use num_complex::Complex64;

use super::SpecialError;
use crate::quad::{integrate, QuadOptions, WithFreq};

#[inline]
pub fn bump_u(x: f64) -> f64 {
    if x <= 1.0 || x >= 2.0 {
        return 0.0;
    }
    (-1.0 / ((x - 1.0) * (2.0 - x))).exp()
}

/// `U'(x) = U g' / g^2` with `g = (x-1)(2-x)`.
#[inline]
pub fn bump_u_d1(x: f64) -> f64 {
    if x <= 1.0 || x >= 2.0 {
        return 0.0;
    }
    let g = (x - 1.0) * (2.0 - x);
    let g1 = 3.0 - 2.0 * x;
    bump_u(x) * g1 / (g * g)
}

/// `U''(x) = U (g'^2/g^4 - 2 g'^2/g^3 + g''/g^2)` with `g'' = -2`.
#[inline]
pub fn bump_u_d2(x: f64) -> f64 {
    if x <= 1.0 || x >= 2.0 {
        return 0.0;
    }
    let g = (x - 1.0) * (2.0 - x);
    let g1 = 3.0 - 2.0 * x;
    let g2 = g * g;
    bump_u(x) * (g1 * g1 / (g2 * g2) - 2.0 * g1 * g1 / (g2 * g) - 2.0 / g2)
}

/// Evaluators for `U` plus the two Mellin values used everywhere else.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpU {
    mellin_one: f64,
    mellin_three_quarters: f64,
}

/// Builds `U` and caches `U~(1)` and `U~(3/4)`.
pub fn make_bump_u() -> BumpU {
    let one = mellin_raw(Complex64::new(1.0, 0.0), 1e-15).expect("Mellin transform of U at s = 1");
    let tq = mellin_raw(Complex64::new(0.75, 0.0), 1e-15).expect("Mellin transform of U at s = 3/4");
    BumpU { mellin_one: one.re, mellin_three_quarters: tq.re }
}

/// `U~(s) = integral of U(x) x^{s-1} over [1, 2]`, converged to `1e-10`.
pub fn mellin_u(_u: &BumpU, s: Complex64) -> Result<Complex64, SpecialError> {
    mellin_raw(s, 1e-12)
}

fn mellin_raw(s: Complex64, rel_tol: f64) -> Result<Complex64, SpecialError> {
    let f = WithFreq {
        f: |x: f64| bump_u(x) * ((s - 1.0) * x.ln()).exp(),
        freq: |x: f64| s.im.abs() / (std::f64::consts::TAU * x),
    };
    let opts = QuadOptions::with_tol(0.0, rel_tol).breakpoints(&[1.5]);
    let r = integrate(&f, 1.0, 2.0, &opts);
    if r.converged {
        Ok(r.value)
    } else {
        Err(SpecialError::MellinNotConverged {
            s,
            trace: format!("{} panels, {} evaluations, error estimate {:e}", r.panels, r.evaluations, r.err_estimate),
        })
    }
}

impl BumpU {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        bump_u(x)
    }

    #[inline]
    pub fn d1(&self, x: f64) -> f64 {
        bump_u_d1(x)
    }

    #[inline]
    pub fn d2(&self, x: f64) -> f64 {
        bump_u_d2(x)
    }

    /// `U~(1)`, the integral of `U`.
    pub fn integral(&self) -> f64 {
        self.mellin_one
    }

    pub fn mellin_three_quarters(&self) -> f64 {
        self.mellin_three_quarters
    }

    /// `C_U = (1 + i) / U~(3/4)`.
    pub fn c_u(&self) -> Complex64 {
        Complex64::new(1.0, 1.0) / self.mellin_three_quarters
    }

    /// Total variation `integral |U'| = 2 U(3/2) = 2 e^{-4}`.
    pub fn total_variation(&self) -> f64 {
        2.0 * (-4.0f64).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_centre() {
        assert_eq!(bump_u(1.0), 0.0);
        assert_eq!(bump_u(2.0), 0.0);
        assert_eq!(bump_u(1.5), (-4.0f64).exp());
        assert_eq!(bump_u(0.3), 0.0);
    }

    #[test]
    fn mellin_values_match_reference() {
        let u = make_bump_u();
        // 40-digit references
        assert!((u.integral() / 0.007_029_858_406_609_656 - 1.0).abs() < 1e-12);
        assert!((u.mellin_three_quarters() / 0.006_360_738_631_456_451 - 1.0).abs() < 1e-12);
        assert!(u.mellin_three_quarters() > 0.0);
    }

    #[test]
    fn derivatives_match_differences() {
        for &x in &[1.1, 1.3, 1.5, 1.77, 1.9] {
            let h = 1e-5;
            let d1 = (bump_u(x + h) - bump_u(x - h)) / (2.0 * h);
            let d2 = (bump_u(x + h) - 2.0 * bump_u(x) + bump_u(x - h)) / (h * h);
            assert!((d1 - bump_u_d1(x)).abs() < 1e-8, "x={x}");
            assert!((d2 - bump_u_d2(x)).abs() < 1e-4, "x={x}");
        }
    }
}
