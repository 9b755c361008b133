use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::BesselDeltaError;
use crate::fit::{fit_power_law, PowerFit};
use crate::forms::i_pow;
use crate::quad::{e, integrate, QuadOptions, QuadResult, WithFreq};
use crate::special::{j_unchecked, BumpU, MAX_ARG, MAX_ORDER};

fn check_inputs(a: f64, b: f64, x_scale: f64, k: u32) -> Result<(), BesselDeltaError> {
    if k < 2 || k - 1 > MAX_ORDER {
        return Err(BesselDeltaError::Hypothesis(format!("weight k = {k} must satisfy 2 <= k <= {}", MAX_ORDER + 1)));
    }
    if !(a >= 0.0 && b >= 0.0) {
        return Err(BesselDeltaError::Hypothesis(format!("a = {a} and b = {b} must be non-negative")));
    }
    if !(x_scale > 1.0) {
        return Err(BesselDeltaError::Hypothesis(format!("X = {x_scale} must exceed 1")));
    }
    let arg = 4.0 * std::f64::consts::PI * b * (2.0 * x_scale).sqrt();
    if arg > MAX_ARG {
        return Err(BesselDeltaError::Hypothesis(format!("Bessel argument {arg:e} exceeds {MAX_ARG:e}")));
    }
    Ok(())
}

/// `I_k(a, b; X)` computed as `X integral_1^2 U(u) e(2a sqrt(Xu)) J_{k-1}(4 pi b sqrt(Xu)) du`.
pub fn bessel_integral(a: f64, b: f64, x_scale: f64, k: u32, u: &BumpU) -> Result<QuadResult, BesselDeltaError> {
    bessel_integral_signed(a, b, x_scale, k, u, 1.0, &QuadOptions::with_tol(0.0, 1e-12))
}

/// Same as [`bessel_integral`] with `e(2a sqrt x)` replaced by
/// `e(sign 2a sqrt x)` and explicit quadrature options. The value is
/// returned unscaled in `x`, i.e. already multiplied by `X`.
pub fn bessel_integral_signed(
    a: f64,
    b: f64,
    x_scale: f64,
    k: u32,
    u: &BumpU,
    sign: f64,
    opts: &QuadOptions,
) -> Result<QuadResult, BesselDeltaError> {
    check_inputs(a, b, x_scale, k)?;
    let nu = k - 1;
    let sx = x_scale.sqrt();
    let two_pi_b = 4.0 * std::f64::consts::PI * b * sx;
    let g = WithFreq {
        f: |t: f64| {
            let st = t.sqrt();
            u.eval(t) * e(sign * 2.0 * a * sx * st) * j_unchecked(nu, two_pi_b * st)
        },
        freq: |t: f64| (a + b) * sx / t.sqrt(),
    };
    let r = integrate(&g, 1.0, 2.0, opts);
    Ok(QuadResult {
        value: r.value * x_scale,
        err_estimate: r.err_estimate * x_scale,
        abs_integral: r.abs_integral * x_scale,
        ..r
    })
}

fn require_converged(r: &QuadResult, what: impl FnOnce() -> String) -> Result<(), BesselDeltaError> {
    if r.converged {
        Ok(())
    } else {
        Err(BesselDeltaError::Quadrature { what: what(), err: r.err_estimate, panels: r.panels })
    }
}

/// `(1 + i) i^{k-1} U~(3/4) X / (4 pi (a^2 X)^{1/4})`.
pub fn diagonal_main_term(a: f64, x_scale: f64, k: u32, u: &BumpU) -> Complex64 {
    Complex64::new(1.0, 1.0) * i_pow(k as i64 - 1) * u.mellin_three_quarters() * x_scale
        / (4.0 * std::f64::consts::PI * (a * a * x_scale).powf(0.25))
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalRow {
    pub x: f64,
    pub value: Complex64,
    pub main: Complex64,
    pub difference: f64,
    /// `X / (a^2 X)^{3/4}`.
    pub error_scale: f64,
    pub constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalReport {
    pub a: f64,
    pub k: u32,
    pub rows: Vec<DiagonalRow>,
    /// Fit of `|I - main|` against `X`; `1/4` expected.
    pub fit: PowerFit,
    pub max_constant: f64,
    pub pass: bool,
}

/// Compares `I_k(a, a; X)` with the main term over `x_grid`.
pub fn verify_diagonal_asymptotic(k: u32, u: &BumpU, a: f64, x_grid: &[f64]) -> Result<DiagonalReport, BesselDeltaError> {
    if let Some(&x) = x_grid.iter().find(|&&x| a * a * x <= 10.0) {
        return Err(BesselDeltaError::Hypothesis(format!("a^2 X = {} must exceed 10", a * a * x)));
    }
    let rows = x_grid
        .par_iter()
        .map(|&x| {
            let r = bessel_integral(a, a, x, k, u)?;
            require_converged(&r, || format!("I_{k}({a}, {a}; {x})"))?;
            let main = diagonal_main_term(a, x, k, u);
            let difference = (r.value - main).norm();
            let error_scale = x / (a * a * x).powf(0.75);
            Ok(DiagonalRow { x, value: r.value, main, difference, error_scale, constant: difference / error_scale })
        })
        .collect::<Result<Vec<_>, BesselDeltaError>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
    let ds: Vec<f64> = rows.iter().map(|r| r.difference).collect();
    let fit = fit_power_law(&xs, &ds);
    let max_constant = rows.iter().map(|r| r.constant).fold(0.0, f64::max);
    let pass = fit.within(0.25, 0.1) && max_constant <= 100.0;
    Ok(DiagonalReport { a, k, rows, fit, max_constant, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct OffDiagonalCheck {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    /// `|a - b| sqrt(X)`.
    pub separation: f64,
    pub onset: f64,
    pub abs_value: f64,
    /// `|I| / X`.
    pub relative: f64,
    pub in_regime: bool,
    pub pass: bool,
}

/// Asserts `|I_k(a, b; X)| <= threshold X` whenever `|a - b| sqrt(X) >= onset`.
pub fn verify_offdiagonal_decay(
    k: u32,
    u: &BumpU,
    a: f64,
    b: f64,
    x_scale: f64,
    onset: f64,
    threshold: f64,
) -> Result<OffDiagonalCheck, BesselDeltaError> {
    if b * b * x_scale <= 1.0 {
        return Err(BesselDeltaError::Hypothesis(format!("b^2 X = {} must exceed 1", b * b * x_scale)));
    }
    let opts = QuadOptions::with_tol(1e-3 * threshold * x_scale, 1e-12);
    let r = bessel_integral_signed(a, b, x_scale, k, u, 1.0, &opts)?;
    require_converged(&r, || format!("I_{k}({a}, {b}; {x_scale})"))?;
    let separation = (a - b).abs() * x_scale.sqrt();
    let abs_value = r.value.norm();
    let relative = abs_value / x_scale;
    let in_regime = separation >= onset;
    Ok(OffDiagonalCheck {
        a,
        b,
        x: x_scale,
        separation,
        onset,
        abs_value,
        relative,
        in_regime,
        pass: !in_regime || relative <= threshold,
    })
}

/// Smallest separation `s` in the ascending grid from which on every
/// `b = a + s / sqrt(X)` has `|I| <= threshold X`.
pub fn measure_decay_onset(
    k: u32,
    u: &BumpU,
    a: f64,
    x_scale: f64,
    separations: &[f64],
    threshold: f64,
) -> Result<Option<f64>, BesselDeltaError> {
    let rel = separations
        .par_iter()
        .map(|&s| verify_offdiagonal_decay(k, u, a, a + s / x_scale.sqrt(), x_scale, 0.0, threshold).map(|c| c.relative))
        .collect::<Result<Vec<_>, _>>()?;
    let mut onset = None;
    for (&s, &r) in separations.iter().zip(&rel).rev() {
        if r > threshold {
            break;
        }
        onset = Some(s);
    }
    Ok(onset)
}
