//! Numerical checks of the stationary-phase toolkit: non-stationary decay,
//! the one- and two-dimensional second derivative tests and the
//! stationary-phase scaling in the frequency parameter.
//!
//! Families with a stationary point are centred at `x = 3/2` so that it lies
//! inside the support `[1, 2]` of the bump.

use num_complex::Complex64;
use serde::Serialize;

use super::{e, integrate, integrate_2d, QuadOptions, WithFreq};
use crate::fit::{fit_power_law, PowerFit};
use crate::special::{bump_u, bump_u_d1};

fn opts() -> QuadOptions {
    QuadOptions::with_tol(1e-300, 1e-13)
}

/// Total variation of the bump, `2 U(3/2)`.
fn bump_variation() -> f64 {
    2.0 * (-4.0f64).exp()
}

fn osc_1d(w: impl Fn(f64) -> f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, a: f64, b: f64) -> Complex64 {
    let g = WithFreq { f: |x: f64| w(x) * e(f(x)), freq: |x: f64| df(x).abs() };
    integrate(&g, a, b, &opts()).value
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayRow {
    pub a: u32,
    pub r: f64,
    pub integral: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonstationaryReport {
    /// Bump weight with linear phase `R x` against
    /// `(b - a) Z (1/(RQ) + 1/(RU))^A` with `Q = U = 1`, `Z = U(3/2)`.
    pub rows: Vec<DecayRow>,
    /// Largest ratio per `A`; the empirical implied constant.
    pub fitted_constants: Vec<f64>,
    /// Weights `x^{A-1} (1-x)^6` on `[0, 1]` have exactly `A - 1` vanishing
    /// derivatives at 0, so their transforms decay like `R^{-A}` and test that
    /// the exponent in the bound is attained.
    pub sharpness: Vec<PowerFit>,
    /// `|I(2w) - 2 I(w)| / |I(w)|`.
    pub linearity_error: f64,
    pub pass: bool,
}

/// Non-stationary phase decay for `A = 1, 2, 3`.
pub fn check_nonstationary_decay(r_grid: &[f64], sharp_grid: &[f64]) -> NonstationaryReport {
    let z = (-4.0f64).exp();
    let mut rows = Vec::new();
    let mut fitted_constants = Vec::new();
    let mut bounded = true;
    let values: Vec<f64> = r_grid
        .iter()
        .map(|&r| osc_1d(bump_u, |x| r * x, |_| r, 1.0, 2.0).norm())
        .collect();
    for a in 1..=3u32 {
        let mut ratios = Vec::new();
        for (&r, &v) in r_grid.iter().zip(&values) {
            let bound = z * (2.0 / r).powi(a as i32);
            let ratio = v / bound;
            ratios.push(ratio);
            rows.push(DecayRow { a, r, integral: v, bound, ratio });
        }
        let c = ratios.iter().cloned().fold(0.0, f64::max);
        fitted_constants.push(c);
        // With Z = U(3/2) and Q = U = 1 the smooth family sits far below the
        // bound; once the transform reaches rounding level the ratio is noise
        // over a tiny bound, so uniformity is asserted as a fixed constant 1.
        if c > 1.0 {
            bounded = false;
        }
    }
    let mut sharpness = Vec::new();
    for a in 1..=3u32 {
        let w = move |x: f64| x.powi(a as i32 - 1) * (1.0 - x).powi(6);
        let ys: Vec<f64> = sharp_grid.iter().map(|&r| osc_1d(w, |x| r * x, |_| r, 0.0, 1.0).norm()).collect();
        sharpness.push(fit_power_law(sharp_grid, &ys));
    }
    let r0 = r_grid.first().copied().unwrap_or(10.0);
    let i1 = osc_1d(bump_u, |x| r0 * x, |_| r0, 1.0, 2.0);
    let i2 = osc_1d(|x| 2.0 * bump_u(x), |x| r0 * x, |_| r0, 1.0, 2.0);
    let linearity_error = (i2 - 2.0 * i1).norm() / i1.norm();
    let sharp_ok = sharpness.iter().enumerate().all(|(i, f)| f.within(-((i + 1) as f64), 0.1));
    NonstationaryReport {
        rows,
        fitted_constants,
        sharpness,
        linearity_error,
        pass: bounded && sharp_ok && linearity_error <= 1e-12,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondDerivRow {
    pub lambda: f64,
    pub beta: f64,
    pub integral: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondDerivReport {
    /// `f = lambda (x - 3/2)^2 / 2 + beta x`, `w = U`, against `4V/sqrt(pi lambda)`.
    pub rows: Vec<SecondDerivRow>,
    /// `|integral|` against `lambda` at `beta = 0`; expected exponent `-1/2`.
    pub scaling: PowerFit,
    pub zero_weight_value: f64,
    pub pass: bool,
}

/// The explicit one-dimensional second derivative bound.
pub fn check_second_derivative_test(lambdas: &[f64], beta_fractions: &[f64], scaling_lambdas: &[f64]) -> SecondDerivReport {
    let v = bump_variation();
    let mut rows = Vec::new();
    for &lambda in lambdas {
        for &bf in beta_fractions {
            let beta = bf * lambda;
            let f = |x: f64| 0.5 * lambda * (x - 1.5).powi(2) + beta * x;
            let df = |x: f64| lambda * (x - 1.5) + beta;
            let integral = osc_1d(bump_u, f, df, 1.0, 2.0).norm();
            let bound = 4.0 * v / (std::f64::consts::PI * lambda).sqrt();
            rows.push(SecondDerivRow { lambda, beta, integral, bound, holds: integral <= bound });
        }
    }
    let ys: Vec<f64> = scaling_lambdas
        .iter()
        .map(|&l| osc_1d(bump_u, |x| 0.5 * l * (x - 1.5).powi(2), |x| l * (x - 1.5), 1.0, 2.0).norm())
        .collect();
    let scaling = fit_power_law(scaling_lambdas, &ys);
    let zero_weight_value = osc_1d(|_| 0.0, |x| 50.0 * x * x, |x| 100.0 * x, 1.0, 2.0).norm();
    let pass = rows.iter().all(|r| r.holds) && scaling.within(-0.5, 0.05) && zero_weight_value == 0.0;
    SecondDerivReport { rows, scaling, zero_weight_value, pass }
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondDeriv2dRow {
    pub lambda: f64,
    pub rho: f64,
    pub integral: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondDeriv2dReport {
    /// `f = (lambda (x-3/2)^2 + rho (y-3/2)^2)/2`, `w = U(x) U(y)`, against
    /// `V / sqrt(lambda rho)` with `V = (integral |U'|)^2`.
    pub rows: Vec<SecondDeriv2dRow>,
    pub fitted_constant: f64,
    /// `lambda = rho` sweep; expected exponent `-1`.
    pub scaling: PowerFit,
    /// Iterated 2-d quadrature against the product of 1-d integrals for the
    /// separable phase at `lambda = rho = 100`.
    pub tensor_consistency: f64,
    /// Ratio for a non-separable phase with cross term `lambda (x-3/2)(y-3/2)/4`.
    pub mixed_ratio: f64,
    pub zero_weight_value: f64,
    pub pass: bool,
}

fn separable_2d(lambda: f64, rho: f64) -> Complex64 {
    let ix = osc_1d(bump_u, |x| 0.5 * lambda * (x - 1.5).powi(2), |x| lambda * (x - 1.5), 1.0, 2.0);
    let iy = osc_1d(bump_u, |y| 0.5 * rho * (y - 1.5).powi(2), |y| rho * (y - 1.5), 1.0, 2.0);
    ix * iy
}

fn nested_2d(lambda: f64, rho: f64, mu: f64, weight: f64) -> Complex64 {
    let f = |x: f64, y: f64| {
        let (u, v) = (x - 1.5, y - 1.5);
        weight * bump_u(x) * bump_u(y) * e(0.5 * lambda * u * u + 0.5 * rho * v * v + mu * u * v)
    };
    let fy = |x: f64, y: f64| (rho * (y - 1.5) + mu * (x - 1.5)).abs();
    let fx = |x: f64| lambda * (x - 1.5).abs() + mu.abs() * 0.5;
    integrate_2d(f, fy, fx, (1.0, 2.0), (1.0, 2.0), &QuadOptions::with_tol(1e-300, 1e-11)).value
}

/// The two-dimensional second derivative test.
pub fn check_second_derivative_test_2d(grid: &[f64], scaling_lambdas: &[f64]) -> SecondDeriv2dReport {
    let v = bump_variation().powi(2);
    let mut rows = Vec::new();
    for &lambda in grid {
        for &rho in grid {
            let integral = separable_2d(lambda, rho).norm();
            let bound = v / (lambda * rho).sqrt();
            rows.push(SecondDeriv2dRow { lambda, rho, integral, bound, ratio: integral / bound });
        }
    }
    let fitted_constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let ys: Vec<f64> = scaling_lambdas.iter().map(|&l| separable_2d(l, l).norm()).collect();
    let scaling = fit_power_law(scaling_lambdas, &ys);
    let nested = nested_2d(100.0, 100.0, 0.0, 1.0);
    let product = separable_2d(100.0, 100.0);
    let tensor_consistency = (nested - product).norm() / product.norm();
    let mixed_ratio = nested_2d(100.0, 100.0, 25.0, 1.0).norm() / (v / 100.0);
    let zero_weight_value = nested_2d(100.0, 100.0, 0.0, 0.0).norm();
    let pass = fitted_constant <= 10.0 * min_ratio
        && scaling.within(-1.0, 0.1)
        && tensor_consistency <= 1e-8
        && mixed_ratio <= 10.0 * fitted_constant
        && zero_weight_value == 0.0;
    SecondDeriv2dReport { rows, fitted_constant, scaling, tensor_consistency, mixed_ratio, zero_weight_value, pass }
}

#[derive(Clone, Debug, Serialize)]
pub struct StationaryRow {
    pub lambda: f64,
    pub value: f64,
    pub derivative_fd: f64,
    pub derivative_exact: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StationaryReport {
    pub rows: Vec<StationaryRow>,
    /// `|integral e(lambda f) U|` against `lambda`; expected `-1/2`.
    pub j0: PowerFit,
    /// Central-difference `lambda`-derivative; expected `-3/2`.
    pub j1: PowerFit,
    /// At `lambda = 1`, adaptive against a fixed 256-panel Gauss rule.
    pub unit_consistency: f64,
    pub pass: bool,
}

fn stationary_integral(lambda: f64) -> Complex64 {
    osc_1d(bump_u, |x| lambda * (x - 1.5).powi(2), |x| 2.0 * lambda * (x - 1.5), 1.0, 2.0)
}

/// Scaling of `d^j/d lambda^j integral e(lambda (x-3/2)^2) U(x) dx`.
pub fn check_stationary_scaling(lambdas: &[f64]) -> StationaryReport {
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let value = stationary_integral(lambda).norm();
        let h = 1e-3 * lambda;
        let fd = (stationary_integral(lambda + h) - stationary_integral(lambda - h)) / (2.0 * h);
        let exact = osc_1d(
            |x| std::f64::consts::TAU * (x - 1.5).powi(2) * bump_u(x),
            |x| lambda * (x - 1.5).powi(2),
            |x| 2.0 * lambda * (x - 1.5),
            1.0,
            2.0,
        );
        rows.push(StationaryRow { lambda, value, derivative_fd: fd.norm(), derivative_exact: exact.norm() });
    }
    let j0 = fit_power_law(lambdas, &rows.iter().map(|r| r.value).collect::<Vec<_>>());
    let j1 = fit_power_law(lambdas, &rows.iter().map(|r| r.derivative_fd).collect::<Vec<_>>());
    let (gx, gw) = super::gauss_legendre(16);
    let mut plain = Complex64::new(0.0, 0.0);
    let panels = 256;
    for i in 0..panels {
        let (a, b) = (1.0 + i as f64 / panels as f64, 1.0 + (i + 1) as f64 / panels as f64);
        for (x, w) in gx.iter().zip(&gw) {
            let t = 0.5 * (a + b) + 0.5 * (b - a) * x;
            plain += bump_u(t) * e((t - 1.5).powi(2)) * (w * 0.5 * (b - a));
        }
    }
    let unit_consistency = (stationary_integral(1.0) - plain).norm();
    let pass = j0.within(-0.5, 0.1) && j1.within(-1.5, 0.1) && unit_consistency <= 1e-14;
    StationaryReport { rows, j0, j1, unit_consistency, pass }
}

/// `integral |U'|` by quadrature; used to confirm the closed form `2 e^{-4}`.
pub fn bump_variation_numeric() -> f64 {
    let g = |x: f64| Complex64::new(bump_u_d1(x).abs(), 0.0);
    integrate(&g, 1.0, 2.0, &QuadOptions::with_tol(0.0, 1e-13).breakpoints(&[1.5])).value.re
}
