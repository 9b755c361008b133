use num_complex::Complex64;
use serde::Serialize;

use super::BesselDeltaError;
use crate::quad::{gauss_legendre, integrate, QuadOptions, WithFreq};
use crate::special::{bump_u, i_scaled_unchecked, j_unchecked, MAX_ORDER};

#[derive(Clone, Debug, Serialize)]
pub struct WeberReport {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub k: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_difference: f64,
}

/// Both sides of
///
/// ```text
/// integral_0^inf exp(-2 pi x / X) J_{k-1}(4 pi a sqrt x) J_{k-1}(4 pi b sqrt x) dx
///     = (X / 2 pi) I_{k-1}(4 pi a b X) exp(-2 pi (a^2 + b^2) X).
/// ```
///
/// The left side is integrated in `t = sqrt x`; the right side is assembled as
/// `e^{-z} I(z) exp(-2 pi (a - b)^2 X)` with `z = 4 pi a b X`, so nothing
/// overflows.
pub fn weber_identity_check(a: f64, b: f64, x_scale: f64, k: u32) -> Result<WeberReport, BesselDeltaError> {
    if k < 2 || k - 1 > MAX_ORDER {
        return Err(BesselDeltaError::Hypothesis(format!("weight k = {k} outside 2..={}", MAX_ORDER + 1)));
    }
    if !(a > 0.0 && b > 0.0 && x_scale > 0.0) {
        return Err(BesselDeltaError::Hypothesis("a, b and X must be positive".into()));
    }
    let nu = k - 1;
    let tau = std::f64::consts::TAU;
    let (wa, wb) = (2.0 * tau * a, 2.0 * tau * b);
    let g = WithFreq {
        f: |t: f64| Complex64::new(2.0 * t * (-tau * t * t / x_scale).exp() * j_unchecked(nu, wa * t) * j_unchecked(nu, wb * t), 0.0),
        freq: |_t: f64| a + b,
    };
    // |J| <= 1 bounds the tail beyond T by (X / 2 pi) exp(-2 pi T^2 / X);
    // extend T until that is below 1e-17 of the accumulated value
    let opts = QuadOptions::with_tol(0.0, 1e-14);
    let mut lo = 0.0;
    let mut hi = (10.0 * x_scale / tau).sqrt();
    let mut lhs = 0.0;
    loop {
        let r = integrate(&g, lo, hi, &opts);
        if !r.converged {
            return Err(BesselDeltaError::Quadrature { what: "Weber left side".into(), err: r.err_estimate, panels: r.panels });
        }
        lhs += r.value.re;
        let tail = x_scale / tau * (-tau * hi * hi / x_scale).exp();
        if tail <= 1e-17 * lhs.abs() || tail < f64::MIN_POSITIVE {
            break;
        }
        lo = hi;
        hi *= 1.5;
    }
    let z = 2.0 * tau * a * b * x_scale;
    let rhs = x_scale / tau * i_scaled_unchecked(nu, z) * (-tau * (a - b) * (a - b) * x_scale).exp();
    Ok(WeberReport { a, b, x: x_scale, k, lhs, rhs, relative_difference: (lhs - rhs).abs() / rhs.abs() })
}

#[derive(Clone, Debug, Serialize)]
pub struct HankelRow {
    pub b: f64,
    pub target: f64,
    pub value: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HankelReport {
    pub order: u32,
    pub x_max: f64,
    pub rows: Vec<HankelRow>,
    pub max_residual: f64,
    /// `(x_max', max residual)` for the truncations `x_max' <= x_max`.
    pub truncation: Vec<(f64, f64)>,
    /// Point beyond which the inner transform stayed below `1e-15` of its
    /// maximum (its quadrature noise level) and was treated as zero.
    pub negligible_from: Option<f64>,
    pub pass: bool,
}

/// `integral_0^{x_max} x J_nu(b x) G(x) dx` with
/// `G(x) = integral_1^2 U(a) J_nu(a x) a da`, compared with `U(b)`.
///
/// `G` is tabulated once on a Gauss–Legendre grid of the outer variable and
/// reused for every `b`. Partial sums at `checkpoints` show the effect of
/// the truncation.
pub fn hankel_inversion_check(order: u32, b_grid: &[f64], x_max: f64, checkpoints: &[f64]) -> Result<HankelReport, BesselDeltaError> {
    if order > MAX_ORDER {
        return Err(BesselDeltaError::Hypothesis(format!("order {order} exceeds {MAX_ORDER}")));
    }
    let b_max = b_grid.iter().cloned().fold(2.0, f64::max);
    // J(a x) J(b x) oscillates with at most (2 + b_max) / 2 pi cycles per unit
    let width = (std::f64::consts::TAU / (4.0 * (2.0 + b_max))).min(1.0);
    let panels = (x_max / width).ceil() as usize;
    let h = x_max / panels as f64;
    let (gx, gw) = gauss_legendre(16);
    let inner_opts = QuadOptions::with_tol(0.0, 1e-13);
    let mut nodes = Vec::with_capacity(panels * 16);
    let mut g_max = 0.0f64;
    let mut negligible_from = None;
    let mut quiet = 0usize;
    for p in 0..panels {
        let c = (p as f64 + 0.5) * h;
        let mut panel_small = true;
        for i in 0..16 {
            let x = c + 0.5 * h * gx[i];
            let gval = if negligible_from.is_some() {
                0.0
            } else {
                let f = WithFreq {
                    f: |s: f64| Complex64::new(bump_u(s) * j_unchecked(order, s * x) * s, 0.0),
                    freq: |_s: f64| x / std::f64::consts::TAU,
                };
                let r = integrate(&f, 1.0, 2.0, &inner_opts);
                if !r.converged {
                    return Err(BesselDeltaError::Quadrature { what: format!("Hankel transform at x = {x}"), err: r.err_estimate, panels: r.panels });
                }
                r.value.re
            };
            g_max = g_max.max(gval.abs());
            if gval.abs() > 1e-15 * g_max {
                panel_small = false;
            }
            nodes.push((x, 0.5 * h * gw[i] * gval));
        }
        if negligible_from.is_none() {
            quiet = if panel_small { quiet + 1 } else { 0 };
            if quiet >= 20 {
                negligible_from = Some((p + 1) as f64 * h);
            }
        }
    }
    let mut cps: Vec<f64> = checkpoints.iter().copied().filter(|&c| c > 0.0 && c < x_max).collect();
    cps.push(x_max);
    let mut truncation: Vec<(f64, f64)> = cps.iter().map(|&c| (c, 0.0)).collect();
    let mut rows = Vec::new();
    for &b in b_grid {
        let target = bump_u(b);
        let mut acc = 0.0;
        let mut next = 0;
        for (p, chunk) in nodes.chunks(16).enumerate() {
            for &(x, wg) in chunk {
                if wg != 0.0 {
                    acc += wg * x * j_unchecked(order, b * x);
                }
            }
            let end = (p + 1) as f64 * h;
            while next < cps.len() && end >= cps[next] - 1e-9 * h {
                truncation[next].1 = truncation[next].1.max((acc - target).abs());
                next += 1;
            }
        }
        rows.push(HankelRow { b, target, value: acc, residual: (acc - target).abs() });
    }
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(HankelReport { order, x_max, rows, max_residual, truncation, negligible_from, pass: max_residual <= 1e-3 })
}
