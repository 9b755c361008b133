//! Two-sided evaluation of the Voronoi summation formula
//!
//! ```text
//! sum lambda(n) e(a n / c) F(n)
//!     = eta xi(-c) / (c sqrt M) * sum conj(lambda(n)) e(-a^{-1} n / c) F^(n / (c^2 M))
//! ```
//!
//! with `F(x) = A U(x / Y)` and the Hankel transform
//! `F^(y) = 2 pi i^k integral F(x) J_{k-1}(4 pi sqrt(x y)) dx`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::kloosterman::mod_inverse;
use super::PipelineError;
use crate::forms::{i_pow, CoefficientTable};
use crate::quad::{e, gauss_legendre, integrate, QuadOptions, WithFreq};
use crate::special::{bump_u, j_unchecked};

/// `F(x) = amplitude * U(x / scale)`, supported on `[scale, 2 scale]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestFunction {
    pub scale: f64,
    pub amplitude: f64,
}

impl TestFunction {
    pub fn bump(scale: f64) -> Self {
        TestFunction { scale, amplitude: 1.0 }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude * bump_u(x / self.scale)
    }

    /// `F^(y)` computed as `2 pi i^k Y A integral_1^2 U(u) J_{k-1}(4 pi sqrt(Y u y)) du`.
    pub fn hankel(&self, k: u32, y: f64) -> Result<Complex64, PipelineError> {
        self.hankel_tol(k, y, 1e-13)
    }

    /// As [`TestFunction::hankel`] with a chosen relative tolerance.
    pub fn hankel_tol(&self, k: u32, y: f64, rel_tol: f64) -> Result<Complex64, PipelineError> {
        if self.amplitude == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let sy = (self.scale * y).sqrt();
        let w = 4.0 * std::f64::consts::PI * sy;
        let g = WithFreq {
            f: |u: f64| Complex64::new(bump_u(u) * j_unchecked(k - 1, w * u.sqrt()), 0.0),
            freq: |u: f64| sy / u.sqrt(),
        };
        let r = integrate(&g, 1.0, 2.0, &QuadOptions::with_tol(0.0, rel_tol));
        if !r.converged {
            return Err(PipelineError::Quadrature { what: format!("Hankel transform at y = {y}"), err: r.err_estimate });
        }
        Ok(std::f64::consts::TAU * i_pow(k as i64) * self.scale * self.amplitude * r.value)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VoronoiSides {
    pub lhs: Complex64,
    /// Right side with `eta = 1`.
    pub rhs_unit: Complex64,
    /// Number of dual terms summed.
    pub dual_terms: usize,
    /// Whether the truncation rule fired before the table ran out.
    pub truncated: bool,
}

fn check_moduli(table: &CoefficientTable, a: i64, c: i64) -> Result<i64, PipelineError> {
    let m = table.descriptor().level as i64;
    if c < 1 {
        return Err(PipelineError::Config(format!("modulus c = {c} must be positive")));
    }
    if gcd(c, m) != 1 {
        return Err(PipelineError::Hypothesis(format!("(c, M) = 1 fails for c = {c}, M = {m}")));
    }
    if gcd(a, c) != 1 {
        return Err(PipelineError::Hypothesis(format!("(a, c) = 1 fails for a = {a}, c = {c}")));
    }
    // the dual twist is by the inverse of a M, which reduces to a^{-1} at level 1
    Ok(mod_inverse(a.rem_euclid(c) * (m % c), c).expect("coprime to c"))
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Both sides of the formula with `eta = 1`. The dual sum stops after 20
/// consecutive terms below `1e-12` of the largest term seen, counting only
/// terms with `Y y >= 1` (before that `F^` is still growing from 0).
pub fn voronoi_sides(table: &CoefficientTable, a: i64, c: i64, f: &TestFunction) -> Result<VoronoiSides, PipelineError> {
    let a_bar = check_moduli(table, a, c)?;
    let desc = table.descriptor();
    let (k, m) = (desc.weight, desc.level as f64);
    let hi = (2.0 * f.scale).ceil() as usize;
    if hi > table.n_max() {
        return Err(PipelineError::TableTooShort { needed: hi, have: table.n_max() });
    }
    let cf = c as f64;
    let mut lhs = Complex64::new(0.0, 0.0);
    for n in (f.scale.floor() as usize).max(1)..=hi {
        let w = f.eval(n as f64);
        if w != 0.0 {
            lhs += table.lambda(n) * w * e(((a * n as i64).rem_euclid(c)) as f64 / cf);
        }
    }
    let mut dual = Complex64::new(0.0, 0.0);
    let mut biggest = 0.0f64;
    let mut quiet = 0usize;
    let mut truncated = false;
    let mut terms = 0;
    for n in 1..=table.n_max() {
        let y = n as f64 / (cf * cf * m);
        let h = f.hankel(k, y)?;
        biggest = biggest.max(h.norm());
        dual += table.lambda(n) * e(-(((a_bar * n as i64).rem_euclid(c)) as f64) / cf) * h;
        terms = n;
        if f.scale * y >= 1.0 && h.norm() < 1e-12 * biggest {
            quiet += 1;
            if quiet >= 20 {
                truncated = true;
                break;
            }
        } else {
            quiet = 0;
        }
        if f.amplitude == 0.0 && n >= 20 {
            truncated = true;
            break;
        }
    }
    let pre = desc.xi_minus_one() / (cf * m.sqrt());
    Ok(VoronoiSides { lhs, rhs_unit: pre * dual, dual_terms: terms, truncated })
}

#[derive(Clone, Debug, Serialize)]
pub struct VoronoiReport {
    pub label: String,
    pub a: i64,
    pub c: i64,
    pub scale: f64,
    pub eta: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relative_residual: f64,
    pub dual_terms: usize,
    pub truncated: bool,
    pub pass: bool,
}

fn relative(lhs: Complex64, rhs: Complex64) -> f64 {
    let d = (lhs - rhs).norm();
    if d == 0.0 {
        0.0
    } else {
        d / lhs.norm().max(rhs.norm())
    }
}

/// Compares the two sides using the calibrated `eta` of the table's
/// descriptor. Passes at relative residual `<= 1e-6` with the dual sum
/// properly truncated.
pub fn voronoi_check(table: &CoefficientTable, a: i64, c: i64, f: &TestFunction) -> Result<VoronoiReport, PipelineError> {
    let eta = table.descriptor().eta().ok_or(PipelineError::Uncalibrated)?;
    let s = voronoi_sides(table, a, c, f)?;
    let rhs = eta * s.rhs_unit;
    let relative_residual = relative(s.lhs, rhs);
    Ok(VoronoiReport {
        label: table.descriptor().label.clone(),
        a,
        c,
        scale: f.scale,
        eta,
        lhs: s.lhs,
        rhs,
        relative_residual,
        dual_terms: s.dual_terms,
        truncated: s.truncated,
        pass: s.truncated && relative_residual <= 1e-6,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub c: i64,
    pub eta: Complex64,
    pub winner_residual: f64,
    pub loser_residual: f64,
    pub ratio: f64,
}

/// Chooses `eta` in `{+1, -1}` (trivial nebentypus) by evaluating both
/// sides with `a = 1`. The winner must have residual below `1e-6` and the
/// loser one at least 10 times larger.
pub fn calibrate_eta(table: &CoefficientTable, c: i64, f: &TestFunction) -> Result<Calibration, PipelineError> {
    if !table.descriptor().nebentypus_trivial {
        return Err(PipelineError::Hypothesis("calibration assumes trivial nebentypus".into()));
    }
    let s = voronoi_sides(table, 1, c, f)?;
    if !s.truncated {
        return Err(PipelineError::Numerical(format!("dual sum not truncated within n_max = {}", table.n_max())));
    }
    let plus = relative(s.lhs, s.rhs_unit);
    let minus = relative(s.lhs, -s.rhs_unit);
    let (eta, w, l) = if plus <= minus { (1.0, plus, minus) } else { (-1.0, minus, plus) };
    let ratio = l / w.max(f64::MIN_POSITIVE);
    if !(w < 1e-6 && ratio > 10.0) {
        return Err(PipelineError::Ambiguous { winner: w, loser: l });
    }
    Ok(Calibration { c, eta: Complex64::new(eta, 0.0), winner_residual: w, loser_residual: l, ratio })
}

/// Calibrates with each modulus in `cs`, requires the same sign throughout
/// and returns the table with `eta` recorded in its descriptor.
pub fn calibrate_table(table: &CoefficientTable, cs: &[i64], f: &TestFunction) -> Result<(CoefficientTable, Vec<Calibration>), PipelineError> {
    let cals = cs.iter().map(|&c| calibrate_eta(table, c, f)).collect::<Result<Vec<_>, _>>()?;
    let eta = cals.first().ok_or_else(|| PipelineError::Config("no modulus given".into()))?.eta;
    if cals.iter().any(|c| c.eta != eta) {
        return Err(PipelineError::Numerical(format!("eta differs across moduli {cs:?}")));
    }
    let desc = table.descriptor().clone().with_eta(eta).map_err(|e| PipelineError::Numerical(e.to_string()))?;
    Ok((table.with_descriptor(desc), cals))
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionReport {
    pub a: i64,
    pub c: i64,
    pub original: Complex64,
    pub dual: Complex64,
    pub twice: Complex64,
    pub relative_difference: f64,
    pub pass: bool,
}

/// Applies the formula a second time to the dual sum, for the dual form
/// (the same coefficients, all built-ins being self-dual) and `-a^{-1}` in
/// place of `a`. The inner function is `G(x) = F^(x / (c^2 M))`; its Hankel
/// transform is computed in `s = sqrt(x)` up to the dual truncation point.
pub fn voronoi_involution_check(table: &CoefficientTable, a: i64, c: i64, f: &TestFunction) -> Result<InvolutionReport, PipelineError> {
    let eta = table.descriptor().eta().ok_or(PipelineError::Uncalibrated)?;
    let s = voronoi_sides(table, a, c, f)?;
    if !s.truncated {
        return Err(PipelineError::Numerical("dual sum not truncated".into()));
    }
    let desc = table.descriptor();
    let (k, m) = (desc.weight, desc.level as f64);
    let cf = c as f64;
    let cm = cf * cf * m;
    let s_cut = (s.dual_terms as f64 + 1.0).sqrt();
    // Ǧ vanishes off the support of F, so only m in [Y, 2Y] is summed
    let m_lo = (f.scale.floor() as usize).max(1);
    let m_hi = ((2.0 * f.scale).ceil() as usize).min(table.n_max());
    // G(s^2) and J(4 pi s sqrt(y)) each oscillate at most 2 sqrt(2 Y / (c^2 M)) times per unit s
    let freq = 4.0 * (2.0 * f.scale / cm).sqrt() + 1.0;
    let panels = (s_cut * 2.0 * freq).ceil() as usize;
    let h = s_cut / panels as f64;
    let (gx, gw) = gauss_legendre(16);
    let nodes: Vec<(f64, Complex64)> = (0..panels * 16)
        .into_par_iter()
        .map(|idx| {
            let (p, i) = (idx / 16, idx % 16);
            let sv = (p as f64 + 0.5) * h + 0.5 * h * gx[i];
            let g = f.hankel_tol(k, sv * sv / cm, 1e-9)?;
            Ok((sv, g * (sv * h * gw[i])))
        })
        .collect::<Result<_, PipelineError>>()?;
    let a_mod = a.rem_euclid(c);
    let twice: Complex64 = (m_lo..=m_hi)
        .into_par_iter()
        .map(|mm| {
            let w = 4.0 * std::f64::consts::PI * (mm as f64 / cm).sqrt();
            let acc: Complex64 = nodes.iter().map(|&(sv, wg)| wg * j_unchecked(k - 1, w * sv)).sum();
            let g_check = std::f64::consts::TAU * i_pow(k as i64) * acc;
            table.lambda(mm) * e(((a_mod * mm as i64) % c) as f64 / cf) * g_check
        })
        .sum();
    // both applications carry eta xi(-1) / (c sqrt M); the product is 1 / (c^2 M)
    let pre = eta * desc.xi_minus_one() / (cf * m.sqrt());
    let dual = eta * s.rhs_unit;
    let twice = pre * pre * twice;
    let rel = relative(s.lhs, twice);
    Ok(InvolutionReport { a, c, original: s.lhs, dual, twice, relative_difference: rel, pass: rel <= 1e-5 })
}
