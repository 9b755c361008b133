use num_complex::Complex64;

use super::{analytic_conductor, AfeMode, Cutoff, LValuePoint, LfuncError};
use crate::forms::{CoefficientTable, NewformDescriptor};
use crate::special::log_gamma_diff;

const LOG_TAU: f64 = 1.837_877_066_409_345_5;

/// `W_s(y) = (1/2 pi i) int_{(c)} G(u) gamma(s + u) / gamma(s) y^{-u} du / u`
/// with `gamma(w) = (2 pi)^{-w} Gamma(w + (k - 1)/2)`, discretized by the
/// trapezoid rule on the vertical line. The integrand is analytic in a
/// strip of width `c` about the line, so the rule converges geometrically
/// in `c / h`.
#[derive(Clone, Debug)]
pub struct MellinWeight {
    c: f64,
    v0: f64,
    h: f64,
    coeffs: Vec<Complex64>,
}

impl MellinWeight {
    pub fn new(weight: u32, s: Complex64, cutoff: Cutoff) -> Result<Self, LfuncError> {
        cutoff.validate()?;
        let shift = (weight as f64 - 1.0) / 2.0;
        // stay right of the gamma poles at u = -s - shift - m
        let c = 1.0f64.max(1.0 - s.re - shift);
        let h = (c / 8.0).min(0.125);
        let coeff = |v: f64| -> Result<Complex64, LfuncError> {
            let u = Complex64::new(c, v);
            let log_ratio = log_gamma_diff(s + u + shift, s + shift)? - u * LOG_TAU;
            Ok(cutoff.kernel(u) / u * log_ratio.exp())
        };
        let mut peak = coeff(0.0)?.norm();
        let mut sides: [Vec<Complex64>; 2] = [Vec::new(), Vec::new()];
        for (side, dir) in [(0usize, 1.0f64), (1, -1.0)] {
            let mut quiet = 0;
            let mut j = 1;
            while quiet < (2.0 / h) as usize {
                let v = dir * j as f64 * h;
                if v.abs() > 400.0 {
                    return Err(LfuncError::Config(format!("Mellin kernel does not decay by |v| = 400 (s = {s})")));
                }
                let w = coeff(v)?;
                peak = peak.max(w.norm());
                quiet = if w.norm() < 1e-22 * peak { quiet + 1 } else { 0 };
                sides[side].push(w);
                j += 1;
            }
        }
        let [up, down] = sides;
        let v0 = -(down.len() as f64) * h;
        let coeffs: Vec<Complex64> = down.into_iter().rev().chain(std::iter::once(coeff(0.0)?)).chain(up).collect();
        Ok(MellinWeight { c, v0, h, coeffs })
    }

    pub fn nodes(&self) -> usize {
        self.coeffs.len()
    }

    /// `W_s(y)` from `log y`.
    pub fn eval_log(&self, log_y: f64) -> Complex64 {
        let start = Complex64::from_polar(1.0, -self.v0 * log_y);
        let step = Complex64::from_polar(1.0, -self.h * log_y);
        let mut rot = start;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &w) in self.coeffs.iter().enumerate() {
            // re-anchor periodically so the rotation does not drift
            if j % 64 == 0 {
                rot = Complex64::from_polar(1.0, -(self.v0 + j as f64 * self.h) * log_y);
            }
            acc += w * rot;
            rot *= step;
        }
        acc * ((-self.c * log_y).exp() * self.h / std::f64::consts::TAU)
    }
}

/// `eps M^{1/2 - s} gamma(1 - s) / gamma(s)`, the factor in front of the
/// dual sum. On the critical line this is
/// `eps M^{-it} (2 pi)^{2it} Gamma(k/2 - it) / Gamma(k/2 + it)`.
pub fn root_factor(table: &CoefficientTable, s: Complex64) -> Result<Complex64, LfuncError> {
    let form = table.descriptor();
    let eps = form.eps().ok_or(LfuncError::Uncalibrated)?;
    let shift = (form.weight as f64 - 1.0) / 2.0;
    let one = Complex64::new(1.0, 0.0);
    let log_gamma = log_gamma_diff(one - s + shift, s + shift)? + (2.0 * s - 1.0) * LOG_TAU;
    let level = form.level as f64;
    Ok(eps * ((0.5 - s) * level.ln() + log_gamma).exp())
}

fn require(table: &CoefficientTable, needed: usize) -> Result<(), LfuncError> {
    if needed > table.n_max() {
        return Err(LfuncError::TableTooShort { needed, have: table.n_max() });
    }
    Ok(())
}

/// One AFE sum `sum_{n <= n_stop} lambda(n) n^{-s} w(n)`.
fn weighted_sum(table: &CoefficientTable, s: Complex64, n_stop: usize, w: impl Fn(f64) -> Complex64) -> Complex64 {
    (1..=n_stop)
        .map(|n| {
            let ln = (n as f64).ln();
            table.lambda(n) * (-s * ln).exp() * w(ln)
        })
        .sum()
}

fn start_point(form: &NewformDescriptor, t: f64, cutoff: Cutoff) -> usize {
    (analytic_conductor(form, t).sqrt() * cutoff.reach() * 1.3).ceil() as usize + 20
}

/// Table size for [`afe_value_at`] at `Im s = t`: the starting truncation
/// point and one growth step, which covered every `t <= 1032` measured for
/// both built-in forms and both cutoffs.
pub fn required_n_max(form: &NewformDescriptor, t: f64, cutoff: Cutoff) -> usize {
    start_point(form, t.abs(), cutoff) * 3 / 2
}

/// `L(s, g)` by the exact two-sum formula at any `s`. Returns the value
/// and the truncation point. The truncation is extended until `n` times the
/// last weighted terms of both sums falls below `1e-12` relative.
pub fn afe_value_at(table: &CoefficientTable, s: Complex64, cutoff: Cutoff) -> Result<(Complex64, usize), LfuncError> {
    let form = table.descriptor();
    let one = Complex64::new(1.0, 0.0);
    let main = MellinWeight::new(form.weight, s, cutoff)?;
    let dual = MellinWeight::new(form.weight, one - s, cutoff)?;
    let factor = root_factor(table, s)?;
    let log_root_m = 0.5 * (form.level as f64).ln();
    let mut n_stop = start_point(form, s.im, cutoff);
    require(table, n_stop)?;
    loop {
        let a = weighted_sum(table, s, n_stop, |ln| main.eval_log(ln - log_root_m));
        let b = weighted_sum(table, one - s, n_stop, |ln| dual.eval_log(ln - log_root_m));
        let value = a + factor * b;
        let ln = (n_stop as f64).ln();
        let tail_term = |w: &MellinWeight, sigma: f64| (n_stop as f64).powf(1.0 - sigma) * w.eval_log(ln - log_root_m).norm();
        let tail = tail_term(&main, s.re) + factor.norm() * tail_term(&dual, 1.0 - s.re);
        if tail <= 1e-12 * value.norm().max(1.0) {
            return Ok((value, n_stop));
        }
        if n_stop == table.n_max() {
            return Err(LfuncError::Truncation { n: n_stop, tail });
        }
        n_stop = (n_stop * 3 / 2).min(table.n_max());
    }
}

/// `L(1/2 + it, g)` in the requested mode.
pub fn afe_lvalue(table: &CoefficientTable, t: f64, cutoff: Cutoff, mode: AfeMode) -> Result<LValuePoint, LfuncError> {
    cutoff.validate()?;
    let form = table.descriptor();
    let s = Complex64::new(0.5, t);
    let conductor = analytic_conductor(form, t);
    let (value, truncation_n) = match mode {
        AfeMode::Exact => afe_value_at(table, s, cutoff)?,
        AfeMode::Literal => {
            let root_c = conductor.sqrt();
            let n_stop = (root_c * cutoff.reach()).ceil() as usize;
            require(table, n_stop)?;
            let log_root_c = root_c.ln();
            let f = |ln: f64| Complex64::new(cutoff.eval((ln - log_root_c).exp()), 0.0);
            let a = weighted_sum(table, s, n_stop, f);
            let b = weighted_sum(table, s.conj(), n_stop, f);
            (a + root_factor(table, s)? * b, n_stop)
        }
    };
    Ok(LValuePoint { t, value, conductor, cutoff_id: cutoff.id(), mode, truncation_n })
}

/// `sum_{n <= n_max} lambda(n) n^{-s}` for `Re s > 1`, with a tail bound
/// from `|lambda(n)| <= d(n)`.
pub fn dirichlet_direct(table: &CoefficientTable, s: Complex64) -> Result<(Complex64, f64), LfuncError> {
    let sigma = s.re;
    if sigma <= 1.0 {
        return Err(LfuncError::Config(format!("Dirichlet series needs Re s > 1, got {sigma}")));
    }
    let n = table.n_max();
    let value = weighted_sum(table, s, n, |_| Complex64::new(1.0, 0.0));
    let big_n = n as f64;
    let d = sigma - 1.0;
    let tail = big_n.powf(-d) * (big_n.ln() / d + 1.0 / (d * d) + 1.0);
    Ok((value, tail))
}
