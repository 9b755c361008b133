//! Direct evaluation of the exponential sums.

use num_complex::Complex64;
use serde::Serialize;

use super::phase::{PhaseSpec, WeightedPhase};
use super::PipelineError;
use crate::forms::CoefficientTable;
use crate::quad::e;

fn require(table: &CoefficientTable, hi: usize) -> Result<(), PipelineError> {
    if hi > table.n_max() {
        return Err(PipelineError::TableTooShort { needed: hi, have: table.n_max() });
    }
    Ok(())
}

/// `sum lambda(n) e(f(n)) V(n / N)`, the phase reduced mod 1 in double-double.
pub fn s_direct(table: &CoefficientTable, wp: &WeightedPhase) -> Result<Complex64, PipelineError> {
    let n = wp.phase.n;
    let (lo, hi) = wp.v.support();
    let (first, last) = ((lo * n).ceil() as usize, (hi * n).floor() as usize);
    require(table, last.max(2 * n as usize))?;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in first.max(1)..=last {
        let w = wp.v.eval(m as f64 / n);
        if w != 0.0 {
            acc += table.lambda(m) * w * e(wp.phase.phase_mod1(m as f64));
        }
    }
    Ok(acc)
}

/// The sharp-cut sum over `N <= n <= 2N`.
pub fn s_sharp(table: &CoefficientTable, phase: &PhaseSpec) -> Result<Complex64, PipelineError> {
    let n = phase.n.round() as usize;
    require(table, 2 * n)?;
    Ok((n..=2 * n).map(|m| table.lambda(m) * e(phase.phase_mod1(m as f64))).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct WiltonReport {
    pub n: usize,
    /// `(gamma, |S|)` for each grid point.
    pub rows: Vec<(f64, f64)>,
    /// `max |S| / (sqrt N log 2N)`.
    pub constant: f64,
    pub pass: bool,
}

/// Linear-phase sharp sums over a `gamma` grid, measured against
/// `sqrt N log 2N`. Passes when the fitted constant is at most `c_max`.
pub fn wilton_scan(table: &CoefficientTable, n: usize, gammas: &[f64], c_max: f64) -> Result<WiltonReport, PipelineError> {
    let scale = (n as f64).sqrt() * (2.0 * n as f64).ln();
    let mut rows = Vec::with_capacity(gammas.len());
    for &g in gammas {
        let phase = PhaseSpec::new(0.0, g, n as f64, super::phase::Phi::NegLog)?;
        rows.push((g, s_sharp(table, &phase)?.norm()));
    }
    let constant = rows.iter().map(|r| r.1).fold(0.0, f64::max) / scale;
    Ok(WiltonReport { n, rows, constant, pass: constant <= c_max })
}
