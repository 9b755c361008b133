use rayon::prelude::*;
use serde::Serialize;

use super::{afe_lvalue, AfeMode, Cutoff, LfuncError};
use crate::fit::{fit_power_law, PowerFit};
use crate::forms::CoefficientTable;
use crate::pipeline::{s_direct, PhaseSpec, Phi, WeightedPhase};
use crate::special::make_weight_v;

#[derive(Clone, Debug, Serialize)]
pub struct WeylRow {
    /// Grid point; the window is `[t, t + width]`.
    pub t: f64,
    /// Largest `|L(1/2 + it')|` over the window.
    pub abs_max: f64,
    pub t_at_max: f64,
    pub conductor: f64,
}

/// `S(N) = sum lambda(n) n^{-it} V(n / N)` for one dyadic `N`.
#[derive(Clone, Debug, Serialize)]
pub struct DyadicPiece {
    pub t: f64,
    pub n: f64,
    pub abs: f64,
    /// `|S(N)| / (sqrt N t^{1/3})`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub rows: Vec<WeylRow>,
    pub fit: PowerFit,
    /// Two-standard-error band on the exponent.
    pub band: (f64, f64),
    pub pieces: Vec<DyadicPiece>,
    pub piece_constant: f64,
}

/// `S(N)` for `N = t^{2/3} 2^j <= t`, via the phase `T = t / 2 pi`,
/// `phi = -log`, `gamma = 0`, for which `e(f(n)) = (n / N)^{-it}`.
pub fn dyadic_pieces(table: &CoefficientTable, t: f64) -> Result<Vec<DyadicPiece>, LfuncError> {
    let v = make_weight_v(2.0, 2.0)?;
    let mut out = Vec::new();
    let mut n = t.powf(2.0 / 3.0).max(1.0);
    while n <= t {
        let phase = PhaseSpec::new(t / std::f64::consts::TAU, 0.0, n, Phi::NegLog).map_err(|e| LfuncError::Config(e.to_string()))?;
        let wp = WeightedPhase::unchecked(phase, v.clone());
        let s = s_direct(table, &wp).map_err(|e| LfuncError::Config(e.to_string()))?;
        out.push(DyadicPiece { t, n, abs: s.norm(), ratio: s.norm() / (n.sqrt() * t.cbrt()) });
        n *= 2.0;
    }
    Ok(out)
}

/// `|L(1/2 + it)|` over windows `[t, t + width]` sampled at `samples`
/// points, with a power-law fit of the window maxima against `t`. Single
/// values at isolated `t` scatter too much to fit; the window maximum
/// tracks the growth.
pub fn weyl_scan(table: &CoefficientTable, t_grid: &[f64], width: f64, samples: usize, cutoff: Cutoff) -> Result<WeylReport, LfuncError> {
    if t_grid.len() < 2 || samples == 0 {
        return Err(LfuncError::Config("weyl_scan needs at least two grid points and one sample".into()));
    }
    let jobs: Vec<(usize, f64)> = t_grid
        .iter()
        .enumerate()
        .flat_map(|(i, &t)| (0..samples).map(move |j| (i, t + width * j as f64 / samples as f64)))
        .collect();
    let values = jobs
        .par_iter()
        .map(|&(_, t)| afe_lvalue(table, t, cutoff, AfeMode::Exact))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<WeylRow> = t_grid.iter().map(|&t| WeylRow { t, abs_max: -1.0, t_at_max: t, conductor: 0.0 }).collect();
    for ((i, _), p) in jobs.iter().zip(&values) {
        let row = &mut rows[*i];
        if p.value.norm() > row.abs_max {
            *row = WeylRow { t: row.t, abs_max: p.value.norm(), t_at_max: p.t, conductor: p.conductor };
        }
    }
    let (ts, ls): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.t, r.abs_max)).unzip();
    let fit = fit_power_law(&ts, &ls);
    let band = (fit.exponent - 2.0 * fit.stderr, fit.exponent + 2.0 * fit.stderr);
    let mut pieces = Vec::new();
    for &t in t_grid {
        pieces.extend(dyadic_pieces(table, t)?);
    }
    let piece_constant = pieces.iter().map(|p| p.ratio).fold(0.0, f64::max);
    Ok(WeylReport { rows, fit, band, pieces, piece_constant })
}
