//! Poisson summation in `r` modulo `p`:
//!
//! ```text
//! sum_r e(f(r)) S(n, r; p) e(2 sqrt(n r) / (sqrt M p)) V#(r / N)
//!     = N sum_{(r, p) = 1} e(-r^{-1} n / p) J(n, r, p)
//! ```
//!
//! The right side is truncated to `|r - gamma p| <= 10 p T / N`.

use num_complex::Complex64;
use serde::Serialize;

use super::integrals::JSetup;
use super::kloosterman::{mod_inverse, KloostermanTable};
use super::PipelineError;
use crate::quad::{e, gauss_legendre};

#[derive(Clone, Debug, Serialize)]
pub struct PoissonReport {
    pub n: i64,
    pub p: u64,
    pub t: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub relative_difference: f64,
    /// Truncation radius `10 p T / N` (at least `p`).
    pub cap: i64,
    pub terms: usize,
    /// Relative change of the right side when the radius is doubled.
    pub tail_change: f64,
    /// Largest `|N J|` among the outermost tenth of the truncated range.
    pub edge_max: f64,
    pub pass: bool,
}

/// `N J(n, r, p)` for consecutive `r` from one fixed Gauss–Legendre rule in
/// `x` fine enough for the fastest `r` in the range. The `r`-dependence is
/// the factor `e(-r N x / p)`, advanced by one multiplication per step.
struct DualTerms {
    nodes: Vec<Complex64>,
    step: Vec<Complex64>,
    current: Vec<Complex64>,
    scale: f64,
}

impl DualTerms {
    fn new(s: &JSetup, n: i64, p: u64, lo: i64, hi: i64) -> Self {
        let ph = &s.phase;
        let rate = s.max_rate(lo, p, n as f64).max(s.max_rate(hi, p, n as f64));
        let amp = 2.0 * (ph.n * n as f64).sqrt() / (s.level.sqrt() * p as f64);
        let (gx, gw) = gauss_legendre(16);
        let (mut nodes, mut step, mut current) = (Vec::new(), Vec::new(), Vec::new());
        for seg in s.weight.breakpoints().windows(2) {
            let len = seg[1] - seg[0];
            let panels = ((rate * len / 2.0).ceil() as usize).max(8);
            let h = len / panels as f64;
            for k in 0..panels {
                let mid = seg[0] + (k as f64 + 0.5) * h;
                for i in 0..16 {
                    let x = mid + 0.5 * h * gx[i];
                    let base = ph.t * ph.phi.eval(x) + ph.gamma * ph.n * x + amp * x.sqrt();
                    nodes.push(s.weight.eval(x) * e(base) * (0.5 * h * gw[i]));
                    let shift = ph.n * x / p as f64;
                    step.push(e(-shift));
                    current.push(e(-((lo as f64 * shift).rem_euclid(1.0))));
                }
            }
        }
        DualTerms { nodes, step, current, scale: ph.n }
    }

    /// The term for the current `r`, then advance to `r + 1`.
    fn next(&mut self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((w, c), st) in self.nodes.iter().zip(self.current.iter_mut()).zip(&self.step) {
            acc += w * *c;
            *c *= st;
        }
        self.scale * acc
    }
}

/// Right side over `lo..=hi` with `skip` excluded. Returns the sum, the
/// number of terms and `(r, |N J|)` for each term.
fn rhs_sum(s: &JSetup, n: i64, p: u64, lo: i64, hi: i64, skip: Option<(i64, i64)>) -> (Complex64, usize, Vec<(i64, f64)>) {
    let pi = p as i64;
    let mut terms = DualTerms::new(s, n, p, lo, hi);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut sizes = Vec::new();
    for r in lo..=hi {
        let skipped = skip.is_some_and(|(a, b)| (a..=b).contains(&r));
        let Some(r_bar) = mod_inverse(r, pi).filter(|_| !skipped) else {
            // keep the phase factors in step
            for (c, st) in terms.current.iter_mut().zip(&terms.step) {
                *c *= st;
            }
            continue;
        };
        let term = terms.next();
        sizes.push((r, term.norm()));
        acc += e(-(((r_bar * n).rem_euclid(pi)) as f64) / p as f64) * term;
    }
    let count = sizes.len();
    (acc, count, sizes)
}

/// Both sides of the identity for one `(n, p)`. Passes at relative
/// difference `<= 1e-5` with the doubled-radius change below `1e-7`.
pub fn poisson_r_identity_check(s: &JSetup, n: i64, p: u64) -> Result<PoissonReport, PipelineError> {
    let table = KloostermanTable::new(p)?;
    let big_n = s.phase.n;
    let (lo, hi) = s.weight.weight().support();
    let m = s.level;
    let mut lhs = Complex64::new(0.0, 0.0);
    for r in (lo * big_n).ceil() as i64..=(hi * big_n).floor() as i64 {
        let v = s.weight.eval(r as f64 / big_n);
        if v == Complex64::new(0.0, 0.0) {
            continue;
        }
        let kernel = e(s.phase.phase_mod1(r as f64) + 2.0 * ((n * r) as f64).sqrt() / (m.sqrt() * p as f64));
        lhs += v * table.get(n, r) * kernel;
    }

    let centre = (s.phase.gamma * p as f64).round() as i64;
    let cap = ((10.0 * p as f64 * s.phase.t / big_n).ceil() as i64).max(p as i64);
    let (rhs, terms, sizes) = rhs_sum(s, n, p, centre - cap, centre + cap, None);
    let (outer, _, _) = rhs_sum(s, n, p, centre - 2 * cap, centre + 2 * cap, Some((centre - cap, centre + cap)));
    let scale = rhs.norm().max(lhs.norm());
    let tail_change = if scale == 0.0 { 0.0 } else { outer.norm() / scale };
    let edge = cap - cap / 10;
    let edge_max = sizes.iter().filter(|(r, _)| (r - centre).abs() >= edge).map(|s| s.1).fold(0.0, f64::max);
    let diff = (lhs - rhs).norm();
    let relative_difference = if diff == 0.0 { 0.0 } else { diff / scale };
    Ok(PoissonReport {
        n,
        p,
        t: s.phase.t,
        lhs,
        rhs,
        relative_difference,
        cap,
        terms,
        tail_change,
        edge_max,
        pass: relative_difference <= 1e-5 && tail_change < 1e-7,
    })
}
