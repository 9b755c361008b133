//! Direct enumeration of the diagonal and off-diagonal bounding sums left
//! after Cauchy–Schwarz and the second Poisson step, and the ratio of the
//! sharp sum to the final bound `T^{1/3} N^{1/2} + N / T^{1/6}`.
//!
//! Parameters follow the optimal choice `K = T^{2/3}`, `P = N / T^{1/3}`,
//! so `X = P^2 K^2 / N` and the `r`-window has radius `R = P T / N`.
//! All `N^eps` factors are set to one.

use serde::Serialize;

use super::kloosterman::split_congruence;
use super::phase::{PhaseSpec, Phi};
use super::sums::s_sharp;
use super::PipelineError;
use crate::fit::fit_power_law;
use crate::forms::{primes_up_to, CoefficientTable};

#[derive(Clone, Debug, Serialize)]
pub struct BoundLedger {
    pub n: f64,
    pub t: f64,
    pub gamma: f64,
    pub k: f64,
    pub p: f64,
    pub x: f64,
    pub r: f64,
    pub prime_count: usize,
    /// `T >= N`: the off-diagonal estimate without the `N / T` loss.
    pub large_t_branch: bool,
    pub s_diag_sq: f64,
    /// `(K N + T) log P`.
    pub diag_estimate: f64,
    pub diag_constant: f64,
    pub s_off_sq: f64,
    /// `(N T / sqrt K + K N)` times `1` when `T >= N` and `(N / T) log P`
    /// otherwise.
    pub off_branch_estimate: f64,
    /// `(N T / sqrt K + K N)(1 + N / T) log P`.
    pub off_estimate: f64,
    pub off_constant: f64,
    pub off_branch_constant: f64,
    pub s_sharp_abs: f64,
    /// `T^{1/3} N^{1/2} + N / T^{1/6}`.
    pub theorem_bound: f64,
    pub theorem_ratio: f64,
}

/// Number of integers in `[lo, hi]` congruent to `c` mod `m`.
fn count_in_class(lo: i64, hi: i64, c: i64, m: i64) -> i64 {
    if hi < lo {
        return 0;
    }
    (hi - c).div_euclid(m) - (lo - 1 - c).div_euclid(m)
}

fn window(gamma: f64, p: u64, radius: f64) -> (i64, i64) {
    let centre = gamma * p as f64;
    ((centre - radius).ceil() as i64, (centre + radius).floor() as i64)
}

fn diagonal_sum(primes: &[u64], gamma: f64, radius: f64, n: f64, t: f64, k: f64, big_p: f64) -> f64 {
    let mut total = 0.0;
    for &p in primes {
        let pi = p as i64;
        let (lo, hi) = window(gamma, p, radius);
        for r1 in lo..=hi {
            if r1.rem_euclid(pi) == 0 {
                continue;
            }
            let mut r2 = r1 - ((r1 - lo) / pi) * pi;
            while r2 <= hi {
                total += if r2 == r1 { 1.0 / t } else { (1.0 / t).min(big_p / (k * n * (r1 - r2).abs() as f64)) };
                r2 += pi;
            }
        }
    }
    total
}

fn off_diagonal_sum(primes: &[u64], gamma: f64, radius: f64, n: f64, t: f64, k: f64, x: f64) -> f64 {
    let n_hi = (n / k).floor() as i64;
    let n_mid = n / t;
    let mut total = 0.0;
    for &p1 in primes {
        let (lo1, hi1) = window(gamma, p1, radius);
        for &p2 in primes {
            if p1 == p2 {
                continue;
            }
            let (lo2, hi2) = window(gamma, p2, radius);
            let (a, b) = (p1 as i64, p2 as i64);
            let root = ((p1 * p2) as f64).sqrt();
            for m in (-n_hi..=n_hi).filter(|&m| m != 0) {
                let Some((c1, c2)) = split_congruence(m, a, b) else { continue };
                let pairs = count_in_class(lo1, hi1, c1, a) * count_in_class(lo2, hi2, c2, b);
                if pairs == 0 {
                    continue;
                }
                let am = m.unsigned_abs() as f64;
                let weight = if am < n_mid { 1.0 / t } else { root / (t * (x * am).sqrt()) };
                total += pairs as f64 * weight;
            }
        }
    }
    total
}

/// The ledger at one `(N, T)` with `phi = -log`.
pub fn bound_ledger(table: &CoefficientTable, phase: &PhaseSpec) -> Result<BoundLedger, PipelineError> {
    let (n, t, gamma) = (phase.n, phase.t, phase.gamma);
    if !(t >= 1.0) {
        return Err(PipelineError::Config(format!("the ledger needs T >= 1, got {t}")));
    }
    let k = t.powf(2.0 / 3.0);
    let big_p = n / t.powf(1.0 / 3.0);
    let x = big_p * big_p * k * k / n;
    let radius = big_p * t / n;
    let level = table.descriptor().level;
    let primes: Vec<u64> = primes_up_to((2.0 * big_p).floor() as usize).into_iter().filter(|&p| p as f64 >= big_p && p > level).collect();
    if primes.len() < 2 {
        return Err(PipelineError::Config(format!("fewer than two primes in [{big_p}, {}]", 2.0 * big_p)));
    }
    let star = primes.len() as f64;
    let prefactor = n.powi(3) * x / (star * star * big_p * big_p * k);
    let log_p = big_p.ln();

    let s_diag_sq = prefactor * diagonal_sum(&primes, gamma, radius, n, t, k, big_p);
    let diag_estimate = (k * n + t) * log_p;
    let s_off_sq = prefactor * off_diagonal_sum(&primes, gamma, radius, n, t, k, x);
    let core = n * t / k.sqrt() + k * n;
    let large_t_branch = t >= n;
    let off_branch_estimate = if large_t_branch { core } else { core * n / t * log_p };
    let off_estimate = core * (1.0 + n / t) * log_p;

    let sharp = s_sharp(table, phase)?.norm();
    let theorem_bound = t.powf(1.0 / 3.0) * n.sqrt() + n / t.powf(1.0 / 6.0);
    Ok(BoundLedger {
        n,
        t,
        gamma,
        k,
        p: big_p,
        x,
        r: radius,
        prime_count: primes.len(),
        large_t_branch,
        s_diag_sq,
        diag_estimate,
        diag_constant: s_diag_sq / diag_estimate,
        s_off_sq,
        off_branch_estimate,
        off_estimate,
        off_constant: s_off_sq / off_estimate,
        off_branch_constant: s_off_sq / off_branch_estimate,
        s_sharp_abs: sharp,
        theorem_bound,
        theorem_ratio: sharp / theorem_bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremGrid {
    pub rows: Vec<BoundLedger>,
    /// Largest `|S#| / bound` over the grid.
    pub constant: f64,
    pub diag_constant: f64,
    pub off_constant: f64,
    /// Exponent of `|S#|` in `T` at the largest `N`, for reference.
    pub t_exponent: Option<f64>,
    pub pass: bool,
}

/// Ledgers over `N` in `ns` and `T = N^e` for `e` in `exponents`. Passes
/// when the theorem ratio and both bounding-sum constants are at most
/// `c_max`.
pub fn theorem_grid(table: &CoefficientTable, ns: &[f64], exponents: &[f64], c_max: f64) -> Result<TheoremGrid, PipelineError> {
    let mut rows = Vec::new();
    for &n in ns {
        for &ex in exponents {
            let phase = PhaseSpec::new(n.powf(ex), 0.0, n, Phi::NegLog)?;
            rows.push(bound_ledger(table, &phase)?);
        }
    }
    let max_of = |f: fn(&BoundLedger) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let constant = max_of(|r| r.theorem_ratio);
    let diag_constant = max_of(|r| r.diag_constant);
    let off_constant = max_of(|r| r.off_constant);
    let n_top = ns.iter().cloned().fold(0.0, f64::max);
    let top: Vec<(f64, f64)> = rows.iter().filter(|r| r.n == n_top).map(|r| (r.t, r.s_sharp_abs)).collect();
    let t_exponent = if top.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = top.into_iter().unzip();
        Some(fit_power_law(&xs, &ys).exponent)
    } else {
        None
    };
    Ok(TheoremGrid { pass: constant <= c_max && diag_constant <= c_max && off_constant <= c_max, rows, constant, diag_constant, off_constant, t_exponent })
}
