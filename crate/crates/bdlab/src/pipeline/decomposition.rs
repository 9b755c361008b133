//! `S(N)` against the prime-averaged Voronoi-dual sum
//!
//! ```text
//! S(N, X, P) = N^{1/4} / (P* X^{3/4}) sum_{p ~ P} xi(p) / sqrt p
//!              sum_r e(f(r)) V#(r / N)
//!              sum_n conj lambda(n) S(M^{-1} n, r; p) e(2 sqrt(n r) / (sqrt M p)) U(n / (M X)))
//! ```
//!
//! with `X = P^2 K^2 / N`, plus the modulus-one term that the `a = 0`
//! class leaves behind. For level one `M^{-1} n = n`; for `M > 1` the
//! inverse comes from the dual twist in the Voronoi formula.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::integrals::VNatural;
use super::kloosterman::{mod_inverse, KloostermanTable};
use super::phase::WeightedPhase;
use super::sums::s_direct;
use super::PipelineError;
use crate::forms::{primes_up_to, CoefficientTable};
use crate::quad::e;
use crate::special::{bump_u, WeightV, DEFAULT_RAMP_NODES};

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionConfig {
    pub k: f64,
    pub p: f64,
    /// Reject parameters violating `X > (2P)^2 / N` or `N < X^{0.95}`.
    pub enforce_hypotheses: bool,
    /// Multiplies `V`; zero makes every piece vanish.
    pub amplitude: f64,
}

impl DecompositionConfig {
    pub fn new(k: f64, p: f64) -> Self {
        DecompositionConfig { k, p, enforce_hypotheses: true, amplitude: 1.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: f64,
    pub x: f64,
    pub p: f64,
    pub k: f64,
    pub primes: Vec<u64>,
    /// `P*`, the number of primes used.
    pub prime_count: usize,
    pub s_direct: Complex64,
    pub s_decomposed: Complex64,
    /// The modulus-one term averaged over the primes.
    pub s_zero_freq: Complex64,
    /// Average of `p sqrt(N / X)`.
    pub r_p_bound: f64,
    /// `|s_direct - s_decomposed - s_zero_freq|`.
    pub residual: f64,
    /// `P sqrt(N / X) + N^{5/4} X^{1/4} / P^{3/2}`.
    pub envelope: f64,
    /// `residual / envelope`.
    pub constant: f64,
    /// Hypotheses that fail, empty when all hold.
    pub violated: Vec<String>,
    /// Relative change of `s_decomposed` when `V` is rebuilt at twice the
    /// ramp resolution.
    pub stability: f64,
    pub pass: bool,
}

fn hypotheses(n: f64, x: f64, p: f64) -> Vec<String> {
    let mut out = Vec::new();
    if x <= (2.0 * p).powi(2) / n {
        out.push(format!("X > (2P)^2 / N fails: X = {x}, (2P)^2 / N = {}", (2.0 * p).powi(2) / n));
    }
    if n >= x.powf(0.95) {
        out.push(format!("N < X^0.95 fails: N = {n}, X^0.95 = {}", x.powf(0.95)));
    }
    out
}

struct Pieces {
    main: Complex64,
    zero: Complex64,
}

/// Both prime-`p` pieces, before the `1 / P*` average.
fn pieces_for_prime(table: &CoefficientTable, weights: &[(i64, Complex64)], mx: f64, n_scale: f64, x: f64, level: u64, p: u64) -> Result<Pieces, PipelineError> {
    let kl = KloostermanTable::new(p)?;
    let pi = p as i64;
    let m_bar = mod_inverse(level as i64, pi).ok_or_else(|| PipelineError::Config(format!("p = {p} divides the level {level}")))?;
    let sqrt_m = (level as f64).sqrt();
    let amp = 2.0 / (sqrt_m * p as f64);
    let (n_lo, n_hi) = (mx.ceil() as usize, (2.0 * mx).floor() as usize);
    let duals: Vec<(f64, f64, i64)> = (n_lo..=n_hi)
        .map(|m| (table.lambda(m) * bump_u(m as f64 / mx), (m as f64).sqrt(), (m_bar * m as i64).rem_euclid(pi)))
        .filter(|d| d.0 != 0.0)
        .collect();
    let mut main = Complex64::new(0.0, 0.0);
    for &(r, w) in weights {
        let sr = (r as f64).sqrt();
        let row = kl.row_for_r(r);
        let inner: Complex64 = duals.iter().map(|&(c, sn, res)| c * row[res as usize] * e(amp * sn * sr)).sum();
        main += w * inner;
    }
    let pf = p as f64;
    let main = main / pf.sqrt();

    // modulus one: n in [M X / p^2, 2 M X / p^2]
    let (z_lo, z_hi) = ((mx / (pf * pf)).ceil().max(1.0) as usize, (2.0 * mx / (pf * pf)).floor() as usize);
    let mut zero = Complex64::new(0.0, 0.0);
    for m in z_lo..=z_hi {
        let c = table.lambda(m) * bump_u(pf * pf * m as f64 / mx);
        if c == 0.0 {
            continue;
        }
        let sn = (m as f64).sqrt();
        let inner: Complex64 = weights.iter().map(|&(r, w)| w * e(2.0 * sn * (r as f64).sqrt() / sqrt_m)).sum();
        zero += c * inner;
    }
    let scale = n_scale.powf(0.25) / x.powf(0.75);
    Ok(Pieces { main: main * scale, zero: zero * pf.sqrt() * scale })
}

fn decomposed(table: &CoefficientTable, wp: &WeightedPhase, v: &WeightV, amplitude: f64, x: f64, primes: &[u64]) -> Result<(Complex64, Complex64), PipelineError> {
    let desc = table.descriptor();
    let vn = VNatural::new(v.clone(), desc)?;
    let n = wp.phase.n;
    let (lo, hi) = v.support();
    let weights: Vec<(i64, Complex64)> = ((lo * n).ceil() as i64..=(hi * n).floor() as i64)
        .map(|r| (r, amplitude * vn.eval(r as f64 / n) * e(wp.phase.phase_mod1(r as f64))))
        .filter(|w| w.1 != Complex64::new(0.0, 0.0))
        .collect();
    let mx = desc.level as f64 * x;
    let parts: Vec<Pieces> = primes
        .par_iter()
        .map(|&p| pieces_for_prime(table, &weights, mx, n, x, desc.level, p))
        .collect::<Result<_, _>>()?;
    let count = primes.len() as f64;
    let main = parts.iter().map(|p| p.main).sum::<Complex64>() / count;
    let zero = parts.iter().map(|p| p.zero).sum::<Complex64>() / count;
    Ok((main, zero))
}

/// Computes `S(N)` directly and through the decomposition. The residual is
/// measured against the envelope; passes when the fitted constant is at
/// most `c_max`.
pub fn s_decomposed(table: &CoefficientTable, wp: &WeightedPhase, cfg: &DecompositionConfig, c_max: f64) -> Result<DecompositionReport, PipelineError> {
    let desc = table.descriptor();
    let n = wp.phase.n;
    let (k, big_p) = (cfg.k, cfg.p);
    if !(k > 0.0 && big_p > 1.0) {
        return Err(PipelineError::Config(format!("need K > 0 and P > 1, got K = {k}, P = {big_p}")));
    }
    let x = big_p * big_p * k * k / n;
    let violated = hypotheses(n, x, big_p);
    if cfg.enforce_hypotheses && !violated.is_empty() {
        return Err(PipelineError::Hypothesis(violated.join("; ")));
    }
    let primes: Vec<u64> = primes_up_to((2.0 * big_p).floor() as usize)
        .into_iter()
        .filter(|&p| p as f64 >= big_p && p > desc.level)
        .collect();
    if primes.is_empty() {
        return Err(PipelineError::Config(format!("no primes in [{big_p}, {}] above the level", 2.0 * big_p)));
    }
    let needed = (2.0 * desc.level as f64 * x).floor() as usize;
    if needed > table.n_max() {
        return Err(PipelineError::TableTooShort { needed, have: table.n_max() });
    }

    let direct = cfg.amplitude * s_direct(table, wp)?;
    let (main, zero) = decomposed(table, wp, &wp.v, cfg.amplitude, x, &primes)?;
    let fine = WeightV::with_nodes(wp.v.delta(), wp.v.support().1, 2 * DEFAULT_RAMP_NODES)?;
    let (main_fine, _) = decomposed(table, wp, &fine, cfg.amplitude, x, &primes)?;
    let stability = if main == main_fine { 0.0 } else { (main - main_fine).norm() / main.norm().max(main_fine.norm()) };

    let r_p_bound = primes.iter().map(|&p| p as f64).sum::<f64>() / primes.len() as f64 * (n / x).sqrt();
    let envelope = big_p * (n / x).sqrt() + n.powf(1.25) * x.powf(0.25) / big_p.powf(1.5);
    let residual = (direct - main - zero).norm();
    let constant = residual / envelope;
    Ok(DecompositionReport {
        n,
        x,
        p: big_p,
        k,
        prime_count: primes.len(),
        primes,
        s_direct: direct,
        s_decomposed: main,
        s_zero_freq: zero,
        r_p_bound,
        residual,
        envelope,
        constant,
        violated,
        stability,
        pass: constant <= c_max && stability < 1e-6,
    })
}
