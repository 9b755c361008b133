//! Numerical checks of the size bounds for `J`, `K` and `L`. Every bound
//! is tested as a fitted constant plus, where the bound is a power law, a
//! fitted exponent. Constants are reported after dividing out the
//! amplitude `|C_U|` of `V#` (once for `J`, twice for `L`).

use serde::Serialize;

use super::integrals::{j_options, k_integral, k_weight, l_integral, JSetup, JTable, LKernel, VNatural};
use super::phase::{PhaseSpec, Phi};
use super::PipelineError;
use crate::fit::{fit_power_law, PowerFit};
use crate::forms::{primes_up_to, NewformDescriptor};
use crate::special::{make_bump_u, make_weight_v};

/// Negligibility threshold for `J` and `K`.
pub const NEGLIGIBLE: f64 = 1e-8;

fn primes_between(lo: f64, hi: f64, above: u64) -> Vec<u64> {
    primes_up_to(hi.floor() as usize).into_iter().filter(|&p| p as f64 >= lo && p > above).collect()
}

fn setup(form: &NewformDescriptor, n: f64, t: f64, delta: f64) -> Result<JSetup, PipelineError> {
    let v = make_weight_v(delta, 2.0)?;
    Ok(JSetup { phase: PhaseSpec::new(t, 0.0, n, Phi::NegLog)?, weight: VNatural::new(v, form)?, level: form.level as f64 })
}

/// `r` placing the stationary point of `J(y, r, p)` at `x0`:
/// `r / p = gamma + (T phi'(x0) + sqrt(N y / x0) / (sqrt M p)) / N`.
pub fn stationary_r(s: &JSetup, p: u64, x0: f64, y: f64) -> i64 {
    let ph = &s.phase;
    let pf = p as f64;
    let slope = ph.t * ph.phi.d1(x0) + (ph.n * y / x0).sqrt() / (s.level.sqrt() * pf);
    (pf * (ph.gamma + slope / ph.n)).round() as i64
}

#[derive(Clone, Debug, Serialize)]
pub struct JRow {
    pub t: f64,
    pub p: u64,
    pub x: f64,
    pub max_abs: f64,
    /// `max |J| sqrt(T) / |C_U|`.
    pub normalized: f64,
    /// `max |J|` over `r` with `N |r/p - gamma| >= 10 T`.
    pub far_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct JLemmaReport {
    pub n: f64,
    pub rows: Vec<JRow>,
    pub fit: PowerFit,
    pub constant: f64,
    pub far_max: f64,
    pub pass: bool,
}

/// `|J| <= C / sqrt T`: for each `T` the parameters follow `K = T^{2/3}`,
/// `P = N / T^{1/3}`, `X = P^2 K^2 / N`, with `p` the first prime above
/// `P`. Stationary configurations are sampled at `x0 in {1.2, 1.5, 1.8}`,
/// `y / MX in {1.2, 1.7}` and nearby `r`.
pub fn j_lemma_check(form: &NewformDescriptor, n: f64, t_grid: &[f64], delta: f64) -> Result<JLemmaReport, PipelineError> {
    let mut rows = Vec::new();
    let opts = j_options();
    for &t in t_grid {
        let s = setup(form, n, t, delta)?;
        let (k, p_scale) = (t.powf(2.0 / 3.0), n / t.cbrt());
        let x = p_scale * p_scale * k * k / n;
        let mx = form.level as f64 * x;
        let p = *primes_between(p_scale, 2.0 * p_scale, form.level)
            .first()
            .ok_or_else(|| PipelineError::Config(format!("no prime in [{p_scale}, {}]", 2.0 * p_scale)))?;
        let mut max_abs = 0.0f64;
        let mut far_max = 0.0f64;
        for &y in &[1.2 * mx, 1.7 * mx] {
            for &x0 in &[1.2, 1.5, 1.8] {
                let r0 = stationary_r(&s, p, x0, y);
                for r in r0 - 2..=r0 + 2 {
                    let q = s.j_integral(y, r, p, &opts);
                    if !q.converged {
                        return Err(PipelineError::Quadrature { what: format!("J({y}, {r}, {p})"), err: q.err_estimate });
                    }
                    max_abs = max_abs.max(q.value.norm());
                }
            }
            let reach = (10.0 * t * p as f64 / n).ceil() as i64 + 1;
            let centre = (s.phase.gamma * p as f64).round() as i64;
            for r in [centre - reach, centre + reach, centre - 2 * reach, centre + 2 * reach] {
                far_max = far_max.max(s.j_integral(y, r, p, &opts).value.norm());
            }
        }
        let normalized = max_abs * t.sqrt() / s.weight.constant().norm();
        rows.push(JRow { t, p, x, max_abs, normalized, far_max });
    }
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let ms: Vec<f64> = rows.iter().map(|r| r.max_abs).collect();
    let fit = fit_power_law(&ts, &ms);
    let constant = rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
    let far_max = rows.iter().map(|r| r.far_max).fold(0.0, f64::max);
    let pass = fit.within(-0.5, 0.1) && far_max <= NEGLIGIBLE;
    Ok(JLemmaReport { n, rows, fit, constant, far_max, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct KDerivativeRow {
    pub x: f64,
    /// `max over lambda of lambda^j |W^(j)(lambda)|` for `j = 0, 1, 2`.
    pub max_scaled: [f64; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct KLemmaReport {
    pub k: f64,
    /// `K(0, 0)` against `integral U`.
    pub origin_error: f64,
    /// `max |K|` for `|x| >= 2K`.
    pub far_max: f64,
    /// `max sqrt|x| |K|` for `wK/x` outside `(2/3, 3/2)`, `|x| in {500, 1000}`.
    pub off_ratio_max: f64,
    pub derivative_rows: Vec<KDerivativeRow>,
    pub derivative_fits: Vec<PowerFit>,
    /// `max sqrt x lambda^j |W^(j)|` over all rows and `j`.
    pub derivative_constant: f64,
    /// Largest difference between `K(wK, 0)` values sharing the product `wK`.
    pub collapse_max: f64,
    pub pass: bool,
}

/// Checks the three statements about `K(wK, x)`. The far regime is tested
/// from `|x| >= 2K`; at `|x| = K` itself the integral is only about `4e-7`
/// for `|w|` near its maximum.
pub fn k_lemma_check(k: f64) -> Result<KLemmaReport, PipelineError> {
    let w_max = 2f64.sqrt() - 0.5;
    let origin_error = (k_integral(0.0, k, 0.0).value.re - make_bump_u().integral()).abs();

    let mut far_max = 0.0f64;
    for &xm in &[2.0, 3.0, 4.0] {
        for &sign in &[1.0, -1.0] {
            for i in 0..=8 {
                let w = -w_max + 2.0 * w_max * i as f64 / 8.0;
                far_max = far_max.max(k_integral(w, k, sign * xm * k).value.norm());
            }
        }
    }

    // K large enough that |w| <= w_max reaches wK = 1.8 |x|
    let k_big = 2000.0;
    let mut off_ratio_max = 0.0f64;
    for &x in &[500.0f64, 1000.0, -500.0, -1000.0] {
        for &ratio in &[-1.0, -0.3, 0.3, 0.5, 0.6, 1.6, 1.8] {
            let w: f64 = ratio * x / k_big;
            if w.abs() > w_max {
                continue;
            }
            off_ratio_max = off_ratio_max.max(k_integral(w, k_big, x).value.norm() * x.abs().sqrt());
        }
    }

    let xs = [250.0, 500.0, 1000.0, 2000.0, 4000.0];
    let mut derivative_rows = Vec::new();
    for &x in &xs {
        let mut m = [0.0f64; 3];
        for &q in &[0.3, 0.5, 0.8, 1.0, 1.3, 1.6, 2.0, 2.5, 3.5] {
            let lam = q * x;
            let h = 1e-3 * lam;
            let (a, b, c) = (k_weight(lam - h, x).value, k_weight(lam, x).value, k_weight(lam + h, x).value);
            m[0] = m[0].max(b.norm());
            m[1] = m[1].max(lam * ((c - a) / (2.0 * h)).norm());
            m[2] = m[2].max(lam * lam * ((c - 2.0 * b + a) / (h * h)).norm());
        }
        derivative_rows.push(KDerivativeRow { x, max_scaled: m });
    }
    let derivative_fits: Vec<PowerFit> = (0..3)
        .map(|j| fit_power_law(&xs, &derivative_rows.iter().map(|r| r.max_scaled[j]).collect::<Vec<_>>()))
        .collect();
    let derivative_constant =
        derivative_rows.iter().flat_map(|r| r.max_scaled.iter().map(move |v| v * r.x.sqrt())).fold(0.0, f64::max);

    let mut collapse_max = 0.0f64;
    for &prod in &[3.0, 17.5, 40.0] {
        let reference = k_integral(prod / k, k, 0.0).value;
        for &kk in &[k / 2.0, 2.0 * k, 5.0 * k] {
            collapse_max = collapse_max.max((k_integral(prod / kk, kk, 0.0).value - reference).norm());
        }
    }

    let pass = origin_error < 1e-13
        && far_max <= NEGLIGIBLE
        && off_ratio_max <= NEGLIGIBLE
        && derivative_fits.iter().all(|f| f.within(-0.5, 0.1))
        && collapse_max < 1e-12;
    Ok(KLemmaReport {
        k,
        origin_error,
        far_max,
        off_ratio_max,
        derivative_rows,
        derivative_fits,
        derivative_constant,
        collapse_max,
        pass,
    })
}

/// Parameters of the `L` checks.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LConfig {
    pub n: f64,
    pub t: f64,
    pub k: f64,
    /// `P`.
    pub p_scale: f64,
    pub delta: f64,
    /// Uniform bound on every normalized constant.
    pub c_max: f64,
}

impl Default for LConfig {
    /// `K^2 / T = 5`, leaving a mid-range window `[4K^2/T, 0.6 K] = [20, 60]`.
    fn default() -> Self {
        LConfig { n: 1000.0, t: 2000.0, k: 100.0, p_scale: 100.0, delta: 4.0, c_max: 10.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LRow {
    pub x: f64,
    pub max_abs: f64,
    /// `max |L| T sqrt|x| / |C_U|^2`, or `max |L| T / |C_U|^2` when `x = 0`.
    pub normalized: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LZeroRow {
    pub p: u64,
    pub r1: i64,
    pub r2: i64,
    pub abs: f64,
    /// `min{1/T, P / (K N |r1 - r2|)}`.
    pub bound: f64,
    /// `|L(0)| / (|C_U|^2 bound)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LLemmaReport {
    pub config: LConfig,
    pub mx: f64,
    pub pairs: usize,
    /// Worst `|table - adaptive J|` relative to the largest `|J|` sampled.
    pub table_deviation: f64,
    /// Worst `|kernel - adaptive L|` over spot checks.
    pub kernel_deviation: f64,
    pub small_rows: Vec<LRow>,
    pub mid_rows: Vec<LRow>,
    pub mid_fit: PowerFit,
    pub far_max: f64,
    pub zero_rows: Vec<LZeroRow>,
    /// `max |L| T / |C_U|^2` over every evaluation.
    pub uniform_constant: f64,
    pub mid_constant: f64,
    pub zero_constant: f64,
    pub pass: bool,
}

/// Checks the three regimes of `L(x)`. `L` is evaluated over a family of
/// pairs: `p1` at either end of `[P, 2P]`, `p2` over every prime in
/// `[P, 2P]`, and `r_i` placing the stationary point of `J` at ten
/// positions in `[1, 2]`. The mid-range exponent is fitted to the family
/// maximum on `[4K^2/T, 0.6K]`; below `4K^2/T` the cross term of the phase
/// Hessian is not yet small against `T` and the maximum is still rising.
pub fn l_lemma_check(form: &NewformDescriptor, cfg: LConfig) -> Result<LLemmaReport, PipelineError> {
    let LConfig { n, t, k, p_scale, delta, c_max } = cfg;
    let s = setup(form, n, t, delta)?;
    let cu2 = s.weight.constant().norm_sqr();
    let mx = form.level as f64 * p_scale * p_scale * k * k / n;
    let primes = primes_between(p_scale, 2.0 * p_scale, form.level);
    if primes.len() < 2 {
        return Err(PipelineError::Config(format!("need two primes in [{p_scale}, {}]", 2.0 * p_scale)));
    }
    let table = |r: i64, p: u64| JTable::build(&s, r, p, mx, 2.0 * mx);
    let ymid = 1.5 * mx;
    let (p_lo, p_hi) = (primes[0], *primes.last().unwrap());
    let anchors = [table(stationary_r(&s, p_lo, 1.5, ymid), p_lo)?, table(stationary_r(&s, p_hi, 1.5, ymid), p_hi)?];

    let j_scale = anchors.iter().map(|a| a.eval(ymid).norm()).fold(0.0, f64::max);
    let mut table_deviation = 0.0f64;
    for a in &anchors {
        table_deviation = table_deviation.max(a.max_deviation(&s, 5)? / j_scale);
    }

    let k2t = k * k / t;
    let mid_x: Vec<f64> = (0..6).map(|i| 4.0 * k2t * (0.15 * k / k2t).powf(i as f64 / 5.0)).collect();
    let small_x: Vec<f64> = vec![0.0, 0.25 * k2t, 0.5 * k2t, k2t];
    let far_x = [2.0 * k, 3.0 * k];
    let mut mid_max = vec![0.0f64; mid_x.len()];
    let mut small_max = vec![0.0f64; small_x.len()];
    let mut far_max = 0.0f64;
    let mut uniform = 0.0f64;
    let mut pairs = 0;
    let mut kernel_deviation = 0.0f64;
    let positions: Vec<f64> = (0..10).map(|i| 1.05 + 0.1 * i as f64).collect();
    for &p2 in &primes {
        for &x0 in &positions {
            let t2 = table(stationary_r(&s, p2, x0, ymid), p2)?;
            for t1 in &anchors {
                let ker = LKernel::new(t1, &t2, mx, 3.0 * k);
                pairs += 1;
                if pairs <= 2 {
                    for &x in &[0.0, mid_x[2], far_x[0]] {
                        let direct = l_integral(t1, &t2, mx, x).value;
                        kernel_deviation = kernel_deviation.max((ker.eval(x) - direct).norm());
                    }
                }
                for (i, &x) in mid_x.iter().enumerate() {
                    mid_max[i] = mid_max[i].max(ker.eval(x).norm().max(ker.eval(-x).norm()));
                }
                for (i, &x) in small_x.iter().enumerate() {
                    small_max[i] = small_max[i].max(ker.eval(x).norm().max(ker.eval(-x).norm()));
                }
                for &x in &far_x {
                    far_max = far_max.max(ker.eval(x).norm().max(ker.eval(-x).norm()));
                }
            }
        }
    }
    for v in mid_max.iter().chain(&small_max) {
        uniform = uniform.max(v * t / cu2);
    }
    let mid_rows: Vec<LRow> = mid_x
        .iter()
        .zip(&mid_max)
        .map(|(&x, &m)| LRow { x, max_abs: m, normalized: m * t * x.sqrt() / cu2 })
        .collect();
    let small_rows: Vec<LRow> =
        small_x.iter().zip(&small_max).map(|(&x, &m)| LRow { x, max_abs: m, normalized: m * t / cu2 }).collect();
    let mid_fit = fit_power_law(&mid_x, &mid_max);
    let mid_constant = mid_rows.iter().map(|r| r.normalized).fold(0.0, f64::max);

    let mut zero_rows = Vec::new();
    let base = &anchors[0];
    for d in [0i64, 1, 2, 4, 8, 16, 32, 64] {
        let r2 = base.r + d;
        let other = table(r2, base.p)?;
        let abs = LKernel::new(base, &other, mx, 1.0).eval(0.0).norm();
        let bound = if d == 0 { 1.0 / t } else { (1.0 / t).min(p_scale / (k * n * d as f64)) };
        zero_rows.push(LZeroRow { p: base.p, r1: base.r, r2, abs, bound, ratio: abs / (cu2 * bound) });
    }
    let zero_constant = zero_rows.iter().map(|r| r.ratio).fold(0.0, f64::max);

    let pass = far_max <= 1e-9
        && mid_fit.within(-0.5, 0.1)
        && uniform <= c_max
        && mid_constant <= c_max
        && zero_constant <= c_max
        && table_deviation <= 1e-8
        && kernel_deviation <= 1e-10 * cu2 / t;
    Ok(LLemmaReport {
        config: cfg,
        mx,
        pairs,
        table_deviation,
        kernel_deviation,
        small_rows,
        mid_rows,
        mid_fit,
        far_max,
        zero_rows,
        uniform_constant: uniform,
        mid_constant,
        zero_constant,
        pass,
    })
}
