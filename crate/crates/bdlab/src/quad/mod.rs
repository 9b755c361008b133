//! Oscillation-aware Gauss–Legendre quadrature.
//!
//! The interval is cut into panels no wider than a fixed fraction of the
//! local wavelength reported by [`Integrand::freq`]; each panel gets a
//! 16-point Gauss–Legendre rule. The error estimate compares the result on
//! the current partition with the partition that merges neighbouring panel
//! pairs, and the partition is bisected until the estimate meets the
//! tolerance or the panel cap is hit.

pub mod appendix;

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::special::dd::Dd;

/// `e(x) = exp(2 pi i x)` with the argument reduced mod 1 first.
#[inline]
pub fn e(x: f64) -> Complex64 {
    let r = x - x.round();
    Complex64::cis(std::f64::consts::TAU * r)
}

/// `e(x)` for a phase carried in double-double.
#[inline]
pub fn e_dd(x: Dd) -> Complex64 {
    Complex64::cis(std::f64::consts::TAU * x.frac_centered())
}

pub trait Integrand {
    fn eval(&self, x: f64) -> Complex64;

    /// Upper estimate of the local oscillation frequency in cycles per unit
    /// length.
    fn freq(&self, _x: f64) -> f64 {
        0.0
    }
}

impl<F: Fn(f64) -> Complex64> Integrand for F {
    fn eval(&self, x: f64) -> Complex64 {
        self(x)
    }
}

/// A closure integrand paired with a frequency oracle.
pub struct WithFreq<F, G> {
    pub f: F,
    pub freq: G,
}

impl<F: Fn(f64) -> Complex64, G: Fn(f64) -> f64> Integrand for WithFreq<F, G> {
    fn eval(&self, x: f64) -> Complex64 {
        (self.f)(x)
    }
    fn freq(&self, x: f64) -> f64 {
        (self.freq)(x)
    }
}

#[derive(Clone, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    pub min_panels: usize,
    /// Panels per local wavelength; 4 means each panel spans at most a quarter.
    pub panels_per_wavelength: f64,
    pub breakpoints: Vec<f64>,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_panels: 1 << 21,
            min_panels: 8,
            panels_per_wavelength: 4.0,
            breakpoints: Vec::new(),
        }
    }
}

impl QuadOptions {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions { abs_tol, rel_tol, ..Default::default() }
    }

    pub fn breakpoints(mut self, pts: &[f64]) -> Self {
        self.breakpoints = pts.to_vec();
        self
    }

    pub fn min_panels(mut self, n: usize) -> Self {
        self.min_panels = n;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// `|fine - half|` where `half` merges neighbouring panel pairs.
    pub err_estimate: f64,
    pub panels: usize,
    pub evaluations: usize,
    /// Integral of `|g|` on the final partition, the natural scale for
    /// relative tolerances.
    pub abs_integral: f64,
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            err_estimate: 0.0,
            panels: 0,
            evaluations: 0,
            abs_integral: 0.0,
            converged: true,
        }
    }
}

const ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, found by Newton iteration
/// on the three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        ws[i] = w;
        xs[n - 1 - i] = x;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

fn gl16() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static RULE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_legendre(ORDER);
        let mut xa = [0.0; ORDER];
        let mut wa = [0.0; ORDER];
        xa.copy_from_slice(&x);
        wa.copy_from_slice(&w);
        (xa, wa)
    })
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n if n <= 8 => v.iter().sum(),
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

pub fn pairwise_sum_f64(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        n if n <= 8 => v.iter().sum(),
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum_f64(a) + pairwise_sum_f64(b)
        }
    }
}

fn panel<I: Integrand + ?Sized>(f: &I, a: f64, b: f64) -> (Complex64, f64) {
    let (xs, ws) = gl16();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = Complex64::new(0.0, 0.0);
    let mut sa = 0.0;
    for i in 0..ORDER {
        let g = f.eval(c + h * xs[i]);
        s += g * ws[i];
        sa += g.norm() * ws[i];
    }
    (s * h, sa * h.abs())
}

fn initial_partition<I: Integrand + ?Sized>(f: &I, a: f64, b: f64, opts: &QuadOptions) -> Option<Vec<f64>> {
    let mut stops: Vec<f64> = opts.breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    stops.sort_by(|x, y| x.partial_cmp(y).unwrap());
    stops.dedup();
    stops.push(b);
    let hmax = (b - a) / opts.min_panels.max(1) as f64;
    let ppw = opts.panels_per_wavelength;
    let mut cuts = vec![a];
    let mut lo = a;
    for hi in stops {
        let mut x = lo;
        let tiny = 1e-13 * (hi - lo).abs().max(f64::MIN_POSITIVE);
        loop {
            let nu = f.freq(x).abs();
            let mut h = if nu > 0.0 { (1.0 / (ppw * nu)).min(hmax) } else { hmax };
            let nu2 = f.freq((x + h).min(hi)).abs();
            if nu2 > nu {
                h = h.min(1.0 / (ppw * nu2));
            }
            if x + h >= hi - tiny {
                cuts.push(hi);
                break;
            }
            x += h;
            cuts.push(x);
            if cuts.len() > opts.max_panels + 1 {
                return None;
            }
        }
        lo = hi;
    }
    Some(cuts)
}

fn evaluate<I: Integrand + ?Sized>(f: &I, cuts: &[f64]) -> (Complex64, f64) {
    let mut vals = Vec::with_capacity(cuts.len() - 1);
    let mut abs = Vec::with_capacity(cuts.len() - 1);
    for w in cuts.windows(2) {
        let (v, a) = panel(f, w[0], w[1]);
        vals.push(v);
        abs.push(a);
    }
    (pairwise_sum(&vals), pairwise_sum_f64(&abs))
}

fn merged(cuts: &[f64]) -> Vec<f64> {
    let mut m: Vec<f64> = cuts.iter().step_by(2).copied().collect();
    if (cuts.len() - 1) % 2 == 1 {
        m.push(*cuts.last().unwrap());
    }
    m
}

fn bisected(cuts: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * cuts.len());
    for w in cuts.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.push(*cuts.last().unwrap());
    out
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<I: Integrand + ?Sized>(f: &I, a: f64, b: f64, opts: &QuadOptions) -> QuadResult {
    if a == b {
        return QuadResult::zero();
    }
    if b < a {
        let r = integrate(f, b, a, opts);
        return QuadResult { value: -r.value, ..r };
    }
    let (cuts, capped) = match initial_partition(f, a, b, opts) {
        Some(c) => (c, false),
        None => {
            let n = opts.max_panels;
            ((0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect(), true)
        }
    };
    let mut cuts = cuts;
    let (mut half, _) = if cuts.len() > 2 { evaluate(f, &merged(&cuts)) } else { (Complex64::new(f64::NAN, 0.0), 0.0) };
    let mut evals = if cuts.len() > 2 { ORDER * (merged(&cuts).len() - 1) } else { 0 };
    loop {
        let (fine, abs) = evaluate(f, &cuts);
        evals += ORDER * (cuts.len() - 1);
        let err = if half.re.is_nan() { f64::INFINITY } else { (fine - half).norm() };
        let tol = opts.abs_tol.max(opts.rel_tol * abs);
        let panels = cuts.len() - 1;
        if !capped && err <= tol {
            return QuadResult { value: fine, err_estimate: err, panels, evaluations: evals, abs_integral: abs, converged: true };
        }
        if capped || 2 * panels > opts.max_panels {
            return QuadResult { value: fine, err_estimate: err, panels, evaluations: evals, abs_integral: abs, converged: false };
        }
        half = fine;
        cuts = bisected(&cuts);
    }
}

/// `integral of amp(x) e(phase(x)) dx` over `[a, b]`, with panel widths
/// driven by `|phase'|`. Without a derivative oracle a central difference is
/// used.
pub fn integrate_oscillatory<A, P>(
    amp: A,
    phase: P,
    dphase: Option<&dyn Fn(f64) -> f64>,
    a: f64,
    b: f64,
    opts: &QuadOptions,
) -> QuadResult
where
    A: Fn(f64) -> Complex64,
    P: Fn(f64) -> f64,
{
    let h = 1e-6 * (b - a).abs();
    let freq = |x: f64| match dphase {
        Some(d) => d(x).abs(),
        None => ((phase(x + h) - phase(x - h)) / (2.0 * h)).abs(),
    };
    let g = WithFreq { f: |x: f64| amp(x) * e(phase(x)), freq };
    integrate(&g, a, b, opts)
}

/// Iterated 2-d integral over a rectangle; `inner_freq` bounds the
/// oscillation in `y`, `outer_freq` in `x`.
#[allow(clippy::too_many_arguments)]
pub fn integrate_2d<F, G, H>(
    f: F,
    inner_freq: G,
    outer_freq: H,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    opts: &QuadOptions,
) -> QuadResult
where
    F: Fn(f64, f64) -> Complex64,
    G: Fn(f64, f64) -> f64,
    H: Fn(f64) -> f64,
{
    let inner_evals = std::cell::Cell::new(0usize);
    let inner_ok = std::cell::Cell::new(true);
    let outer = WithFreq {
        f: |x: f64| {
            let inner = WithFreq { f: |y: f64| f(x, y), freq: |y: f64| inner_freq(x, y) };
            let r = integrate(&inner, ay, by, opts);
            inner_evals.set(inner_evals.get() + r.evaluations);
            if !r.converged {
                inner_ok.set(false);
            }
            r.value
        },
        freq: outer_freq,
    };
    let r = integrate(&outer, ax, bx, opts);
    QuadResult { evaluations: inner_evals.get(), converged: r.converged && inner_ok.get(), ..r }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl16_integrates_degree_31_exactly() {
        let (x, w) = gauss_legendre(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-15);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-15);
    }

    #[test]
    fn plain_polynomial() {
        let r = integrate(&|x: f64| Complex64::new(x * x, 0.0), 0.0, 3.0, &QuadOptions::default());
        assert!(r.converged);
        assert!((r.value.re - 9.0).abs() < 1e-13);
    }

    #[test]
    fn reversed_interval_negates() {
        let f = |x: f64| Complex64::new(x.exp(), 0.0);
        let a = integrate(&f, 0.0, 1.0, &QuadOptions::default());
        let b = integrate(&f, 1.0, 0.0, &QuadOptions::default());
        assert_eq!(a.value, -b.value);
    }

    #[test]
    fn panel_cap_sets_flag() {
        let opts = QuadOptions { max_panels: 16, ..Default::default() };
        let r = integrate_oscillatory(|_| Complex64::new(1.0, 0.0), |x| 1e4 * x, None, 0.0, 1.0, &opts);
        assert!(!r.converged);
    }

    #[test]
    fn e_reduces_large_arguments() {
        let v = e(1e6 + 0.25);
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-9);
        let v = e_dd(Dd::new(1e12).add_f64(0.25));
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
