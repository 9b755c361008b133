//! The oscillatory integrals produced by the Poisson steps:
//!
//! ```text
//! J(y, r, p) = integral V#(x) e(T phi(x) + gamma N x + 2 sqrt(N x y) / (sqrt M p) - r N x / p) dx
//! K(w K, x)  = integral U(y) e(2 w K sqrt y - x y) dy
//! L(x)       = integral U(y) J(M X y, r1, p1) conj J(M X y, r2, p2) e(-x y) dy
//! ```

use num_complex::Complex64;

use super::phase::PhaseSpec;
use super::PipelineError;
use crate::forms::NewformDescriptor;
use crate::quad::{e, gauss_legendre, integrate, integrate_oscillatory, QuadOptions, QuadResult, WithFreq};
use crate::special::{bump_u, make_bump_u, WeightV};

/// `V#(x) = C_U eta xi(-1) M^{-1/2} x^{1/4} V(x)`.
#[derive(Clone, Debug)]
pub struct VNatural {
    v: WeightV,
    constant: Complex64,
}

impl VNatural {
    pub fn new(v: WeightV, form: &NewformDescriptor) -> Result<Self, PipelineError> {
        let eta = form.eta().ok_or(PipelineError::Uncalibrated)?;
        let constant = make_bump_u().c_u() * eta * form.xi_minus_one() / (form.level as f64).sqrt();
        Ok(VNatural { v, constant })
    }

    /// The identically zero weight on the support of `v`.
    pub fn zero(v: WeightV) -> Self {
        VNatural { v, constant: Complex64::new(0.0, 0.0) }
    }

    pub fn weight(&self) -> &WeightV {
        &self.v
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        if self.constant == Complex64::new(0.0, 0.0) {
            return self.constant;
        }
        self.constant * (x.sqrt().sqrt() * self.v.eval(x))
    }

    /// Support endpoints and the ends of the two ramps.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.v.support();
        let w = 1.0 / self.v.delta();
        vec![a, a + w, b - w, b]
    }
}

/// Everything `J` depends on besides `y`.
#[derive(Clone, Debug)]
pub struct JSetup {
    pub phase: PhaseSpec,
    pub weight: VNatural,
    /// Level `M`.
    pub level: f64,
}

impl JSetup {
    pub(crate) fn linear(&self, r: i64, p: u64) -> f64 {
        (self.phase.gamma - r as f64 / p as f64) * self.phase.n
    }

    fn phase_at(&self, x: f64, y: f64, r: i64, p: u64) -> f64 {
        let ph = &self.phase;
        ph.t * ph.phi.eval(x) + self.linear(r, p) * x + 2.0 * (ph.n * x * y).sqrt() / (self.level.sqrt() * p as f64)
    }

    fn dphase_at(&self, x: f64, y: f64, r: i64, p: u64) -> f64 {
        let ph = &self.phase;
        ph.t * ph.phi.d1(x) + self.linear(r, p) + (ph.n * y / x).sqrt() / (self.level.sqrt() * p as f64)
    }

    /// `J(y, r, p)` by adaptive oscillatory quadrature.
    pub fn j_integral(&self, y: f64, r: i64, p: u64, opts: &QuadOptions) -> QuadResult {
        let bps = self.weight.breakpoints();
        let (a, b) = (bps[0], bps[3]);
        let opts = QuadOptions { breakpoints: bps, ..opts.clone() };
        let d = |x: f64| self.dphase_at(x, y, r, p);
        integrate_oscillatory(|x| self.weight.eval(x), |x| self.phase_at(x, y, r, p), Some(&d), a, b, &opts)
    }

    /// Largest `|d phase / dx|` over the support for `y <= y_max`.
    pub(crate) fn max_rate(&self, r: i64, p: u64, y_max: f64) -> f64 {
        let ph = &self.phase;
        let (a, b) = self.weight.v.support();
        let slope = (0..=64)
            .map(|i| a + (b - a) * i as f64 / 64.0)
            .map(|x| (ph.t * ph.phi.d1(x) + self.linear(r, p)).abs())
            .fold(0.0, f64::max);
        slope + (ph.n * y_max / a).sqrt() / (self.level.sqrt() * p as f64)
    }
}

/// Default tolerance for `J`.
pub fn j_options() -> QuadOptions {
    QuadOptions::with_tol(1e-15, 1e-10)
}

/// `J(y, r, p)` for `y` in `[y_lo, y_hi]` held as a Chebyshev interpolant.
/// The node values come from one fixed Gauss–Legendre rule in `x` with
/// panels spanning at most two cycles of the phase, shared by all nodes.
#[derive(Clone, Debug)]
pub struct JTable {
    pub r: i64,
    pub p: u64,
    y_lo: f64,
    y_hi: f64,
    values: Vec<Complex64>,
    /// Chebyshev points in `[-1, 1]` and barycentric weights.
    points: Vec<f64>,
    bary: Vec<f64>,
    /// Cycles per unit `y` of the fastest component, used as a frequency
    /// hint by integrals over `y`.
    pub y_rate: f64,
}

impl JTable {
    pub fn build(setup: &JSetup, r: i64, p: u64, y_lo: f64, y_hi: f64) -> Result<Self, PipelineError> {
        if !(y_lo > 0.0 && y_hi > y_lo) {
            return Err(PipelineError::Config(format!("J table needs 0 < y_lo < y_hi, got [{y_lo}, {y_hi}]")));
        }
        let ph = &setup.phase;
        let amp_y = 1.0 / (setup.level.sqrt() * p as f64);
        // d/dy of 2 sqrt(N x y) amp_y is at most sqrt(N x / y) amp_y
        let (_, b) = setup.weight.v.support();
        let y_rate = (ph.n * b / y_lo).sqrt() * amp_y;
        let half = 0.5 * (y_hi - y_lo);
        let count = (1.2 * std::f64::consts::TAU * y_rate * half).ceil() as usize + 40;
        let points: Vec<f64> = (0..=count).map(|j| (std::f64::consts::PI * j as f64 / count as f64).cos()).collect();
        let bary: Vec<f64> = (0..=count)
            .map(|j| {
                let w = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == count {
                    0.5 * w
                } else {
                    w
                }
            })
            .collect();
        let ys: Vec<f64> = points.iter().map(|s| y_lo + half * (1.0 + s)).collect();

        let rate = setup.max_rate(r, p, y_hi);
        let bps = setup.weight.breakpoints();
        let (gx, gw) = gauss_legendre(16);
        let mut rule: Vec<(f64, Complex64)> = Vec::new();
        for seg in bps.windows(2) {
            let len = seg[1] - seg[0];
            let panels = ((rate * len / 2.0).ceil() as usize).max(8);
            let h = len / panels as f64;
            for k in 0..panels {
                let mid = seg[0] + (k as f64 + 0.5) * h;
                for i in 0..16 {
                    let x = mid + 0.5 * h * gx[i];
                    let base = ph.t * ph.phi.eval(x) + setup.linear(r, p) * x;
                    rule.push((x, setup.weight.eval(x) * e(base) * (0.5 * h * gw[i])));
                }
            }
        }
        let values = ys
            .iter()
            .map(|&y| rule.iter().map(|&(x, w)| w * e(2.0 * (ph.n * x * y).sqrt() * amp_y)).sum())
            .collect();
        Ok(JTable { r, p, y_lo, y_hi, values, points, bary, y_rate })
    }

    pub fn nodes(&self) -> usize {
        self.values.len()
    }

    /// Barycentric interpolation at Chebyshev points of the second kind.
    pub fn eval(&self, y: f64) -> Complex64 {
        let s = (2.0 * y - self.y_lo - self.y_hi) / (self.y_hi - self.y_lo);
        let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
        for ((v, &xj), &b) in self.values.iter().zip(&self.points).zip(&self.bary) {
            let d = s - xj;
            if d == 0.0 {
                return *v;
            }
            let w = b / d;
            num += *v * w;
            den += w;
        }
        num / den
    }

    /// Largest `|table - adaptive J|` over `samples` equispaced points.
    pub fn max_deviation(&self, setup: &JSetup, samples: usize) -> Result<f64, PipelineError> {
        let mut worst = 0.0f64;
        for i in 0..samples {
            let y = self.y_lo + (self.y_hi - self.y_lo) * (i as f64 + 0.37) / samples as f64;
            let direct = setup.j_integral(y, self.r, self.p, &j_options());
            if !direct.converged {
                return Err(PipelineError::Quadrature { what: format!("J({y}, {}, {})", self.r, self.p), err: direct.err_estimate });
            }
            worst = worst.max((self.eval(y) - direct.value).norm());
        }
        Ok(worst)
    }
}

/// `K(wK, x) = integral_1^2 U(y) e(2 wK sqrt y - x y) dy`.
pub fn k_integral(w: f64, k: f64, x: f64) -> QuadResult {
    let wk = w * k;
    let g = WithFreq {
        f: |y: f64| bump_u(y) * e(2.0 * wk * y.sqrt() - x * y),
        freq: |y: f64| (wk / y.sqrt() - x).abs(),
    };
    integrate(&g, 1.0, 2.0, &QuadOptions::with_tol(1e-18, 1e-12))
}

/// `W(lambda) = e(-lambda) K(sqrt(lambda x), x)` for `x > 0`.
pub fn k_weight(lambda: f64, x: f64) -> QuadResult {
    let r = k_integral((lambda * x).sqrt(), 1.0, x);
    QuadResult { value: r.value * e(-lambda), ..r }
}

/// `L(x)` from two tables on `y`-range `[MX, 2MX]`, written in the
/// normalized variable `y in [1, 2]`.
pub fn l_integral(t1: &JTable, t2: &JTable, mx: f64, x: f64) -> QuadResult {
    let rate = (t1.y_rate + t2.y_rate) * mx + x.abs();
    let g = WithFreq {
        f: |y: f64| bump_u(y) * t1.eval(mx * y) * t2.eval(mx * y).conj() * e(-x * y),
        freq: |_y: f64| rate,
    };
    integrate(&g, 1.0, 2.0, &QuadOptions::with_tol(1e-20, 1e-9))
}

/// `U(y) J1(MX y) conj J2(MX y)` tabulated on a Gauss–Legendre rule over
/// `[1, 2]` fine enough for every `|x| <= x_max`, so that `L(x)` for many
/// `x` costs one dot product each.
#[derive(Clone, Debug)]
pub struct LKernel {
    nodes: Vec<(f64, Complex64)>,
    x_max: f64,
}

impl LKernel {
    pub fn new(t1: &JTable, t2: &JTable, mx: f64, x_max: f64) -> Self {
        let rate = (t1.y_rate + t2.y_rate) * mx + x_max;
        let panels = ((rate / 2.0).ceil() as usize).max(32);
        let h = 1.0 / panels as f64;
        let (gx, gw) = gauss_legendre(16);
        let mut nodes = Vec::with_capacity(16 * panels);
        for k in 0..panels {
            let mid = 1.0 + (k as f64 + 0.5) * h;
            for i in 0..16 {
                let y = mid + 0.5 * h * gx[i];
                let g = bump_u(y) * t1.eval(mx * y) * t2.eval(mx * y).conj();
                nodes.push((y, g * (0.5 * h * gw[i])));
            }
        }
        LKernel { nodes, x_max }
    }

    /// `L(x)`; panics for `|x| > x_max`.
    pub fn eval(&self, x: f64) -> Complex64 {
        assert!(x.abs() <= self.x_max, "|x| = {} beyond the kernel's x_max = {}", x.abs(), self.x_max);
        self.nodes.iter().map(|&(y, g)| g * e(-x * y)).sum()
    }
}
