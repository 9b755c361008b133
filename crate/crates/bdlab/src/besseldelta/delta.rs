use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::integral::bessel_integral_signed;
use super::BesselDeltaError;
use crate::forms::curve::is_prime;
use crate::forms::i_pow;
use crate::quad::QuadOptions;
use crate::special::BumpU;

/// Parameters of the delta-identity: a prime `p`, the range `[N, 2N]`, the
/// integral scale `X` and the weight `k`.
#[derive(Clone, Debug)]
pub struct DeltaParams {
    p: u64,
    n: f64,
    x: f64,
    k: u32,
    epsilon: f64,
    u: BumpU,
}

impl DeltaParams {
    /// Checks `X > p^2 / N` and `X^{1 - epsilon} > N`.
    pub fn new(p: u64, n: f64, x: f64, k: u32, epsilon: f64, u: BumpU) -> Result<Self, BesselDeltaError> {
        if !is_prime(p) {
            return Err(BesselDeltaError::Hypothesis(format!("p = {p} is not prime")));
        }
        if !(x > (p * p) as f64 / n) {
            return Err(BesselDeltaError::Hypothesis(format!("X > p^2/N fails: X = {x}, p^2/N = {}", (p * p) as f64 / n)));
        }
        if !(x.powf(1.0 - epsilon) > n) {
            return Err(BesselDeltaError::Hypothesis(format!(
                "X^(1-eps) > N fails: X^{} = {}, N = {n}",
                1.0 - epsilon,
                x.powf(1.0 - epsilon)
            )));
        }
        Ok(DeltaParams { p, n, x, k, epsilon, u })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> f64 {
        self.n
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `p / sqrt(N X)`, the size of the error term on the diagonal.
    pub fn error_scale(&self) -> f64 {
        self.p as f64 / (self.n * self.x).sqrt()
    }
}

/// ```text
/// 2 pi C_U r^{1/4} / (i^k p^{1/2} X^{3/4}) * (1/p) sum_{a mod p} e(a (n - r) / p) * I_k(sqrt(r)/p, sqrt(n)/p; X)
/// ```
///
/// The character sum equals `p` when `p | n - r` and `0` otherwise, and is
/// used in that form.
pub fn delta_identity(r: i64, n: i64, params: &DeltaParams) -> Result<Complex64, BesselDeltaError> {
    let (lo, hi) = (params.n, 2.0 * params.n);
    for v in [r, n] {
        if (v as f64) < lo || (v as f64) > hi {
            return Err(BesselDeltaError::Hypothesis(format!("{v} outside [N, 2N] = [{lo}, {hi}]")));
        }
    }
    let p = params.p as i64;
    if (n - r).rem_euclid(p) != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let pf = p as f64;
    let a = (r as f64).sqrt() / pf;
    let b = (n as f64).sqrt() / pf;
    let q = bessel_integral_signed(a, b, params.x, params.k, &params.u, 1.0, &QuadOptions::with_tol(0.0, 1e-12))?;
    if !q.converged {
        return Err(BesselDeltaError::Quadrature { what: format!("I_k at r = {r}, n = {n}"), err: q.err_estimate, panels: q.panels });
    }
    let pre = std::f64::consts::TAU * params.u.c_u() * (r as f64).powf(0.25)
        / (i_pow(params.k as i64) * pf.sqrt() * params.x.powf(0.75));
    Ok(pre * q.value)
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaCell {
    pub r: i64,
    pub n: i64,
    pub value: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaGridReport {
    pub p: u64,
    pub n: f64,
    pub x: f64,
    /// `p / sqrt(N X)`.
    pub error_scale: f64,
    /// `max |value - 1| / error_scale` over the diagonal.
    pub diagonal_constant: f64,
    pub offdiagonal_max: f64,
    /// Off-diagonal cells with `r = n mod p` (the rest vanish exactly).
    pub congruent_cells: usize,
    pub exact_zeros: usize,
    /// Largest off-diagonal value among congruent pairs with
    /// `|r - n| > X^{0.1} p sqrt(N/X)`.
    pub far_offdiagonal_max: f64,
    pub cells: Vec<DeltaCell>,
    pub pass: bool,
}

/// Evaluates the identity on the grid `rs x rs` and fits the diagonal
/// constant. The check passes if that constant is at most `c_max` and every
/// off-diagonal value is below `max(C p / sqrt(N X), 1e-6)`.
pub fn delta_grid(params: &DeltaParams, rs: &[i64], c_max: f64) -> Result<DeltaGridReport, BesselDeltaError> {
    let pairs: Vec<(i64, i64)> = rs.iter().flat_map(|&r| rs.iter().map(move |&n| (r, n))).collect();
    let cells = pairs
        .par_iter()
        .map(|&(r, n)| delta_identity(r, n, params).map(|value| DeltaCell { r, n, value }))
        .collect::<Result<Vec<_>, _>>()?;
    let scale = params.error_scale();
    let p = params.p as i64;
    let far = params.x.powf(0.1) * params.p as f64 * (params.n / params.x).sqrt();
    let mut diagonal_constant = 0.0f64;
    let mut offdiagonal_max = 0.0f64;
    let mut far_offdiagonal_max = 0.0f64;
    let mut congruent_cells = 0;
    let mut exact_zeros = 0;
    for c in &cells {
        if c.r == c.n {
            diagonal_constant = diagonal_constant.max((c.value - 1.0).norm() / scale);
            continue;
        }
        if (c.n - c.r).rem_euclid(p) == 0 {
            congruent_cells += 1;
            if ((c.n - c.r).abs() as f64) > far {
                far_offdiagonal_max = far_offdiagonal_max.max(c.value.norm());
            }
        } else if c.value == Complex64::new(0.0, 0.0) {
            exact_zeros += 1;
        }
        offdiagonal_max = offdiagonal_max.max(c.value.norm());
    }
    let pass = diagonal_constant <= c_max && offdiagonal_max <= (diagonal_constant * scale).max(1e-6);
    Ok(DeltaGridReport {
        p: params.p,
        n: params.n,
        x: params.x,
        error_scale: scale,
        diagonal_constant,
        offdiagonal_max,
        congruent_cells,
        exact_zeros,
        far_offdiagonal_max,
        cells,
        pass,
    })
}
