//! Bessel functions of integer order.
//!
//! `J_nu(x)` is evaluated by
//!
//! * the Hankel expansion `sqrt(2/(pi x)) (P cos chi - Q sin chi)` wherever
//!   its smallest term drops below `1e-17`,
//! * otherwise the ascending series in double precision for `x <= 5`,
//! * Miller's backward recurrence for `x <= max(30, nu)`,
//! * forward recurrence from `J_0`, `J_1` in between, where `nu < x` keeps the
//!   recurrence stable.
//!
//! The series cancels like `e^x` and the Hankel expansion stops converging
//! near `x ~ nu^2`, so a single switch point cannot serve orders up to 64.
//! The double-double series [`j_series`] is kept as a reference.

use std::sync::OnceLock;

use super::dd::Dd;
use super::SpecialError;

pub const MAX_ORDER: u32 = 64;
pub const MAX_ARG: f64 = 1e9;

const SERIES_MIN: f64 = 30.0;
const ASYMPTOTIC_TOL: f64 = 1e-17;
/// Below this the largest series term is under `I_0(5) < 30`, so plain
/// double precision keeps the absolute error under `1e-14`.
const F64_SERIES_MAX: f64 = 5.0;

/// Bessel function of the first kind, absolute error below `1e-12`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64, SpecialError> {
    check_args(order, x)?;
    let v = j_unchecked(order, x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecialError::Unreachable { order, x, estimate: f64::NAN })
    }
}

/// `e^{-x} I_order(x)`, relative error below `1e-12`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Result<f64, SpecialError> {
    check_args(order, x)?;
    let v = i_scaled_unchecked(order, x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecialError::Unreachable { order, x, estimate: f64::NAN })
    }
}

fn check_args(order: u32, x: f64) -> Result<(), SpecialError> {
    if order > MAX_ORDER {
        return Err(SpecialError::OrderTooLarge(order));
    }
    if !(0.0..=MAX_ARG).contains(&x) {
        return Err(SpecialError::ArgumentOutOfRange(x));
    }
    Ok(())
}

pub(crate) fn j_unchecked(nu: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0 { 1.0 } else { 0.0 };
    }
    if x >= hankel_threshold(nu) {
        j_hankel(nu, x).0
    } else if x <= F64_SERIES_MAX {
        j_series_f64(nu, x)
    } else if x <= series_limit(nu) {
        j_miller(nu, x)
    } else {
        j_recurrence(nu, x)
    }
}

/// Upper end of the power-series regime.
pub fn series_limit(nu: u32) -> f64 {
    SERIES_MIN.max(nu as f64)
}

/// Smallest `x` at which the Hankel expansion of order `nu` converges to
/// `1e-17` before its terms start growing, with no intermediate term above
/// 100.
pub fn hankel_threshold(nu: u32) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (0..=MAX_ORDER).map(compute_threshold).collect());
    match table.get(nu as usize) {
        Some(&t) => t,
        None => compute_threshold(nu),
    }
}

fn compute_threshold(nu: u32) -> f64 {
    let (mut lo, mut hi) = (1.0f64, 1e7f64);
    for _ in 0..80 {
        let mid = (lo * hi).sqrt();
        if asymptotic_sums(nu, mid).usable(1.0, ASYMPTOTIC_TOL) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Sums `P = sum (-1)^k a_{2k}/x^{2k}`, `Q = sum (-1)^k a_{2k+1}/x^{2k+1}`
/// and `S = sum (-1)^k a_k / x^k`, truncated before the smallest term.
struct AsymptoticSums {
    p: f64,
    q: f64,
    s: f64,
    smallest: f64,
    largest: f64,
}

impl AsymptoticSums {
    /// Converged to `tol` relative to `scale` without losing more than two
    /// digits to cancellation among growing terms.
    fn usable(&self, scale: f64, tol: f64) -> bool {
        self.smallest <= tol * scale && self.largest <= 100.0 * scale
    }
}

fn asymptotic_sums(nu: u32, x: f64) -> AsymptoticSums {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let mut term = 1.0f64;
    let (mut p, mut q, mut s) = (1.0f64, 0.0f64, 1.0f64);
    let mut largest = 1.0f64;
    let mut k: u32 = 0;
    let kmax = (2.0 * x) as u32 + nu + 16;
    loop {
        let odd = (2 * k + 1) as f64;
        let next = term * (mu - odd * odd) / ((k + 1) as f64 * 8.0 * x);
        if next.abs() >= term.abs() && odd * odd > mu {
            break;
        }
        k += 1;
        term = next;
        largest = largest.max(term.abs());
        let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        if k.is_multiple_of(2) {
            p += sign * term;
        } else {
            q += sign * term;
        }
        s += if k.is_multiple_of(2) { term } else { -term };
        if term.abs() < 1e-19 || k >= kmax {
            break;
        }
    }
    AsymptoticSums { p, q, s, smallest: term.abs(), largest }
}

/// Hankel large-argument expansion. Returns the value and the size of the
/// first omitted term, which bounds the truncation error relative to
/// `sqrt(2/(pi x))`.
pub fn j_hankel(nu: u32, x: f64) -> (f64, f64) {
    let AsymptoticSums { p, q, smallest, .. } = asymptotic_sums(nu, x);
    let chi = (Dd::new(x) - Dd::PI.mul_f64(0.5 * nu as f64 + 0.25)).rem_two_pi().to_f64();
    let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
    (amp * (p * chi.cos() - q * chi.sin()), smallest)
}

/// Ascending power series summed in double-double.
pub fn j_series(nu: u32, x: f64) -> f64 {
    let h = Dd::new(x).mul_f64(0.5);
    let h2 = h * h;
    let mut t = Dd::ONE;
    for j in 1..=nu {
        t = (t * h).div_f64(j as f64);
    }
    let mut sum = t;
    let mut m: u32 = 0;
    loop {
        m += 1;
        t = -(t * h2).div_f64(m as f64 * (m + nu) as f64);
        sum = sum + t;
        if m as f64 > h.hi && t.hi.abs() <= 1e-20 * sum.hi.abs() {
            break;
        }
        if t.hi == 0.0 || m > 10_000 {
            break;
        }
    }
    sum.to_f64()
}

fn j_series_f64(nu: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut t = 1.0;
    for j in 1..=nu {
        t = t * h / j as f64;
    }
    let mut sum = t;
    let mut m = 0u32;
    loop {
        m += 1;
        t = -t * h2 / (m as f64 * (m + nu) as f64);
        sum += t;
        if (m as f64 > h && t.abs() <= 1e-17 * sum.abs()) || t == 0.0 {
            return sum;
        }
    }
}

/// Miller's backward recurrence from an index well above `max(nu, x)`,
/// normalized by `J_0 + 2 sum J_{2k} = 1`.
pub fn j_miller(nu: u32, x: f64) -> f64 {
    let top = nu as f64 + x.max(nu as f64);
    let start = 2 * ((top + 16.0 + (40.0 * top).sqrt()) as u32 / 2 + 1);
    let (mut above, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for n in (1..=start).rev() {
        let below = 2.0 * n as f64 / x * cur - above;
        above = cur;
        cur = below;
        let idx = n - 1;
        if idx == nu {
            wanted = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    wanted / norm
}

/// Forward recurrence `J_{n+1} = (2n/x) J_n - J_{n-1}` from the Hankel values
/// of `J_0` and `J_1`. Requires `x > nu` and `x` above both thresholds.
pub fn j_recurrence(nu: u32, x: f64) -> f64 {
    let j0 = j_hankel(0, x).0;
    if nu == 0 {
        return j0;
    }
    let (mut a, mut b) = (j0, j_hankel(1, x).0);
    for n in 1..nu {
        let c = (2.0 * n as f64 / x) * b - a;
        a = b;
        b = c;
    }
    b
}

pub(crate) fn i_scaled_unchecked(nu: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0 { 1.0 } else { 0.0 };
    }
    if x > 16.0 {
        let a = asymptotic_sums(nu, x);
        if a.usable(a.s.abs(), ASYMPTOTIC_TOL) {
            return a.s / (2.0 * std::f64::consts::PI * x).sqrt();
        }
    }
    i_scaled_series(nu, x)
}

fn ln_factorial(n: u32) -> Dd {
    static TABLE: OnceLock<Vec<Dd>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut v = Vec::with_capacity(MAX_ORDER as usize + 1);
        let mut acc = Dd::ZERO;
        v.push(acc);
        for j in 1..=MAX_ORDER {
            acc = acc + Dd::new(j as f64).ln();
            v.push(acc);
        }
        v
    });
    match table.get(n as usize) {
        Some(&v) => v,
        None => (1..=n).fold(Dd::ZERO, |acc, j| acc + Dd::new(j as f64).ln()),
    }
}

/// All-positive ascending series for `I_nu`, accumulated relative to its
/// first term with power-of-two rescaling, then multiplied by `e^{-x}` in
/// log space.
fn i_scaled_series(nu: u32, x: f64) -> f64 {
    const RESCALE_AT: f64 = 1e240;
    const RESCALE_POW: i32 = 800;
    let h = 0.5 * x;
    let h2 = Dd::prod(h, h);
    let mut t = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut scale_pow: i32 = 0;
    let mut m: u32 = 0;
    loop {
        m += 1;
        t = (t * h2).div_f64(m as f64 * (m + nu) as f64);
        sum = sum + t;
        if sum.hi > RESCALE_AT {
            let f = 2f64.powi(-RESCALE_POW);
            t = Dd { hi: t.hi * f, lo: t.lo * f };
            sum = Dd { hi: sum.hi * f, lo: sum.lo * f };
            scale_pow += RESCALE_POW;
        }
        if m as f64 > h && t.hi <= 1e-33 * sum.hi {
            break;
        }
        if m > 2_000_000 {
            break;
        }
    }
    let log_t0 = Dd::new(h).ln().mul_f64(nu as f64) - ln_factorial(nu);
    let expo = log_t0 + Dd::LN2.mul_f64(scale_pow as f64) - Dd::new(x);
    (sum * expo.exp()).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_and_f64_series_match_dd_series() {
        for nu in [0u32, 1, 2, 11, 23, 40, 64] {
            for i in 0..=200 {
                let x = 0.05 + 29.95 * i as f64 / 200.0;
                let reference = j_series(nu, x);
                assert!((j_miller(nu, x) - reference).abs() < 1e-14, "miller nu={nu} x={x}");
                if x <= F64_SERIES_MAX {
                    assert!((j_series_f64(nu, x) - reference).abs() < 1e-14, "series nu={nu} x={x}");
                }
            }
        }
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(11, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i_scaled(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i_scaled(3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn j1_at_one() {
        let v = bessel_j(1, 1.0).unwrap();
        assert!((v - 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    #[test]
    fn i11_at_fifty() {
        let v = bessel_i_scaled(11, 50.0).unwrap();
        assert!((v / 0.016_744_525_656_934_679 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(bessel_j(65, 1.0), Err(SpecialError::OrderTooLarge(65)));
        assert!(matches!(bessel_j(1, -1.0), Err(SpecialError::ArgumentOutOfRange(_))));
        assert!(matches!(bessel_j(1, 2e9), Err(SpecialError::ArgumentOutOfRange(_))));
    }

    #[test]
    fn thresholds_leave_no_gap_for_low_orders() {
        assert!(hankel_threshold(0) < SERIES_MIN);
        assert!(hankel_threshold(1) < SERIES_MIN);
        for nu in 0..MAX_ORDER {
            assert!(hankel_threshold(nu) <= hankel_threshold(nu + 1) * (1.0 + 1e-9));
        }
    }
}
