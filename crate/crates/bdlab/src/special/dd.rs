//! Double-double arithmetic.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, giving
//! roughly 32 significant digits. Only the handful of operations needed by the
//! Bessel series, the argument reductions and the log-gamma kernel are
//! provided. Bulk sums stay in plain `f64`.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd { hi: std::f64::consts::PI, lo: 1.224_646_799_147_353_2e-16 };
    pub const TWO_PI: Dd = Dd { hi: std::f64::consts::TAU, lo: 2.449_293_598_294_706_4e-16 };
    pub const HALF_PI: Dd = Dd { hi: std::f64::consts::FRAC_PI_2, lo: 6.123_233_995_736_766e-17 };
    pub const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

    #[inline]
    pub const fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_prod(a, b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self - Dd::prod(q1, b);
        let q2 = r.hi / b;
        let r = r - Dd::prod(q2, b);
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn floor(self) -> Dd {
        let hi = self.hi.floor();
        if hi == self.hi {
            let lo = self.lo.floor();
            let (hi, lo) = quick_two_sum(hi, lo);
            Dd { hi, lo }
        } else {
            Dd { hi, lo: 0.0 }
        }
    }

    pub fn round(self) -> Dd {
        (self.add_f64(0.5)).floor()
    }

    /// `self - round(self)` as an `f64` in `[-1/2, 1/2]`.
    #[inline]
    pub fn frac_centered(self) -> f64 {
        let r = self - self.round();
        r.to_f64()
    }

    pub fn sqr(self) -> Dd {
        self * self
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let diff = self - Dd::prod(ax, ax);
        Dd::new(ax).add_f64(diff.hi * (x * 0.5))
    }

    /// Natural exponential, about 30 correct digits for |x| < 700.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / Dd::LN2.hi).round();
        let r = self - Dd::LN2.mul_f64(k);
        // exp(r) = (exp(r / 2^10))^(2^10)
        let r = r.mul_f64(1.0 / 1024.0);
        let mut term = r;
        let mut sum = r;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = (term * r).div_f64(n);
            sum = sum + term;
            if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) || n > 30.0 {
                break;
            }
        }
        // sum = expm1(r); square-and-add keeps the small-argument accuracy
        for _ in 0..10 {
            sum = sum.mul_f64(2.0) + sum * sum;
        }
        let e = sum.add_f64(1.0);
        let scale = 2f64.powi(k as i32);
        Dd { hi: e.hi * scale, lo: e.lo * scale }
    }

    /// Natural logarithm via one Newton step on `exp`.
    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0, "Dd::ln of non-positive value");
        let y0 = Dd::new(self.hi.ln());
        // y1 = y0 + x exp(-y0) - 1
        let t = self * (-y0).exp();
        y0 + t.add_f64(-1.0)
    }

    /// Reduce modulo 2*pi into [-pi, pi].
    pub fn rem_two_pi(self) -> Dd {
        let n = (self / Dd::TWO_PI).round();
        self - Dd::TWO_PI * n
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add_f64(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_matches_reference_digits() {
        // reference values from a 40-digit evaluation
        let l = Dd::new(1234.567).ln();
        assert_eq!(l.hi, 7.118_475_580_297_523);
        assert!((l.lo - 1.792_802_547_395_247_7e-16).abs() < 1e-30);
        let l = Dd::new(1e4).ln();
        assert!(((l - Dd { hi: 9.210_340_371_976_184, lo: -8.683_024_893_528_997e-16 }).to_f64()).abs() < 1e-30);
    }

    #[test]
    fn exp_ln_round_trip() {
        for x in [1e-3, 0.5, 1.5, 77.0, 1234.567, 1e6] {
            let d = Dd::new(x);
            let back = d.ln().exp();
            let rel = ((back - d) / d).to_f64().abs();
            assert!(rel < 1e-30, "x={x} rel={rel}");
        }
    }

    #[test]
    fn two_pi_reduction_is_accurate_at_1e9() {
        // sin(1e9) = 0.545843449448699564244...
        let r = Dd::new(1e9).rem_two_pi().to_f64();
        assert!((r.sin() - 0.545_843_449_448_699_6).abs() < 1e-15);
    }

    #[test]
    fn sqrt_and_division() {
        let two = Dd::new(2.0);
        let s = two.sqrt();
        assert!(((s * s) - two).to_f64().abs() < 1e-31);
        let third = Dd::ONE / Dd::new(3.0);
        assert!((third.mul_f64(3.0) - Dd::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn centered_fraction() {
        let x = Dd::new(123_456.789);
        let f = x.frac_centered();
        assert!((f - (-0.211)).abs() < 1e-9);
    }
}
