//! Complex log-gamma.
//!
//! Upward recursion moves `s` to a point where Stirling's series with twelve
//! Bernoulli terms is accurate to about `1e-20`; the leading
//! `(z - 1/2) log z - z` part is formed in double-double so that the
//! imaginary part stays accurate to `1e-12` absolute for `|Im s|` up to `1e4`.
//! The branch is the analytic continuation of the real log-gamma, which agrees
//! with the usual `loggamma` conventions.

use num_complex::Complex64;

use super::dd::Dd;
use super::SpecialError;

const HALF_LN_2PI: Dd = Dd { hi: 0.918_938_533_204_672_8, lo: -3.878_294_158_067_241_4e-17 };

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=12`.
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
    77_683.0 / 5796.0,
    -236_364_091.0 / 1_506_960.0,
];

/// `log Gamma(s)` with real and imaginary parts in double-double.
pub fn log_gamma_dd(s: Complex64) -> Result<(Dd, Dd), SpecialError> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(SpecialError::Pole(s.re));
    }
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() {
        return Err(SpecialError::Pole(s.re));
    }
    let t = s.im;
    let target = if t.abs() >= 15.0 { 0.0 } else { 10.0 };
    let shift = (target - s.re).ceil().max(0.0) as u64;

    let mut corr = Complex64::new(0.0, 0.0);
    for j in 0..shift {
        corr += (s + j as f64).ln();
    }

    let sigma = Dd::new(s.re).add_f64(shift as f64);
    let z = Complex64::new(sigma.to_f64(), t);
    let modulus_sq = sigma * sigma + Dd::prod(t, t);
    let l = modulus_sq.ln().mul_f64(0.5);
    let theta = arg_dd(sigma, t);
    let sm = sigma.add_f64(-0.5);
    let re = sm * l - theta.mul_f64(t) - sigma + HALF_LN_2PI;
    let im = sm * theta + l.mul_f64(t) - Dd::new(t);

    let zinv = z.inv();
    let zinv2 = zinv * zinv;
    let mut zp = zinv;
    let mut series = Complex64::new(0.0, 0.0);
    for c in STIRLING {
        series += zp * c;
        zp *= zinv2;
    }
    let tail = series - corr;
    Ok((re.add_f64(tail.re), im.add_f64(tail.im)))
}

/// `arg(sigma + i t)` for `sigma >= 0`, accurate enough that `t * arg` keeps
/// full double precision.
fn arg_dd(sigma: Dd, t: f64) -> Dd {
    let sg = sigma.to_f64();
    if t.abs() <= sg {
        Dd::new(t.atan2(sg))
    } else {
        let base = if t > 0.0 { Dd::HALF_PI } else { -Dd::HALF_PI };
        base.add_f64(-(sg / t).atan())
    }
}

/// Principal-branch `log Gamma(s)`.
pub fn log_gamma_complex(s: Complex64) -> Result<Complex64, SpecialError> {
    let (re, im) = log_gamma_dd(s)?;
    Ok(Complex64::new(re.to_f64(), im.to_f64()))
}

/// `log Gamma(a) - log Gamma(b)`, with the difference taken before rounding.
/// Ratios of gamma values at large, nearly equal imaginary parts keep full
/// relative accuracy this way.
pub fn log_gamma_diff(a: Complex64, b: Complex64) -> Result<Complex64, SpecialError> {
    let (ar, ai) = log_gamma_dd(a)?;
    let (br, bi) = log_gamma_dd(b)?;
    Ok(Complex64::new((ar - br).to_f64(), (ai - bi).to_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_points() {
        let v = log_gamma_complex(Complex64::new(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14);
        let v = log_gamma_complex(Complex64::new(0.5, 0.0)).unwrap();
        assert!((v.re - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn five_plus_thirty_i() {
        // 40-digit reference
        let v = log_gamma_complex(Complex64::new(5.0, 30.0)).unwrap();
        assert!((v.re - -30.883_004_541_385_086).abs() < 1e-13);
        assert!((v.im - 78.769_617_695_308_665).abs() < 1e-13);
    }

    #[test]
    fn poles_rejected() {
        for s in [0.0, -1.0, -7.0] {
            assert_eq!(log_gamma_complex(Complex64::new(s, 0.0)), Err(SpecialError::Pole(s)));
        }
    }

    #[test]
    fn recursion_from_two_shifts() {
        // log Gamma(s) from log Gamma(s + 1) - log s and from
        // log Gamma(s + 2) - log s - log(s + 1)
        let s = Complex64::new(5.0, 30.0);
        let direct = log_gamma_complex(s).unwrap();
        let one = log_gamma_complex(s + 1.0).unwrap() - s.ln();
        let two = log_gamma_complex(s + 2.0).unwrap() - s.ln() - (s + 1.0).ln();
        assert!((direct - one).norm() < 1e-12);
        assert!((direct - two).norm() < 1e-12);
    }
}
