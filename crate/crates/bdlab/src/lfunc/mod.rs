//! `L(1/2 + it, g)` through the approximate functional equation, and the
//! growth scan in `t`.
//!
//! Two evaluation modes share the same cutoff family:
//!
//! * [`AfeMode::Exact`] weights each sum with the Mellin–Barnes integral
//!   `W_s(y) = (1/2 pi i) int G(u) gamma(s + u) / gamma(s) y^{-u} du / u`,
//!   which makes the two-sum formula an identity. Values from different
//!   cutoffs then agree to rounding.
//! * [`AfeMode::Literal`] uses the cutoff `F(n / sqrt C)` in both sums.
//!   This is only accurate to `O(M^{1/2} / C^{1/4})`.
//!
//! The cutoff is `F(x) = erfc(log x / (2a)) / 2`, so `F(x) + F(1/x) = 1`
//! holds exactly. Its Mellin kernel is `G(u) = exp(a^2 u^2)`.

mod afe;
mod scan;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::forms::NewformDescriptor;
use crate::special::SpecialError;

pub use afe::{afe_lvalue, afe_value_at, dirichlet_direct, required_n_max, root_factor, MellinWeight};
pub use scan::{dyadic_pieces, weyl_scan, DyadicPiece, WeylReport, WeylRow};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum LfuncError {
    #[error("coefficient table too short: need n_max >= {needed}, have {have}")]
    TableTooShort { needed: usize, have: usize },
    #[error("root number unknown: eta has not been calibrated")]
    Uncalibrated,
    #[error("configuration: {0}")]
    Config(String),
    #[error("weight tail {tail:e} at the truncation point n = {n} is not negligible")]
    Truncation { n: usize, tail: f64 },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// `C = (M / 4 pi^2) |k/2 + it| |k/2 + 1 + it|`.
pub fn analytic_conductor(form: &NewformDescriptor, t: f64) -> f64 {
    let half_k = form.weight as f64 / 2.0;
    let a = Complex64::new(half_k, t).norm();
    let b = Complex64::new(half_k + 1.0, t).norm();
    form.level as f64 / (4.0 * std::f64::consts::PI.powi(2)) * a * b
}

/// A smooth cutoff `F` with `F(x) + F(1/x) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Cutoff {
    /// `F(x) = erfc(log x / (2 a)) / 2`, `G(u) = exp(a^2 u^2)`.
    Erfc { width: f64 },
}

/// The cutoff used by default.
pub const CUTOFF_NARROW: Cutoff = Cutoff::Erfc { width: 0.4 };
/// The alternate cutoff for self-consistency checks.
pub const CUTOFF_WIDE: Cutoff = Cutoff::Erfc { width: 0.5 };

impl Cutoff {
    pub fn id(&self) -> String {
        match self {
            Cutoff::Erfc { width } => format!("erfc(a={width})"),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Cutoff::Erfc { width } => 0.5 * libm::erfc(x.ln() / (2.0 * width)),
        }
    }

    /// The Mellin kernel `G(u)`: even, entire, `G(0) = 1`.
    pub fn kernel(&self, u: Complex64) -> Complex64 {
        match *self {
            Cutoff::Erfc { width } => (width * width * u * u).exp(),
        }
    }

    /// `x` beyond which `F(x) < 1e-13`.
    pub fn reach(&self) -> f64 {
        match *self {
            Cutoff::Erfc { width } => (2.0 * width * 5.3).exp(),
        }
    }

    fn validate(&self) -> Result<(), LfuncError> {
        match *self {
            Cutoff::Erfc { width } if width > 0.05 && width <= 2.0 => Ok(()),
            Cutoff::Erfc { width } => Err(LfuncError::Config(format!("erfc cutoff width {width} outside (0.05, 2]"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AfeMode {
    Exact,
    Literal,
}

#[derive(Clone, Debug, Serialize)]
pub struct LValuePoint {
    pub t: f64,
    pub value: Complex64,
    pub conductor: f64,
    pub cutoff_id: String,
    pub mode: AfeMode,
    /// Last `n` used in each sum.
    pub truncation_n: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_partition_of_unity() {
        for c in [CUTOFF_NARROW, CUTOFF_WIDE] {
            for x in [0.01, 0.3, 1.0, 2.5, 40.0] {
                assert!((c.eval(x) + c.eval(1.0 / x) - 1.0).abs() < 1e-15);
            }
            assert!(c.eval(c.reach()) < 1e-13);
            assert_eq!(c.kernel(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        }
    }
}
