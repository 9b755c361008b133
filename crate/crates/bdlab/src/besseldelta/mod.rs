//! The Bessel integral
//!
//! ```text
//! I_k(a, b; X) = integral U(x/X) e(2 a sqrt(x)) J_{k-1}(4 pi b sqrt(x)) dx
//! ```
//!
//! with its diagonal asymptotic and off-diagonal decay, the Weber and Hankel
//! identities behind it, and the delta-identity that detects `r = n`.

mod delta;
mod integral;
mod transforms;

pub use delta::{delta_grid, delta_identity, DeltaGridReport, DeltaParams};
pub use integral::{
    bessel_integral, bessel_integral_signed, diagonal_main_term, measure_decay_onset, verify_diagonal_asymptotic,
    verify_offdiagonal_decay, DiagonalReport, DiagonalRow, OffDiagonalCheck,
};
pub use transforms::{hankel_inversion_check, weber_identity_check, HankelReport, WeberReport};

use thiserror::Error;

use crate::special::SpecialError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BesselDeltaError {
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("{what}: quadrature did not converge (error estimate {err:e} after {panels} panels)")]
    Quadrature { what: String, err: f64, panels: usize },
    #[error(transparent)]
    Special(#[from] SpecialError),
}
