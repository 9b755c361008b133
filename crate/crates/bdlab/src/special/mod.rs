//! Special functions: Bessel J and scaled I of integer order, complex
//! log-gamma, the fixed bump `U` and the ramp weight `V`.

mod bessel;
mod bump;
pub mod dd;
mod gamma;
mod weight;

pub use bessel::{
    bessel_i_scaled, bessel_j, hankel_threshold, j_hankel, j_recurrence, j_series, series_limit,
    MAX_ARG, MAX_ORDER,
};
pub(crate) use bessel::{i_scaled_unchecked, j_unchecked};
pub use bump::{bump_u, bump_u_d1, bump_u_d2, make_bump_u, mellin_u, BumpU};
pub use gamma::{log_gamma_complex, log_gamma_dd, log_gamma_diff};
pub use weight::{make_weight_v, WeightV, DEFAULT_NODES as DEFAULT_RAMP_NODES};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpecialError {
    #[error("Bessel order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u32),
    #[error("argument {0} outside the supported range [0, {MAX_ARG:e}]")]
    ArgumentOutOfRange(f64),
    #[error("log-gamma has a pole at s = {0}")]
    Pole(f64),
    #[error("no expansion reaches 1e-12 at order {order}, x = {x}: best error estimate {estimate:e}")]
    Unreachable { order: u32, x: f64, estimate: f64 },
    #[error("delta = {0} must be at least 2")]
    DeltaTooSmall(f64),
    #[error("support right end {0} must lie in (1, 2]")]
    SupportOutOfRange(f64),
    #[error("support [1, {right}] is narrower than 2/delta = {min_width}")]
    SupportTooNarrow { right: f64, min_width: f64 },
    #[error("Mellin quadrature at s = {s} did not converge: {trace}")]
    MellinNotConverged { s: Complex64, trace: String },
}
