//! The chain of transformations applied to the exponential sum
//! `S = sum lambda(n) e(f(n)) V(n / N)`: the Voronoi formula, the delta
//! identity, Poisson summation in `r`, the resulting integrals and the final
//! bound bookkeeping.

pub mod decomposition;
pub mod integrals;
pub mod kloosterman;
pub mod ledger;
pub mod lemmas;
pub mod phase;
pub mod poisson;
pub mod sums;
pub mod voronoi;

use thiserror::Error;

use crate::besseldelta::BesselDeltaError;
use crate::forms::FormsError;
use crate::special::SpecialError;

pub use decomposition::{s_decomposed, DecompositionConfig, DecompositionReport};
pub use integrals::{j_options, k_integral, k_weight, l_integral, JSetup, JTable, LKernel, VNatural};
pub use ledger::{bound_ledger, theorem_grid, BoundLedger, TheoremGrid};
pub use lemmas::{
    j_lemma_check, k_lemma_check, l_lemma_check, stationary_r, JLemmaReport, KLemmaReport, LConfig, LLemmaReport,
};
pub use kloosterman::{congruence_residue, kloosterman, mod_inverse, split_congruence, KloostermanTable};
pub use phase::{PhaseSpec, Phi, WeightedPhase};
pub use poisson::{poisson_r_identity_check, PoissonReport};
pub use sums::{s_direct, s_sharp, wilton_scan, WiltonReport};
pub use voronoi::{
    calibrate_eta, calibrate_table, voronoi_check, voronoi_involution_check, voronoi_sides, Calibration,
    InvolutionReport, TestFunction, VoronoiReport, VoronoiSides,
};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PipelineError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{what}: quadrature did not converge (error estimate {err:e})")]
    Quadrature { what: String, err: f64 },
    #[error("coefficient table has n_max = {have}, need {needed}")]
    TableTooShort { needed: usize, have: usize },
    #[error("eta has not been calibrated for this form")]
    Uncalibrated,
    #[error("eta calibration ambiguous: best residual {winner:e}, other sign {loser:e}")]
    Ambiguous { winner: f64, loser: f64 },
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

impl From<BesselDeltaError> for PipelineError {
    fn from(e: BesselDeltaError) -> Self {
        match e {
            BesselDeltaError::Hypothesis(s) => PipelineError::Hypothesis(s),
            BesselDeltaError::Quadrature { what, err, .. } => PipelineError::Quadrature { what, err },
            BesselDeltaError::Special(s) => PipelineError::Special(s),
        }
    }
}
