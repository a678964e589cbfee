//! Closed-form and semi-closed-form network metrics.
//!
//! Success probability is obtained by Gil-Pelaez inversion of the
//! characteristic function of `X = σ² + ℐ − S/γ_th`, where `S` is the
//! superposed power of the decodable set and `ℐ` the intra- plus inter-cell
//! interference; transmission succeeds when `X ≤ 0`. Error rates follow from
//! the pairwise error probability averaged over channel, interference and
//! geometry.

mod error_rate;
mod gil_pelaez;
pub mod quad;
mod success;

pub use error_rate::{apep, asep, expected_sin, pep_constant, pep_interference_cf, AsepMethod};
pub use gil_pelaez::{gil_pelaez_cdf, CdfResult, CharacteristicFunction};
#[doc(hidden)]
pub use success::asymptotic_expression;
pub use success::{
    ase, ase_from_success, cf_inter, cf_intra, signal_term, success_cf, success_probability,
    success_probability_asymptotic, success_probability_with, InterCoefficient, SignalModel, SuccessOptions,
    SuccessResult,
};

use crate::netmodel::ParamError;
use crate::specfun::SpecfunError;

/// Largest quadrature overshoot outside `[0, 1]` that is clamped rather than reported.
pub const CLAMP_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticError {
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("integrand envelope never fell below threshold (gave up at omega = {omega:e})")]
    Truncation { omega: f64 },
    #[error("quadrature on [{a:e}, {b:e}] reached error {error:e} > {tol:e}")]
    Tolerance { a: f64, b: f64, error: f64, tol: f64 },
    #[error("probability {value} overshoots [0, 1] by more than {CLAMP_LIMIT:e}")]
    Overshoot { value: f64 },
    #[error("asymptotic form refused: {0}")]
    Refused(String),
    #[error("domain error: {0}")]
    Domain(String),
}
