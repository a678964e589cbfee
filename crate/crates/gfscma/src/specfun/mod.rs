//! Special-function kernels: log-gamma, lower incomplete gamma, Pochhammer
//! symbols and the hypergeometric functions ₁F₁, ₂F₁ and ₁F₂.
//!
//! Every public routine returns either a finite value or a [`SpecfunError`];
//! NaN and infinity never escape.

mod dd;
mod gamma;
mod hyper;
mod sum;

pub use gamma::{gamma, ln_gamma, lower_incomplete_gamma, pochhammer, rgamma};
pub use hyper::{hyp1f1, hyp1f2, hyp2f1};

/// Complex number used for every `jω`-valued argument.
pub type ComplexValue = num_complex::Complex64;

/// Maximum number of series terms summed before giving up.
pub const TERM_BUDGET: usize = 500;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecfunError {
    #[error("{function}: argument outside domain ({detail})")]
    Domain { function: &'static str, detail: String },
    #[error("{function}: series did not converge within {terms} terms")]
    NonConvergence { function: &'static str, terms: usize },
    #[error("{function}: real argument {z} lies on the branch cut [1, inf)")]
    Branch { function: &'static str, z: f64 },
    #[error("{function}: result is not finite")]
    NotFinite { function: &'static str },
}

pub type Result<T> = std::result::Result<T, SpecfunError>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> SpecfunError {
    SpecfunError::Domain {
        function,
        detail: detail.into(),
    }
}

pub(crate) fn finite(function: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::NotFinite { function })
    }
}

pub(crate) fn finite_c(function: &'static str, v: ComplexValue) -> Result<ComplexValue> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::NotFinite { function })
    }
}

/// True when `x` is 0, -1, -2, ...
pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}
