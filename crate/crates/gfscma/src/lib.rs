//! Analysis and simulation of uplink grant-free SCMA in Poisson cellular
//! networks.
//!
//! The crate is layered bottom-up:
//!
//! * [`specfun`]: gamma-family and hypergeometric kernels.
//! * [`scma`]: codebooks, indicator matrices and distance spectra.
//! * [`netmodel`]: network parameters, power control and cell occupancy.
//! * [`analytic`]: characteristic functions, Gil-Pelaez inversion, success
//!   probability, spectral efficiency and error rates.
//! * [`montecarlo`]: a seeded, thread-count independent network simulator
//!   used as the oracle for every analytic quantity.

// Coefficient tables keep every digit they were tabulated with. `!(x > 0.0)` is the
// guard that also rejects NaN.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod montecarlo;
pub mod netmodel;
pub mod scma;
pub mod specfun;
