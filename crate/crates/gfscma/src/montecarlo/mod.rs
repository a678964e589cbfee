//! Monte Carlo network simulator.
//!
//! Base stations and active UEs are dropped as independent Poisson point
//! processes on a square torus. Every realization draws from its own
//! ChaCha8 stream selected by the realization index, and per-realization
//! results are merged in index order, so estimates do not depend on how
//! many threads run them.
//!
//! The UE layer is sampled at the per-pilot intensity `λ_u`: those are the
//! UEs that share the typical UE's pilot and therefore either join its
//! decodable set or interfere with it.

mod asep;
mod geometry;
mod network;
mod success;

pub use asep::{sample_pep_interference, simulate_asep};
pub use geometry::{NearestGrid, Point, Torus};
pub use network::{sample_realization, Realization, UeRecord};
pub use success::{sample_success, simulate_success, simulate_success_grid, SuccessSample};

use crate::netmodel::ParamError;
use crate::scma::ScmaError;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

/// Side of the default simulation window, in metres (100 km²).
pub const DEFAULT_WINDOW: f64 = 10_000.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum McError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Codebook(#[from] ScmaError),
    #[error("truncation radius {radius:.1} m exceeds a quarter of the {side} m window")]
    WindowTooSmall { radius: f64, side: f64 },
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("no samples")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MetricEstimate {
    pub value: f64,
    /// Half-width of the 95% normal confidence interval.
    pub ci_halfwidth: f64,
    pub n: u64,
    pub seed: u64,
}

impl MetricEstimate {
    /// Mean and `1.96·s/√n` of independent samples, summed in order.
    pub fn from_samples(samples: &[f64], seed: u64) -> Result<Self, McError> {
        if samples.is_empty() {
            return Err(McError::Empty);
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = if samples.len() > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Ok(Self {
            value: mean,
            ci_halfwidth: 1.96 * (var / n).sqrt(),
            n: samples.len() as u64,
            seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub window_side: f64,
    /// Count a codebook clash between the typical UE and another in-cell UE as failure.
    pub typical_collision_fails: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            window_side: DEFAULT_WINDOW,
            typical_collision_fails: false,
        }
    }
}

/// Random stream for realization `index` under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Poisson(`intensity·side²`) points uniform on `[0, side)²`.
pub fn sample_hppp<R: Rng + ?Sized>(intensity: f64, window_side: f64, rng: &mut R) -> Result<Vec<Point>, McError> {
    if !(intensity >= 0.0) || !intensity.is_finite() || !(window_side > 0.0) || !window_side.is_finite() {
        return Err(McError::Domain(format!(
            "need intensity >= 0 and side > 0, got {intensity} and {window_side}"
        )));
    }
    let mean = intensity * window_side * window_side;
    if mean == 0.0 {
        return Ok(Vec::new());
    }
    let count = Poisson::new(mean)
        .map_err(|e| McError::Domain(e.to_string()))?
        .sample(rng) as usize;
    let torus = Torus { side: window_side };
    Ok((0..count).map(|_| torus.uniform(rng)).collect())
}

/// `(1/n)·Σ e^{jω·x}` over the samples.
pub fn empirical_cf(samples: &[f64], omega: f64) -> Result<Complex64, McError> {
    if samples.is_empty() {
        return Err(McError::Empty);
    }
    let s: Complex64 = samples.iter().map(|&x| Complex64::from_polar(1.0, omega * x)).sum();
    Ok(s / samples.len() as f64)
}

/// Rayon pool limited to `threads` workers, or the global pool when `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
