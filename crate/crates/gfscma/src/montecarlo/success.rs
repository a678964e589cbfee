use super::network::sample_realization;
use super::{stream_rng, McError, MetricEstimate, SimOptions};
use crate::netmodel::NetworkParams;
use rayon::prelude::*;

/// Per-realization quantities behind the success event, with powers in units of `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessSample {
    pub truncated: bool,
    pub collided: bool,
    /// Non-truncated UEs other than the typical one in its cell.
    pub occupancy: usize,
    pub serving_distance: f64,
    /// Superposed received power of the decodable set; zero when truncated.
    pub signal: f64,
    pub intra: f64,
    pub inter: f64,
}

impl SuccessSample {
    /// `S/γ_th ≥ σ² + ℐ` with no collision and no truncation.
    pub fn succeeds(&self, gamma_th: f64, noise: f64) -> bool {
        !self.truncated && !self.collided && self.signal / gamma_th >= noise + self.intra + self.inter
    }
}

/// `x^{η/2}` with the common integer exponents special-cased.
fn pow_half_eta(x: f64, eta: f64) -> f64 {
    if eta == 4.0 {
        x * x
    } else if eta == 3.0 {
        x * x.sqrt()
    } else {
        x.powf(eta / 2.0)
    }
}

fn one(p: &NetworkParams, opts: &SimOptions, seed: u64, index: u64) -> Result<SuccessSample, McError> {
    let mut rng = stream_rng(seed, index);
    let net = sample_realization(p, opts, &mut rng)?;
    let torus = net.torus();
    let typical = *net.typical();
    let bs_o = net.bs_points()[typical.serving];
    // UE order is exchangeable, so the first J - 1 in-cell UEs are a uniform choice for 𝒰.
    let room = p.j - 1;
    let mut occupancy = 0usize;
    let mut collided = false;
    let mut signal = if typical.truncated { 0.0 } else { typical.gain };
    let mut intra = 0.0;
    let mut inter = 0.0;
    for ue in net.ues.iter().skip(1).filter(|u| !u.truncated) {
        if ue.serving == typical.serving {
            collided |= ue.codebook == typical.codebook;
            if occupancy < room {
                if !typical.truncated {
                    signal += ue.gain;
                }
            } else {
                intra += ue.gain;
            }
            occupancy += 1;
        } else {
            let ratio = ue.distance * ue.distance / torus.dist_sq(ue.position, bs_o);
            inter += pow_half_eta(ratio, p.eta) * ue.gain;
        }
    }
    Ok(SuccessSample {
        truncated: typical.truncated,
        collided: collided && opts.typical_collision_fails,
        occupancy,
        serving_distance: typical.distance,
        signal,
        intra,
        inter,
    })
}

/// `n_real` independent realizations, returned in index order.
pub fn sample_success(
    p: &NetworkParams,
    opts: &SimOptions,
    n_real: u64,
    seed: u64,
) -> Result<Vec<SuccessSample>, McError> {
    if n_real == 0 {
        return Err(McError::Domain("n_real must be >= 1".into()));
    }
    (0..n_real).into_par_iter().map(|i| one(p, opts, seed, i)).collect()
}

/// Success fraction at `p.gamma_th`.
pub fn simulate_success(p: &NetworkParams, n_real: u64, seed: u64) -> Result<MetricEstimate, McError> {
    let v = simulate_success_grid(p, &SimOptions::default(), &[p.gamma_th], n_real, seed)?;
    Ok(v[0])
}

/// Success fractions at several thresholds from one set of realizations.
pub fn simulate_success_grid(
    p: &NetworkParams,
    opts: &SimOptions,
    gammas: &[f64],
    n_real: u64,
    seed: u64,
) -> Result<Vec<MetricEstimate>, McError> {
    let samples = sample_success(p, opts, n_real, seed)?;
    let noise = p.sigma_sq / p.rho;
    gammas
        .iter()
        .map(|&g| {
            let hits: Vec<f64> = samples
                .iter()
                .map(|s| f64::from(u8::from(s.succeeds(g, noise))))
                .collect();
            MetricEstimate::from_samples(&hits, seed)
        })
        .collect()
}
