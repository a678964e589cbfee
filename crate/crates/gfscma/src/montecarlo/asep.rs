use super::geometry::{NearestGrid, Torus};
use super::network::check_window;
use super::{sample_hppp, stream_rng, McError, MetricEstimate, SimOptions};
use crate::netmodel::NetworkParams;
use crate::scma::Codebook;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// Symbol trials sharing one network geometry.
pub const TRIALS_PER_GEOMETRY: u64 = 64;
/// Candidate interferer positions are drawn at this multiple of `λ_b`; a
/// cell with no candidate (probability about `e^{-8}`) hosts no interferer.
const CANDIDATE_FACTOR: f64 = 8.0;

/// Normalized powers `(R_i/D_i)^η` of the at most one same-codebook
/// interferer per other cell, as seen at the typical UE's base station.
fn interferer_powers(p: &NetworkParams, opts: &SimOptions, rng: &mut ChaCha8Rng) -> Result<Vec<f64>, McError> {
    check_window(p, opts.window_side)?;
    let torus = Torus { side: opts.window_side };
    let bs = NearestGrid::new(torus, sample_hppp(p.lambda_b, opts.window_side, rng)?);
    if bs.is_empty() {
        return Err(McError::Domain("no base station in the window".into()));
    }
    let r_max = p.truncation_radius();
    // The typical UE is conditioned on being served.
    let serving = loop {
        let (o, r) = bs.nearest(torus.uniform(rng)).expect("non-empty");
        if r <= r_max {
            break o;
        }
    };
    let bs_o = bs.points()[serving];
    let mut taken = vec![false; bs.len()];
    taken[serving] = true;
    let mut powers = Vec::with_capacity(bs.len());
    for c in sample_hppp(CANDIDATE_FACTOR * p.lambda_b, opts.window_side, rng)? {
        let (i, r) = bs.nearest(c).expect("non-empty");
        if taken[i] || r > r_max {
            continue;
        }
        // Candidates are i.i.d. uniform, so the first one in a cell is uniform in it.
        taken[i] = true;
        powers.push((r * r / torus.dist_sq(c, bs_o)).powf(p.eta / 2.0));
    }
    Ok(powers)
}

/// `Σ_i (R_i/D_i)^η` over one interferer per other cell, one value per geometry.
///
/// Its Laplace transform at `v/4` is the quantity approximated by
/// [`crate::analytic::pep_interference_cf`].
pub fn sample_pep_interference(p: &NetworkParams, n: u64, seed: u64) -> Result<Vec<f64>, McError> {
    p.validate()?;
    let opts = SimOptions::default();
    (0..n)
        .into_par_iter()
        .map(|i| Ok(interferer_powers(p, &opts, &mut stream_rng(seed, i))?.iter().sum()))
        .collect()
}

fn cn<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// Symbol errors in `trials` maximum-likelihood detections over one geometry.
fn batch(p: &NetworkParams, cb: &Codebook, noise: f64, trials: u64, rng: &mut ChaCha8Rng) -> Result<u64, McError> {
    let powers = interferer_powers(p, &SimOptions::default(), rng)?;
    let support = cb.support().to_vec();
    let m = cb.m();
    let words: Vec<Vec<Complex64>> = cb
        .codewords()
        .iter()
        .map(|w| support.iter().map(|&k| w[k]).collect())
        .collect();
    let rb_power: Vec<Vec<f64>> = words.iter().map(|w| w.iter().map(|c| c.norm_sqr()).collect()).collect();
    let flat = rb_power
        .iter()
        .all(|row| row.iter().zip(&rb_power[0]).all(|(a, b)| (a - b).abs() <= 1e-12));
    let total: f64 = powers.iter().sum();
    let mut var = vec![0.0; support.len()];
    let mut errors = 0;
    let mut h = vec![Complex64::default(); support.len()];
    let mut y = vec![Complex64::default(); support.len()];
    for _ in 0..trials {
        // With equal per-block power across codewords the interference
        // variance does not depend on which codewords the interferers send.
        if flat {
            for (v, pw) in var.iter_mut().zip(&rb_power[0]) {
                *v = noise + total * pw;
            }
        } else {
            var.iter_mut().for_each(|v| *v = noise);
            for &a in &powers {
                let ci = rng.random_range(0..m);
                for (v, pw) in var.iter_mut().zip(&rb_power[ci]) {
                    *v += a * pw;
                }
            }
        }
        let sent = rng.random_range(0..m);
        for s in 0..support.len() {
            h[s] = cn(rng, 1.0);
            y[s] = words[sent][s] * h[s] + cn(rng, var[s]);
        }
        let mut best = (usize::MAX, f64::INFINITY);
        for (i, w) in words.iter().enumerate() {
            let metric: f64 = (0..support.len()).map(|s| (y[s] - w[s] * h[s]).norm_sqr()).sum();
            if metric < best.1 {
                best = (i, metric);
            }
        }
        if best.0 != sent {
            errors += 1;
        }
    }
    Ok(errors)
}

/// Symbol error rate of maximum-likelihood detection with perfect channel
/// knowledge at `snr = ρ/σ²`, under one same-codebook interferer per other cell.
///
/// The confidence interval is formed from per-geometry batch means, since
/// trials sharing a geometry are correlated.
pub fn simulate_asep(
    p: &NetworkParams,
    cb: &Codebook,
    snr: f64,
    n_trials: u64,
    seed: u64,
) -> Result<MetricEstimate, McError> {
    p.validate()?;
    if n_trials == 0 || !(snr > 0.0) || snr.is_nan() {
        return Err(McError::Domain(format!(
            "need n_trials >= 1 and snr > 0, got {n_trials} and {snr}"
        )));
    }
    let noise = 1.0 / snr;
    let batches = n_trials.div_ceil(TRIALS_PER_GEOMETRY);
    let counts: Vec<(u64, u64)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let trials = TRIALS_PER_GEOMETRY.min(n_trials - b * TRIALS_PER_GEOMETRY);
            Ok((batch(p, cb, noise, trials, &mut stream_rng(seed, b))?, trials))
        })
        .collect::<Result<_, McError>>()?;
    let errors: u64 = counts.iter().map(|c| c.0).sum();
    let value = errors as f64 / n_trials as f64;
    let ci_halfwidth = if batches > 1 {
        let means: Vec<f64> = counts.iter().map(|&(e, t)| e as f64 / t as f64).collect();
        MetricEstimate::from_samples(&means, seed)?.ci_halfwidth
    } else {
        0.0
    };
    Ok(MetricEstimate {
        value,
        ci_halfwidth,
        n: n_trials,
        seed,
    })
}
