use super::quad::adaptive;
use super::AnalyticError;
use crate::netmodel::NetworkParams;
use crate::scma::DistanceSpectrum;
use crate::specfun::{hyp1f1, ln_gamma, lower_incomplete_gamma, ComplexValue};
use std::f64::consts::PI;

/// `C = γ(2, α)/(1 − e^{−α})`; equals 1 without a power cap.
pub fn pep_constant(p: &NetworkParams) -> Result<f64, AnalyticError> {
    let alpha = p.alpha();
    if alpha.is_infinite() {
        return Ok(1.0);
    }
    Ok(lower_incomplete_gamma(2.0, alpha)? / -(-alpha).exp_m1())
}

fn interference_factor(v: f64, delta: f64, c: f64) -> Result<f64, AnalyticError> {
    let f = hyp1f1(-delta, 1.0 - delta, ComplexValue::new(-v / 4.0, 0.0))?;
    Ok((-c * (f.re - 1.0)).exp())
}

/// `φ_ℐ(v) = exp{−C·[₁F₁(−1/b; 1−1/b; −v/4) − 1]}`.
pub fn pep_interference_cf(v: f64, p: &NetworkParams) -> Result<f64, AnalyticError> {
    if !(v > 0.0) {
        return Err(AnalyticError::Domain(format!("v = {v} must be positive")));
    }
    interference_factor(v, 1.0 / p.b(), pep_constant(p)?)
}

/// `E[sin(√(vℋ)/2)]` for `ℋ ~ Gamma(d_s, scale ‖Δ‖²)`, evaluated as
/// `‖Δ‖·Γ(d_s+½)/(2Γ(d_s))·√v·e^{−x}·₁F₁(1−d_s; 3/2; x)` with `x = ‖Δ‖²v/16`,
/// whose hypergeometric factor is a terminating polynomial.
pub fn expected_sin(v: f64, delta_norm_sq: f64, d_s: u32) -> Result<f64, AnalyticError> {
    if !(v > 0.0) || !(delta_norm_sq > 0.0) || d_s == 0 {
        return Err(AnalyticError::Domain(format!(
            "need v > 0, |Delta|^2 > 0, d_s >= 1; got {v}, {delta_norm_sq}, {d_s}"
        )));
    }
    let d = f64::from(d_s);
    let x = delta_norm_sq * v / 16.0;
    let ratio = (ln_gamma(d + 0.5)? - ln_gamma(d)?).exp();
    let poly = hyp1f1(1.0 - d, 1.5, ComplexValue::new(x, 0.0))?.re;
    Ok(delta_norm_sq.sqrt() * ratio * 0.5 * v.sqrt() * (-x).exp() * poly)
}

const APEP_PANEL_TOL: f64 = 1e-11;
const APEP_NEGLIGIBLE: f64 = 1e-15;

/// Average pairwise error probability for a codeword difference of squared
/// norm `delta_norm_sq`:
///
/// `1/2 − (1/2π)∫₀^∞ v⁻¹·e^{−v/(4·snr)}·φ_ℐ(v)·E[sin(√(vℋ)/2)] dv`.
///
/// The integral is taken in `w = √v` over dyadic panels of `4/‖Δ‖`.
pub fn apep(delta_norm_sq: f64, p: &NetworkParams, snr: f64) -> Result<f64, AnalyticError> {
    if !(delta_norm_sq > 0.0) || !(snr > 0.0) {
        return Err(AnalyticError::Domain(format!(
            "need |Delta|^2 > 0 and snr > 0; got {delta_norm_sq}, {snr}"
        )));
    }
    p.validate()?;
    let delta = 1.0 / p.b();
    let c = pep_constant(p)?;
    let d_s = u32::try_from(p.d_s).map_err(|_| AnalyticError::Domain("d_s too large".into()))?;
    let mut f = |w: f64| -> Result<f64, AnalyticError> {
        let v = w * w;
        let noise = if snr.is_infinite() {
            1.0
        } else {
            (-v / (4.0 * snr)).exp()
        };
        if noise == 0.0 {
            return Ok(0.0);
        }
        let es = expected_sin(v, delta_norm_sq, d_s)?;
        if es == 0.0 {
            return Ok(0.0);
        }
        Ok(2.0 / w * noise * interference_factor(v, delta, c)? * es)
    };
    let scale = 4.0 / delta_norm_sq.sqrt();
    let mut total = adaptive(&mut f, 0.0, scale * 2f64.powi(-10), APEP_PANEL_TOL)?.value;
    for k in -10..60 {
        let a = scale * 2f64.powi(k);
        let b = 2.0 * a;
        total += adaptive(&mut f, a, b, APEP_PANEL_TOL)?.value;
        if b >= 4.0 * scale
            && f(b)?.abs() < APEP_NEGLIGIBLE
            && f(2.0 * b)?.abs() < APEP_NEGLIGIBLE
            && f(4.0 * b)?.abs() < APEP_NEGLIGIBLE
        {
            return Ok(0.5 - total / (2.0 * PI));
        }
    }
    Err(AnalyticError::Truncation {
        omega: scale * 2f64.powi(60),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsepMethod {
    /// `(1/M)·Σ_c 𝒩_c·APEP(Δ_min)`.
    #[default]
    NearestNeighbor,
    /// `(1/M)·Σ_{c≠c'} APEP(Δ_{cc'})` over all ordered pairs; an upper bound
    /// that may exceed one at low SNR.
    FullUnionBound,
}

/// Average symbol error probability of a codebook.
pub fn asep(
    spectrum: &DistanceSpectrum,
    p: &NetworkParams,
    snr: f64,
    method: AsepMethod,
) -> Result<f64, AnalyticError> {
    let m = spectrum.m();
    if m < 2 {
        return Err(AnalyticError::Domain("spectrum needs M >= 2".into()));
    }
    match method {
        AsepMethod::NearestNeighbor => Ok(spectrum.mean_neighbors() * apep(spectrum.delta_min_sq, p, snr)?),
        AsepMethod::FullUnionBound => {
            let mut cache: Vec<(f64, f64)> = Vec::new();
            let mut total = 0.0;
            for d in spectrum.ordered_pairs() {
                let hit = cache.iter().find(|(k, _)| (k - d).abs() <= 1e-12 * d).map(|e| e.1);
                let v = match hit {
                    Some(v) => v,
                    None => {
                        let v = apep(d, p, snr)?;
                        cache.push((d, v));
                        v
                    }
                };
                total += v;
            }
            Ok(total / m as f64)
        }
    }
}
