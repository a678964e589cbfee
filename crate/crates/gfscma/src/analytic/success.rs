use super::gil_pelaez::{gil_pelaez_cdf, CharacteristicFunction};
use super::{AnalyticError, CLAMP_LIMIT};
use crate::netmodel::{mean_served, NetworkParams, OccupancyTable};
use crate::specfun::{hyp2f1, lower_incomplete_gamma};
use num_complex::Complex64;
use std::f64::consts::PI;

/// How the signal of the decodable set and the intra-cell interference are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalModel {
    /// One expectation over the occupancy `u`: `u + 1` UEs contend for `J`
    /// codebooks, `min(u+1, J)` are decoded and the rest interfere.
    #[default]
    Joint,
    /// Product `𝒮_ω·Φ_intra` of separately averaged signal and intra-cell terms,
    /// with the signal exponent `−d_s(u+1)`.
    Factorized,
    /// As `Factorized`, with the signal bracket `1 − Σ_{u<J} P(u)[A^{u} − A^{J}]`.
    FactorizedLiteral,
}

/// Coefficient multiplying `βc·ℳ_ω` in the inter-cell exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterCoefficient {
    /// `γ(2, α) = 1 − (1 + α)e^{−α}`, the mean of `πλ_bR²` over the serving
    /// distance of non-truncated interferers.
    #[default]
    LowerGamma,
    /// `1 − (1 + α/(πλ_b))e^{−α}`.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct SuccessOptions {
    pub signal: SignalModel,
    pub inter: InterCoefficient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessResult {
    /// Success probability, clamped to `[0, 1]`.
    pub p_suc: f64,
    pub integrand_evals: usize,
    pub truncation_omega: f64,
    /// Quadrature value minus `p_suc`; nonzero only when clamping occurred.
    pub clamp_residual: f64,
}

/// Everything a CF evaluation needs, in units where frequency is `t = ωρ`.
#[derive(Debug, Clone)]
struct Model {
    d: f64,
    j: usize,
    gamma: f64,
    noise: f64,
    e_alpha: f64,
    inter_coef: f64,
    delta: f64,
    pmf: Vec<f64>,
    head_mass: f64,
    at_least_j: f64,
    signal: SignalModel,
}

fn lower_gamma_two(alpha: f64) -> Result<f64, AnalyticError> {
    if alpha.is_infinite() {
        return Ok(1.0);
    }
    Ok(lower_incomplete_gamma(2.0, alpha)?)
}

impl Model {
    fn new(p: &NetworkParams, opts: SuccessOptions) -> Result<Self, AnalyticError> {
        p.validate()?;
        let alpha = p.alpha();
        let table = OccupancyTable::for_params(p);
        let beta = p.occupancy_beta();
        let coef = match opts.inter {
            InterCoefficient::LowerGamma => lower_gamma_two(alpha)?,
            InterCoefficient::Literal => {
                if alpha.is_infinite() {
                    1.0
                } else {
                    1.0 - (1.0 + alpha / (PI * p.lambda_b)) * (-alpha).exp()
                }
            }
        };
        let head_mass = table.pmf.iter().take(p.j).sum();
        Ok(Self {
            d: p.d_s as f64,
            j: p.j,
            gamma: p.gamma_th,
            noise: p.sigma_sq / p.rho,
            e_alpha: (-alpha).exp(),
            inter_coef: beta * p.c_voronoi * coef,
            delta: 1.0 / p.b(),
            at_least_j: table.at_least(p.j),
            pmf: table.pmf,
            head_mass,
            signal: opts.signal,
        })
    }

    /// `(1 + jt/γ)^{−d_s}` as modulus and phase.
    fn signal_base(&self, t: f64) -> (f64, f64) {
        if self.gamma.is_infinite() {
            return (1.0, 0.0);
        }
        let z = Complex64::new(1.0, t / self.gamma);
        (z.norm().powf(-self.d), -self.d * z.arg())
    }

    /// `A^n` for the signal base.
    fn a_pow(&self, base: (f64, f64), n: usize) -> Complex64 {
        Complex64::from_polar(base.0.powi(n as i32), base.1 * n as f64)
    }

    fn k(&self, t: f64) -> Complex64 {
        let z = Complex64::new(1.0, -t);
        Complex64::from_polar(z.norm().powf(-self.d), -self.d * z.arg())
    }

    /// `Σ_{u≥J} P(u)·K^{u−J+1}`.
    fn intra_tail(&self, k: Complex64) -> Complex64 {
        let mut acc = Complex64::default();
        let mut kp = k;
        for &pu in self.pmf.iter().skip(self.j) {
            acc += pu * kp;
            kp *= k;
            if kp.norm() < 1e-18 {
                break;
            }
        }
        acc
    }

    fn intra(&self, t: f64) -> Complex64 {
        self.head_mass + self.intra_tail(self.k(t))
    }

    fn inter(&self, t: f64) -> Result<Complex64, AnalyticError> {
        if self.inter_coef == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let f = hyp2f1(-self.delta, self.d, 1.0 - self.delta, Complex64::new(0.0, t))?;
        Ok((self.inter_coef * (1.0 - f)).exp())
    }

    fn signal_term(&self, t: f64) -> Complex64 {
        let base = self.signal_base(t);
        let mix = match self.signal {
            SignalModel::FactorizedLiteral => {
                let aj = self.a_pow(base, self.j);
                let s: Complex64 = (0..self.j)
                    .map(|u| self.pmf.get(u).copied().unwrap_or(0.0) * (self.a_pow(base, u) - aj))
                    .sum();
                1.0 - s
            }
            _ => {
                let s: Complex64 = (0..self.j)
                    .map(|u| self.pmf.get(u).copied().unwrap_or(0.0) * self.a_pow(base, u + 1))
                    .sum();
                s + self.at_least_j * self.a_pow(base, self.j)
            }
        };
        self.e_alpha + (1.0 - self.e_alpha) * mix
    }

    /// `J(ω)`: signal and intra-cell interference averaged jointly.
    fn joint(&self, t: f64) -> Complex64 {
        let base = self.signal_base(t);
        let k = self.k(t);
        let tail = self.intra_tail(k);
        let head: Complex64 = (0..self.j)
            .map(|u| self.pmf.get(u).copied().unwrap_or(0.0) * self.a_pow(base, u + 1))
            .sum();
        let decoded = head + self.a_pow(base, self.j) * tail;
        self.e_alpha * (self.head_mass + tail) + (1.0 - self.e_alpha) * decoded
    }

    fn cf(&self, t: f64) -> Result<Complex64, AnalyticError> {
        let local = match self.signal {
            SignalModel::Joint => self.joint(t),
            _ => self.signal_term(t) * self.intra(t),
        };
        Ok(Complex64::from_polar(1.0, t * self.noise) * self.inter(t)? * local)
    }
}

/// Inter-cell interference CF `exp{βc·γ(2,α)·ℳ_ω}`, `ℳ_ω = 1 − ₂F₁(−1/b, d_s; 1−1/b; jωρ)`.
pub fn cf_inter(omega: f64, p: &NetworkParams) -> Result<Complex64, AnalyticError> {
    Model::new(p, SuccessOptions::default())?.inter(omega * p.rho)
}

/// Intra-cell interference CF `Σ_{u<J} P(u) + Σ_{u≥J} P(u)·𝒦_ω^{u−J+1}`, `𝒦_ω = (1 − jωρ)^{−d_s}`.
pub fn cf_intra(omega: f64, p: &NetworkParams) -> Result<Complex64, AnalyticError> {
    Ok(Model::new(p, SuccessOptions::default())?.intra(omega * p.rho))
}

/// Signal-related function `𝒮_ω` of the factorized form.
pub fn signal_term(omega: f64, p: &NetworkParams) -> Result<Complex64, AnalyticError> {
    let opts = SuccessOptions {
        signal: SignalModel::Factorized,
        ..SuccessOptions::default()
    };
    Ok(Model::new(p, opts)?.signal_term(omega * p.rho))
}

/// CF of `X = σ² + ℐ − S/γ_th`; success is the event `X ≤ 0`.
pub fn success_cf(p: &NetworkParams, opts: SuccessOptions) -> Result<CharacteristicFunction, AnalyticError> {
    let model = Model::new(p, opts)?;
    let rho = p.rho;
    Ok(CharacteristicFunction::new(
        format!("sigma^2 + I - S/gamma_th ({:?}, {:?})", opts.signal, opts.inter),
        1.0 / rho,
        move |omega| model.cf(omega * rho),
    ))
}

pub fn success_probability(p: &NetworkParams) -> Result<SuccessResult, AnalyticError> {
    success_probability_with(p, SuccessOptions::default())
}

pub fn success_probability_with(p: &NetworkParams, opts: SuccessOptions) -> Result<SuccessResult, AnalyticError> {
    let cf = success_cf(p, opts)?;
    let r = gil_pelaez_cdf(&cf, 0.0)?;
    let clamped = r.value.clamp(0.0, 1.0);
    let residual = r.value - clamped;
    if residual.abs() > CLAMP_LIMIT {
        return Err(AnalyticError::Overshoot { value: r.value });
    }
    Ok(SuccessResult {
        p_suc: clamped,
        integrand_evals: r.integrand_evals,
        truncation_omega: r.truncation_omega,
        clamp_residual: residual,
    })
}

/// Largest `σ²/ρ` for which the interference-limited form is evaluated.
pub const ASYMPTOTIC_MAX_NOISE: f64 = 1e-3;
/// Largest `P{|𝒰_in| ≥ J}` for which intra-cell interference is deemed absent.
pub const ASYMPTOTIC_MAX_OVERFLOW: f64 = 1e-3;

/// Interference-limited closed form with `ξ = 1/(1 + 1/d_s)`:
///
/// `1/2 − π^{−1/2}·β√(4b−2)·√ξ·[c/(2(b−1)) − (c+1)/γ_th·exp(−(λ_u/λ_b)²(2b−1)ξ/(2(b−1)²))]`.
///
/// Refuses when noise is not negligible, when the codebooks do not cover
/// the cell, or when the expression leaves `[0, 1]`.
pub fn success_probability_asymptotic(p: &NetworkParams) -> Result<f64, AnalyticError> {
    p.validate()?;
    let noise = p.sigma_sq / p.rho;
    if noise > ASYMPTOTIC_MAX_NOISE {
        return Err(AnalyticError::Refused(format!(
            "sigma^2/rho = {noise:e} exceeds {ASYMPTOTIC_MAX_NOISE:e}"
        )));
    }
    let overflow = OccupancyTable::for_params(p).at_least(p.j);
    if overflow > ASYMPTOTIC_MAX_OVERFLOW {
        return Err(AnalyticError::Refused(format!(
            "P(|U_in| >= J) = {overflow:e} exceeds {ASYMPTOTIC_MAX_OVERFLOW:e}"
        )));
    }
    let v = asymptotic_expression(p);
    if !(0.0..=1.0).contains(&v) {
        return Err(AnalyticError::Refused(format!(
            "expression evaluates to {v}, outside [0, 1]"
        )));
    }
    Ok(v)
}

/// The closed form without any premise checks.
#[doc(hidden)]
pub fn asymptotic_expression(p: &NetworkParams) -> f64 {
    let b = p.b();
    let c = p.c_voronoi;
    let beta = p.occupancy_beta();
    let xi = 1.0 / (1.0 + 1.0 / p.d_s as f64);
    let r = p.lambda_u() / p.lambda_b;
    let decay = (-r * r * (2.0 * b - 1.0) * xi / (2.0 * (b - 1.0).powi(2))).exp();
    let bracket = c / (2.0 * (b - 1.0)) - (c + 1.0) / p.gamma_th * decay;
    0.5 - beta * (4.0 * b - 2.0).sqrt() * xi.sqrt() * bracket / PI.sqrt()
}

/// Area spectral efficiency `λ_u·Ū·P_suc·log₂(1 + γ_th)`.
pub fn ase(p: &NetworkParams) -> Result<f64, AnalyticError> {
    if p.gamma_th.is_infinite() {
        p.validate()?;
        return Ok(0.0);
    }
    let ps = success_probability(p)?.p_suc;
    Ok(ase_from_success(p, ps))
}

/// ASE for an already computed success probability.
pub fn ase_from_success(p: &NetworkParams, p_suc: f64) -> f64 {
    if p.gamma_th.is_infinite() {
        return 0.0;
    }
    p.lambda_u() * mean_served(p) * p_suc * p.gamma_th.ln_1p() / std::f64::consts::LN_2
}
