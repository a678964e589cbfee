//! Network parameters and the scalar quantities shared by the analysis and
//! the simulator: truncated channel-inversion power control, truncation
//! outage, and the occupancy law of the typical cell.
//!
//! All quantities are linear SI: intensities in m⁻², powers in W, the
//! threshold `gamma_th` as a plain ratio.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Constant of the gamma approximation to the Voronoi cell area law.
pub const C_VORONOI: f64 = 3.575;
/// Surviving tail mass at which occupancy sums are truncated.
pub const PMF_TAIL: f64 = 1e-12;
/// Safety cap on the occupancy table length.
const PMF_MAX_LEN: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ParamError {
    ParamError::Invalid {
        field,
        reason: reason.into(),
    }
}

/// Which UE population thins the interferer intensity in the occupancy law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum InterfererThinning {
    /// `β = 𝒪_p·λ_u/(c·λ_b)`: scale by the truncated fraction.
    #[serde(alias = "as_paper")]
    Truncated,
    /// `β = (1 − 𝒪_p)·λ_u/(c·λ_b)`: scale by the transmitting fraction.
    #[default]
    Complement,
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

/// Every scalar of the network model. `rho_max` may be `+∞` (no power cap);
/// it serializes as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkParams {
    pub lambda_b: f64,
    pub lambda_ue: f64,
    pub p_a: f64,
    pub rho: f64,
    #[serde(with = "infinite_as_null")]
    pub rho_max: f64,
    pub eta: f64,
    pub sigma_sq: f64,
    pub gamma_th: f64,
    pub k: usize,
    pub l: usize,
    pub t: usize,
    pub m: usize,
    pub d_s: usize,
    pub j: usize,
    #[serde(default = "default_c")]
    pub c_voronoi: f64,
    #[serde(default)]
    pub interferer_thinning: InterfererThinning,
}

fn default_c() -> f64 {
    C_VORONOI
}

impl Default for NetworkParams {
    /// λ_b = 1e-5, p_a = 0.1, ρ = −100 dBm, σ² = −90 dBm, η = 4, ρ_m = 1 W,
    /// K = 4, L = 6, T = 4, M = 4, d_s = 2 (so J = 6), λ_u = 6e-6, γ_th = −5 dB.
    fn default() -> Self {
        let mut p = Self {
            lambda_b: 1e-5,
            lambda_ue: 0.0,
            p_a: 0.1,
            rho: 1e-13,
            rho_max: 1.0,
            eta: 4.0,
            sigma_sq: 1e-12,
            gamma_th: 10f64.powf(-0.5),
            k: 4,
            l: 6,
            t: 4,
            m: 4,
            d_s: 2,
            j: 6,
            c_voronoi: C_VORONOI,
            interferer_thinning: InterfererThinning::default(),
        };
        p.set_lambda_u(6e-6);
        p
    }
}

/// Transmit power under truncated channel inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TxPower {
    Transmit(f64),
    Truncated,
}

impl NetworkParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        let positive = [
            ("lambda_b", self.lambda_b),
            ("rho", self.rho),
            ("rho_max", self.rho_max),
            ("sigma_sq", self.sigma_sq),
            ("gamma_th", self.gamma_th),
            ("c_voronoi", self.c_voronoi),
        ];
        for (field, v) in positive {
            if !(v > 0.0) || v.is_nan() {
                return Err(invalid(field, format!("must be > 0, got {v}")));
            }
            if v.is_infinite() && field != "rho_max" && field != "gamma_th" {
                return Err(invalid(field, "must be finite"));
            }
        }
        if !(self.lambda_ue >= 0.0) || !self.lambda_ue.is_finite() {
            return Err(invalid(
                "lambda_ue",
                format!("must be finite and >= 0, got {}", self.lambda_ue),
            ));
        }
        if !(self.eta > 2.0) || !self.eta.is_finite() {
            return Err(invalid(
                "eta",
                format!("path-loss exponent must exceed 2, got {}", self.eta),
            ));
        }
        if !(0.0..=1.0).contains(&self.p_a) {
            return Err(invalid("p_a", format!("must lie in [0, 1], got {}", self.p_a)));
        }
        for (field, v) in [
            ("k", self.k),
            ("l", self.l),
            ("t", self.t),
            ("d_s", self.d_s),
            ("j", self.j),
        ] {
            if v == 0 {
                return Err(invalid(field, "must be >= 1"));
            }
        }
        if self.m < 2 {
            return Err(invalid(
                "m",
                format!("codebook cardinality must be >= 2, got {}", self.m),
            ));
        }
        if self.d_s > self.k {
            return Err(invalid("d_s", format!("d_s = {} exceeds K = {}", self.d_s, self.k)));
        }
        if self.l * self.t != self.j * self.k {
            return Err(invalid(
                "j",
                format!("J = {} but L*T/K = {}*{}/{}", self.j, self.l, self.t, self.k),
            ));
        }
        Ok(())
    }

    /// Sets `T` and the derived `J = L·T/K`, keeping λ_u fixed.
    pub fn set_tones(&mut self, t: usize) -> Result<(), ParamError> {
        let lu = self.lambda_u();
        let lt = self.l * t;
        if self.k == 0 || lt % self.k != 0 {
            return Err(invalid("t", format!("K = {} must divide L*T = {lt}", self.k)));
        }
        self.t = t;
        self.j = lt / self.k;
        self.set_lambda_u(lu);
        Ok(())
    }

    /// Sets `K`, `L` and `T` together, keeping λ_u.
    pub fn set_layout(&mut self, k: usize, l: usize, t: usize) -> Result<(), ParamError> {
        let lu = self.lambda_u();
        let (k0, l0) = (self.k, self.l);
        self.k = k;
        self.l = l;
        if let Err(e) = self.set_tones(t) {
            self.k = k0;
            self.l = l0;
            return Err(e);
        }
        self.set_lambda_u(lu);
        Ok(())
    }

    /// Sets λ_ue so that the per-pilot intensity equals `lambda_u`.
    pub fn set_lambda_u(&mut self, lambda_u: f64) {
        self.lambda_ue = if self.p_a > 0.0 {
            lambda_u * (self.j * self.l) as f64 / self.p_a
        } else {
            0.0
        };
    }

    pub fn lambda_u(&self) -> f64 {
        pilot_intensity(self)
    }

    /// `b = η/2`.
    pub fn b(&self) -> f64 {
        self.eta / 2.0
    }

    /// `α = πλ_b(ρ_m/ρ)^{1/b}`; infinite when `ρ_m` is.
    pub fn alpha(&self) -> f64 {
        PI * self.lambda_b * (self.rho_max / self.rho).powf(1.0 / self.b())
    }

    /// Distance beyond which a UE is truncated, `(ρ_m/ρ)^{1/η}`.
    pub fn truncation_radius(&self) -> f64 {
        (self.rho_max / self.rho).powf(1.0 / self.eta)
    }

    /// Negative-binomial scale β of the occupancy law.
    pub fn occupancy_beta(&self) -> f64 {
        let op = truncation_outage(self);
        let w = match self.interferer_thinning {
            InterfererThinning::Truncated => op,
            InterfererThinning::Complement => 1.0 - op,
        };
        w * self.lambda_u() / (self.c_voronoi * self.lambda_b)
    }
}

/// `λ_u = p_a·λ_ue/(J·L)`.
pub fn pilot_intensity(p: &NetworkParams) -> f64 {
    p.p_a * p.lambda_ue / (p.j * p.l) as f64
}

/// `ρR^η` when it does not exceed `ρ_m`, else truncated.
pub fn tx_power(r: f64, p: &NetworkParams) -> TxPower {
    let pw = p.rho * r.powf(p.eta);
    if pw <= p.rho_max {
        TxPower::Transmit(pw)
    } else {
        TxPower::Truncated
    }
}

/// `𝒪_p = e^{−α}`.
pub fn truncation_outage(p: &NetworkParams) -> f64 {
    (-p.alpha()).exp()
}

/// `P{|𝒰_in| = u}` for scale `beta` and shape `c + 1`.
pub fn occupancy_pmf_beta(u: usize, beta: f64, c: f64) -> f64 {
    if beta == 0.0 {
        return if u == 0 { 1.0 } else { 0.0 };
    }
    let uf = u as f64;
    let ln = ln_gamma_pos(uf + c + 1.0) - ln_gamma_pos(c + 1.0) - ln_gamma_pos(uf + 1.0) + uf * beta.ln()
        - (uf + c + 1.0) * beta.ln_1p();
    ln.exp()
}

fn ln_gamma_pos(x: f64) -> f64 {
    crate::specfun::ln_gamma(x).expect("argument is positive")
}

pub fn occupancy_pmf(u: usize, p: &NetworkParams) -> f64 {
    occupancy_pmf_beta(u, p.occupancy_beta(), p.c_voronoi)
}

/// Occupancy probabilities `P(0), P(1), …` up to the point where the
/// remaining mass drops below [`PMF_TAIL`].
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyTable {
    pub pmf: Vec<f64>,
    /// `1 − Σ pmf`, clamped at zero.
    pub tail: f64,
}

impl OccupancyTable {
    pub fn new(beta: f64, c: f64) -> Self {
        let q = beta / (1.0 + beta);
        let mut p = (-(c + 1.0) * beta.ln_1p()).exp();
        let mut pmf = Vec::new();
        let mut cum = 0.0;
        let mut u = 0usize;
        loop {
            pmf.push(p);
            cum += p;
            if 1.0 - cum < PMF_TAIL || pmf.len() >= PMF_MAX_LEN || beta == 0.0 {
                break;
            }
            p *= (u as f64 + c + 1.0) / (u as f64 + 1.0) * q;
            u += 1;
        }
        Self {
            tail: (1.0 - cum).max(0.0),
            pmf,
        }
    }

    pub fn for_params(p: &NetworkParams) -> Self {
        Self::new(p.occupancy_beta(), p.c_voronoi)
    }

    /// `P(u)`, zero beyond the table.
    pub fn get(&self, u: usize) -> f64 {
        self.pmf.get(u).copied().unwrap_or(0.0)
    }

    /// `P{|𝒰_in| ≥ j}` computed as a complement.
    pub fn at_least(&self, j: usize) -> f64 {
        (1.0 - self.pmf.iter().take(j).sum::<f64>()).max(0.0)
    }
}

/// Mean number of served UEs `Ū = 1 + Σ_{u<J} u·P(u) + (J−1)·P{u ≥ J}`.
pub fn mean_served(p: &NetworkParams) -> f64 {
    mean_served_beta(p.occupancy_beta(), p.c_voronoi, p.j)
}

pub fn mean_served_beta(beta: f64, c: f64, j: usize) -> f64 {
    let table = OccupancyTable::new(beta, c);
    let head: f64 = (1..j).map(|u| u as f64 * table.get(u)).sum();
    1.0 + head + (j - 1) as f64 * table.at_least(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_consistent() {
        let p = NetworkParams::default();
        p.validate().unwrap();
        assert!((p.lambda_u() - 6e-6).abs() < 1e-20);
        assert!((p.lambda_ue - 2.16e-3).abs() < 1e-15);
        assert!((p.alpha() - PI * 1e-5 * 1e13f64.sqrt()).abs() < 1e-9);
        assert!((p.truncation_radius() - 1e13f64.powf(0.25)).abs() < 1e-9);
    }

    #[test]
    fn power_control_boundary_transmits() {
        let p = NetworkParams::default();
        assert_eq!(tx_power(0.0, &p), TxPower::Transmit(0.0));
        match tx_power(1000.0, &p) {
            TxPower::Transmit(w) => assert!((w - 0.1).abs() < 1e-15),
            TxPower::Truncated => panic!(),
        }
        assert_eq!(tx_power(2000.0, &p), TxPower::Truncated);
        let mut q = p.clone();
        q.rho = 1.0 / 16.0;
        q.rho_max = 1.0;
        assert_eq!(tx_power(2.0, &q), TxPower::Transmit(1.0));
    }

    #[test]
    fn validation_names_the_field() {
        let mut p = NetworkParams::default();
        p.eta = 2.0;
        assert!(matches!(p.validate(), Err(ParamError::Invalid { field: "eta", .. })));
        let mut p = NetworkParams::default();
        p.j = 5;
        assert!(matches!(p.validate(), Err(ParamError::Invalid { field: "j", .. })));
        let mut p = NetworkParams::default();
        assert!(p.set_tones(3).is_err());
        p.set_tones(8).unwrap();
        assert_eq!(p.j, 12);
        assert!((p.lambda_u() - 6e-6).abs() < 1e-20);
    }
}
