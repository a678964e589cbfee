//! Run configuration.
//!
//! The JSON file uses the units people quote (dB, dBm, per-pilot λ_u).
//! [`RunConfig::parse`] converts them to linear SI exactly once, expanding
//! the sweep into one fully converted [`NetworkParams`] per point. Nothing
//! downstream sees a dB value except as a CSV label.

use gfscma::analytic::{AsepMethod, InterCoefficient, SignalModel, SuccessOptions};
use gfscma::montecarlo::{SimOptions, DEFAULT_WINDOW};
use gfscma::netmodel::{InterfererThinning, NetworkParams, ParamError, C_VORONOI};
use gfscma::scma::{builtin_codebook, load_codebook, BuiltinCodebook, Codebook};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Sweeps longer than this are rejected as a likely typo in `step`.
pub const MAX_SWEEP_POINTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("config is not valid JSON for this schema: {0}")]
    Json(String),
    #[error("invalid `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn field(name: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: name.to_owned(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Analytic,
    Simulate,
    Both,
}

impl Mode {
    pub fn analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    pub fn simulate(self) -> bool {
        matches!(self, Mode::Simulate | Mode::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    GammaThDb,
    LambdaU,
    SnrDb,
    RhoMaxDbm,
    TOverK,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::GammaThDb => "gamma_th_db",
            SweepVar::LambdaU => "lambda_u",
            SweepVar::SnrDb => "snr_db",
            SweepVar::RhoMaxDbm => "rho_max_dbm",
            SweepVar::TOverK => "t_over_k",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepSpec {
    /// `start + i·step` for every `i` with the value not past `stop`.
    pub fn values(&self) -> Result<Vec<f64>, ConfigError> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(field(
                "sweep.step",
                format!("must be finite and > 0, got {}", self.step),
            ));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(field("sweep.start", "start and stop must be finite"));
        }
        if self.stop < self.start {
            return Err(field(
                "sweep.stop",
                format!("{} is below start {}", self.stop, self.start),
            ));
        }
        let span = (self.stop - self.start) / self.step;
        if span >= MAX_SWEEP_POINTS as f64 {
            return Err(field("sweep.step", format!("more than {MAX_SWEEP_POINTS} points")));
        }
        let n = (span + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.start + i as f64 * self.step).collect())
    }
}

/// Network parameters as written in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsFile {
    /// BS intensity, m⁻².
    pub lambda_b: f64,
    /// Per-pilot active UE intensity, m⁻².
    pub lambda_u: f64,
    pub p_a: f64,
    pub rho_dbm: f64,
    /// `null` removes the power cap.
    pub rho_max_dbm: Option<f64>,
    pub sigma_sq_dbm: f64,
    pub eta: f64,
    pub gamma_th_db: f64,
    pub k: usize,
    pub l: usize,
    pub t: usize,
    pub m: usize,
    pub d_s: usize,
    pub c_voronoi: f64,
    pub interferer_thinning: InterfererThinning,
    pub signal_model: SignalModel,
    pub inter_coefficient: InterCoefficient,
}

impl Default for ParamsFile {
    fn default() -> Self {
        Self {
            lambda_b: 1e-5,
            lambda_u: 6e-6,
            p_a: 0.1,
            rho_dbm: -100.0,
            rho_max_dbm: Some(30.0),
            sigma_sq_dbm: -90.0,
            eta: 4.0,
            gamma_th_db: -5.0,
            k: 4,
            l: 6,
            t: 4,
            m: 4,
            d_s: 2,
            c_voronoi: C_VORONOI,
            interferer_thinning: InterfererThinning::default(),
            signal_model: SignalModel::default(),
            inter_coefficient: InterCoefficient::default(),
        }
    }
}

/// The config file as written. Serializing it back reproduces the input
/// up to formatting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub params: ParamsFile,
    pub sweep: Option<SweepSpec>,
    pub mode: Mode,
    /// Builtin name (`sparse4`, `dense4`, `sparse8`, `dense8`) or a path.
    pub codebook: String,
    pub asep_method: AsepMethod,
    pub n_real: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub typical_collision_fails: bool,
    pub window_side: f64,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            params: ParamsFile::default(),
            sweep: None,
            mode: Mode::default(),
            codebook: "sparse4".to_owned(),
            asep_method: AsepMethod::default(),
            n_real: 10_000,
            seed: 1,
            output: None,
            typical_collision_fails: false,
            window_side: DEFAULT_WINDOW,
        }
    }
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_json_compact(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// One sweep point: its axis label in file units and the converted parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub label: f64,
    pub params: NetworkParams,
}

impl SweepPoint {
    /// `ρ/σ²`, the SNR the error-rate formulas take.
    pub fn snr(&self) -> f64 {
        self.params.rho / self.params.sigma_sq
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CodebookSource {
    Builtin(BuiltinCodebook),
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub file: ConfigFile,
    /// Parameters at the file's base point, before any sweep.
    pub base: NetworkParams,
    pub options: SuccessOptions,
    pub sim: SimOptions,
    /// Axis variable; `None` when the file has no sweep.
    pub axis: Option<SweepVar>,
    pub points: Vec<SweepPoint>,
    pub codebook: CodebookSource,
}

fn rename_param_field(f: &str) -> &str {
    match f {
        "rho" => "rho_dbm",
        "rho_max" => "rho_max_dbm",
        "sigma_sq" => "sigma_sq_dbm",
        "gamma_th" => "gamma_th_db",
        "lambda_ue" => "lambda_u",
        "j" => "t",
        other => other,
    }
}

fn param_error(e: ParamError) -> ConfigError {
    match e {
        ParamError::Invalid { field: f, reason } => ConfigError::Field {
            field: format!("params.{}", rename_param_field(f)),
            reason,
        },
    }
}

fn base_params(f: &ParamsFile) -> Result<NetworkParams, ConfigError> {
    let mut p = NetworkParams {
        lambda_b: f.lambda_b,
        lambda_ue: 0.0,
        p_a: f.p_a,
        rho: dbm_to_watts(f.rho_dbm),
        rho_max: f.rho_max_dbm.map_or(f64::INFINITY, dbm_to_watts),
        eta: f.eta,
        sigma_sq: dbm_to_watts(f.sigma_sq_dbm),
        gamma_th: db_to_linear(f.gamma_th_db),
        k: f.k,
        l: f.l,
        t: f.t,
        m: f.m,
        d_s: f.d_s,
        j: 1,
        c_voronoi: f.c_voronoi,
        interferer_thinning: f.interferer_thinning,
    };
    if f.k == 0 {
        return Err(field("params.k", "must be >= 1"));
    }
    p.set_tones(f.t).map_err(param_error)?;
    if !(f.lambda_u >= 0.0) || !f.lambda_u.is_finite() {
        return Err(field(
            "params.lambda_u",
            format!("must be finite and >= 0, got {}", f.lambda_u),
        ));
    }
    if !(f.p_a > 0.0) {
        return Err(field("params.p_a", format!("must be > 0, got {}", f.p_a)));
    }
    p.set_lambda_u(f.lambda_u);
    p.validate().map_err(param_error)?;
    Ok(p)
}

fn apply(var: SweepVar, v: f64, base: &NetworkParams) -> Result<NetworkParams, ConfigError> {
    let mut p = base.clone();
    match var {
        SweepVar::GammaThDb => p.gamma_th = db_to_linear(v),
        SweepVar::LambdaU => {
            if !(v >= 0.0) {
                return Err(field("sweep", format!("lambda_u must be >= 0, got {v}")));
            }
            p.set_lambda_u(v)
        }
        SweepVar::SnrDb => p.sigma_sq = p.rho / db_to_linear(v),
        SweepVar::RhoMaxDbm => p.rho_max = dbm_to_watts(v),
        SweepVar::TOverK => {
            let t = v * p.k as f64;
            if !(t >= 1.0) || (t - t.round()).abs() > 1e-9 {
                return Err(field(
                    "sweep",
                    format!("t_over_k = {v} times K = {} is not a positive integer", p.k),
                ));
            }
            p.set_tones(t.round() as usize)
                .map_err(|e| field("sweep", e.to_string()))?;
        }
    }
    p.validate()
        .map_err(|e| field("sweep", format!("at {} = {v}: {e}", var.name())))?;
    Ok(p)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_file(ConfigFile::from_json(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn from_file(file: ConfigFile) -> Result<Self, ConfigError> {
        let base = base_params(&file.params)?;
        if file.n_real == 0 {
            return Err(field("n_real", "must be >= 1"));
        }
        if !(file.window_side > 0.0) || !file.window_side.is_finite() {
            return Err(field(
                "window_side",
                format!("must be finite and > 0, got {}", file.window_side),
            ));
        }
        let codebook = match file.codebook.parse::<BuiltinCodebook>() {
            Ok(b) => CodebookSource::Builtin(b),
            Err(_) if file.codebook.is_empty() => return Err(field("codebook", "must name a builtin or a file")),
            Err(_) => CodebookSource::File(PathBuf::from(&file.codebook)),
        };
        let (axis, points) = match &file.sweep {
            None => (
                None,
                vec![SweepPoint {
                    label: f64::NAN,
                    params: base.clone(),
                }],
            ),
            Some(s) => {
                let points = s
                    .values()?
                    .into_iter()
                    .map(|v| {
                        Ok(SweepPoint {
                            label: v,
                            params: apply(s.variable, v, &base)?,
                        })
                    })
                    .collect::<Result<Vec<_>, ConfigError>>()?;
                (Some(s.variable), points)
            }
        };
        Ok(Self {
            options: SuccessOptions {
                signal: file.params.signal_model,
                inter: file.params.inter_coefficient,
            },
            sim: SimOptions {
                window_side: file.window_side,
                typical_collision_fails: file.typical_collision_fails,
            },
            base,
            axis,
            points,
            codebook,
            file,
        })
    }

    /// Replaces the seed in both the echo and the run.
    pub fn set_seed(&mut self, seed: u64) {
        self.file.seed = seed;
    }

    pub fn set_n_real(&mut self, n: u64) -> Result<(), ConfigError> {
        if n == 0 {
            return Err(field("n_real", "must be >= 1"));
        }
        self.file.n_real = n;
        Ok(())
    }

    pub fn set_mode(&mut self, mode: Mode) {
        self.file.mode = mode;
    }

    pub fn set_output(&mut self, out: PathBuf) {
        self.file.output = Some(out);
    }

    pub fn seed(&self) -> u64 {
        self.file.seed
    }

    pub fn n_real(&self) -> u64 {
        self.file.n_real
    }

    pub fn mode(&self) -> Mode {
        self.file.mode
    }

    /// Loads the codebook and checks it against `M` and `d_s`.
    pub fn load_codebook(&self) -> Result<Codebook, ConfigError> {
        let cb = match &self.codebook {
            CodebookSource::Builtin(b) => builtin_codebook(*b),
            CodebookSource::File(path) => load_codebook(path).map_err(|e| field("codebook", e.to_string()))?,
        };
        if cb.m() != self.base.m {
            return Err(field(
                "codebook",
                format!("has M = {} but params.m = {}", cb.m(), self.base.m),
            ));
        }
        if cb.d_s() != self.base.d_s {
            return Err(field(
                "codebook",
                format!("has d_s = {} but params.d_s = {}", cb.d_s(), self.base.d_s),
            ));
        }
        Ok(cb)
    }
}
