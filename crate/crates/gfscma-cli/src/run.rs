//! Sweeps and their CSV tables.

use crate::config::{ConfigError, RunConfig, SweepVar};
use gfscma::analytic::{self, ase_from_success, success_probability_with, AnalyticError};
use gfscma::montecarlo::{simulate_asep, simulate_success_grid, McError, MetricEstimate};
use gfscma::scma::distance_spectrum;
use rayon::prelude::*;
use std::fmt::Write as _;

pub const GIT_REV: &str = env!("GFSCMA_GIT_REV");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("analytic evaluation failed at {axis} = {label}: {source}")]
    Analytic {
        axis: &'static str,
        label: f64,
        source: AnalyticError,
    },
    #[error("simulation failed at {axis} = {label}: {source}")]
    Simulation {
        axis: &'static str,
        label: f64,
        source: McError,
    },
}

/// Result columns; `None` renders as an empty CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Axis name and per-point labels. Without a sweep the single row is
/// labelled by the default axis at its base value.
fn axis_labels(cfg: &RunConfig, default: SweepVar) -> (SweepVar, Vec<f64>) {
    match cfg.axis {
        Some(v) => (v, cfg.points.iter().map(|p| p.label).collect()),
        None => {
            let f = &cfg.file.params;
            let label = match default {
                SweepVar::GammaThDb => f.gamma_th_db,
                _ => f.rho_dbm - f.sigma_sq_dbm,
            };
            (default, vec![label])
        }
    }
}

fn estimates_or_none(
    cfg: &RunConfig,
    axis: SweepVar,
    labels: &[f64],
    f: impl Fn(usize) -> Result<Vec<MetricEstimate>, McError>,
) -> Result<Vec<Option<MetricEstimate>>, RunError> {
    if !cfg.mode().simulate() {
        return Ok(vec![None; labels.len()]);
    }
    let mut out = Vec::with_capacity(labels.len());
    let mut i = 0;
    while i < labels.len() {
        let batch = f(i).map_err(|source| RunError::Simulation {
            axis: axis.name(),
            label: labels[i],
            source,
        })?;
        i += batch.len();
        out.extend(batch.into_iter().map(Some));
    }
    Ok(out)
}

/// Success probability and ASE along the sweep.
pub fn run_psuc(cfg: &RunConfig) -> Result<Table, RunError> {
    let (axis, labels) = axis_labels(cfg, SweepVar::GammaThDb);
    let analytic: Vec<Option<(f64, f64)>> = if cfg.mode().analytic() {
        cfg.points
            .par_iter()
            .zip(labels.par_iter())
            .map(|(pt, &label)| {
                let r = success_probability_with(&pt.params, cfg.options).map_err(|source| RunError::Analytic {
                    axis: axis.name(),
                    label,
                    source,
                })?;
                Ok(Some((r.p_suc, ase_from_success(&pt.params, r.p_suc))))
            })
            .collect::<Result<_, RunError>>()?
    } else {
        vec![None; labels.len()]
    };
    // A γ_th sweep shares one set of realizations across all thresholds.
    let sim = estimates_or_none(cfg, axis, &labels, |i| {
        if cfg.axis == Some(SweepVar::GammaThDb) {
            let gammas: Vec<f64> = cfg.points.iter().map(|p| p.params.gamma_th).collect();
            simulate_success_grid(&cfg.base, &cfg.sim, &gammas, cfg.n_real(), cfg.seed())
        } else {
            let p = &cfg.points[i].params;
            simulate_success_grid(p, &cfg.sim, &[p.gamma_th], cfg.n_real(), cfg.seed())
        }
    })?;
    let rows = labels
        .iter()
        .zip(analytic)
        .zip(sim)
        .map(|((&label, a), s)| {
            vec![
                Some(label),
                a.map(|a| a.0),
                s.map(|s| s.value),
                s.map(|s| s.ci_halfwidth),
                a.map(|a| a.1),
            ]
        })
        .collect();
    Ok(Table {
        columns: vec![
            axis.name(),
            "p_suc_analytic",
            "p_suc_sim",
            "ci_halfwidth",
            "ase_analytic",
        ],
        rows,
    })
}

/// Average symbol error probability along the sweep.
pub fn run_asep(cfg: &RunConfig) -> Result<Table, RunError> {
    let cb = cfg.load_codebook()?;
    let spectrum = distance_spectrum(&cb);
    let (axis, labels) = axis_labels(cfg, SweepVar::SnrDb);
    let analytic: Vec<Option<f64>> = if cfg.mode().analytic() {
        cfg.points
            .par_iter()
            .zip(labels.par_iter())
            .map(|(pt, &label)| {
                analytic::asep(&spectrum, &pt.params, pt.snr(), cfg.file.asep_method)
                    .map(Some)
                    .map_err(|source| RunError::Analytic {
                        axis: axis.name(),
                        label,
                        source,
                    })
            })
            .collect::<Result<_, RunError>>()?
    } else {
        vec![None; labels.len()]
    };
    let sim = estimates_or_none(cfg, axis, &labels, |i| {
        let pt = &cfg.points[i];
        simulate_asep(&pt.params, &cb, pt.snr(), cfg.n_real(), cfg.seed()).map(|e| vec![e])
    })?;
    let rows = labels
        .iter()
        .zip(analytic)
        .zip(sim)
        .map(|((&label, a), s)| vec![Some(label), a, s.map(|s| s.value), s.map(|s| s.ci_halfwidth)])
        .collect();
    Ok(Table {
        columns: vec![axis.name(), "asep_analytic", "asep_sim", "ci_halfwidth"],
        rows,
    })
}

/// CSV with a `#` header echoing the full config, revision and seed.
/// Values use the shortest representation that round-trips.
pub fn render_csv(cfg: &RunConfig, command: &str, table: &Table) -> String {
    let mut s = String::new();
    writeln!(s, "# gfscma {} {command}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(s, "# git_revision: {GIT_REV}").unwrap();
    writeln!(s, "# seed: {}", cfg.seed()).unwrap();
    writeln!(s, "# config: {}", cfg.file.to_json_compact()).unwrap();
    writeln!(s, "{}", table.columns.join(",")).unwrap();
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| c.map(|v| format!("{v:?}")).unwrap_or_default())
            .collect();
        writeln!(s, "{}", cells.join(",")).unwrap();
    }
    s
}
