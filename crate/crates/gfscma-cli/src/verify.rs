//! Release gate: a fast invariant suite over every library module.
//!
//! Each check records what it measured and the tolerance it was held to, so
//! the JSON report is self-describing. A check passes when
//! `measured <= tolerance`; boolean checks measure 0 or 1 against 0.

use gfscma::analytic::{asep, gil_pelaez_cdf, pep_constant, success_probability, AsepMethod, CharacteristicFunction};
use gfscma::montecarlo::{simulate_asep, simulate_success, stream_rng, with_threads};
use gfscma::netmodel::{mean_served_beta, NetworkParams, OccupancyTable, C_VORONOI};
use gfscma::scma::{builtin_codebook, distance_spectrum, BuiltinCodebook, Codebook};
use gfscma::specfun::{hyp1f1, hyp2f1, ln_gamma, lower_incomplete_gamma, ComplexValue as C};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub git_revision: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        // NaN measurements (failed evaluations) serialize as null.
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            write!(
                s,
                "{tag} {}/{}: measured {:e}, tolerance {:e}",
                c.module, c.name, c.measured, c.tolerance
            )
            .unwrap();
            if !c.detail.is_empty() {
                write!(s, " ({})", c.detail).unwrap();
            }
            s.push('\n');
        }
        let failed = self.failures().count();
        writeln!(s, "{} checks, {failed} failed (seed {})", self.checks.len(), self.seed).unwrap();
        s
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn le(&mut self, module: &'static str, name: impl Into<String>, measured: f64, tolerance: f64) {
        self.checks.push(Check {
            module,
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            detail: String::new(),
        });
    }

    fn with_detail(&mut self, detail: impl Into<String>) {
        if let Some(c) = self.checks.last_mut() {
            c.detail = detail.into();
        }
    }

    /// Records `f`'s measurement, or a failed check carrying the error.
    fn try_le<E: std::fmt::Display>(
        &mut self,
        module: &'static str,
        name: impl Into<String>,
        tolerance: f64,
        f: impl FnOnce() -> Result<f64, E>,
    ) {
        let name = name.into();
        match f() {
            Ok(m) => self.le(module, name, m, tolerance),
            Err(e) => {
                self.le(module, name, f64::NAN, tolerance);
                self.with_detail(e.to_string());
            }
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn crel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn specfun_checks(s: &mut Suite, seed: u64) {
    s.try_le("specfun", "ln_gamma(1/2)", 1e-14, || {
        ln_gamma(0.5).map(|v| rel(v, 0.5 * std::f64::consts::PI.ln()))
    });
    s.try_le("specfun", "lower_gamma(2,2)", 1e-13, || {
        lower_incomplete_gamma(2.0, 2.0).map(|v| rel(v, 1.0 - 3.0 * (-2.0f64).exp()))
    });
    let mut rng = stream_rng(seed, 0);
    let (mut kummer, mut pfaff, mut expo) = (0.0f64, 0.0f64, 0.0f64);
    let mut failure = None;
    for _ in 0..200 {
        let (a, b) = (rng.random_range(-3.0..5.0), rng.random_range(0.5..5.0));
        let z = C::from_polar(rng.random_range(0.0..50.0), rng.random_range(-3.1..3.1));
        match (hyp1f1(a, b, z), hyp1f1(b - a, b, -z), hyp1f1(b, b, z)) {
            (Ok(f), Ok(g), Ok(e)) => {
                kummer = kummer.max(crel(z.exp() * g, f));
                expo = expo.max(crel(e, z.exp()));
            }
            (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => failure = Some(e.to_string()),
        }
        let (a, b, c) = (
            rng.random_range(-2.5..3.0),
            rng.random_range(-2.5..3.0),
            rng.random_range(0.5..4.0),
        );
        let z = C::from_polar(rng.random_range(0.0..0.5), rng.random_range(-3.1..3.1));
        match (hyp2f1(a, b, c, z), hyp2f1(c - a, b, c, z / (z - 1.0))) {
            (Ok(d), Ok(w)) => pfaff = pfaff.max(crel((1.0 - z).powf(-b) * w, d)),
            (Err(e), _) | (_, Err(e)) => failure = Some(e.to_string()),
        }
    }
    let fail = |v: f64| if failure.is_some() { f64::NAN } else { v };
    s.le("specfun", "kummer_residual", fail(kummer), 1e-8);
    s.le("specfun", "pfaff_residual", fail(pfaff), 1e-8);
    s.le("specfun", "hyp1f1(a;a;z)=exp(z)", fail(expo), 1e-9);
    if let Some(e) = failure {
        s.with_detail(e);
    }
}

fn codebook_checks(s: &mut Suite, name: &str, cb: &Codebook, expected_dmin: Option<f64>) {
    s.le("scma", format!("unit_power[{name}]"), cb.max_power_deviation(), 1e-9);
    let spectrum = distance_spectrum(cb);
    let lonely = spectrum.neighbor_count.iter().filter(|&&n| n == 0).count();
    s.le("scma", format!("nearest_neighbors[{name}]"), lonely as f64, 0.0);
    if lonely > 0 {
        s.with_detail(format!("{lonely} codewords have no neighbor at the minimum distance"));
    }
    if let Some(want) = expected_dmin {
        s.le(
            "scma",
            format!("delta_min_sq[{name}]"),
            (spectrum.delta_min_sq - want).abs(),
            1e-4,
        );
    }
}

fn netmodel_checks(s: &mut Suite) {
    for beta in [0.5, 3.0, 15.0] {
        let t = OccupancyTable::new(beta, C_VORONOI);
        s.le(
            "netmodel",
            format!("pmf_mass[beta={beta}]"),
            (t.pmf.iter().sum::<f64>() - 1.0).abs(),
            1e-9,
        );
        let x: f64 = 0.6;
        let g: f64 = t.pmf.iter().enumerate().map(|(u, p)| p * x.powi(u as i32)).sum();
        let want = (1.0 + beta * (1.0 - x)).powf(-C_VORONOI - 1.0);
        s.le(
            "netmodel",
            format!("generating_function[beta={beta}]"),
            rel(g, want),
            1e-8,
        );
    }
    let m = (mean_served_beta(2.0, C_VORONOI, 6) - mean_served_beta(3.0, C_VORONOI, 6)).max(0.0);
    s.le("netmodel", "mean_served_monotone", m, 1e-12);
}

fn analytic_checks(s: &mut Suite) {
    let gamma2 = CharacteristicFunction::new("Gamma(2,1)", 1.0, |w| Ok(Complex64::new(1.0, -w).powi(-2)));
    s.try_le("analytic", "gil_pelaez_gamma2_cdf(2)", 1e-6, || {
        gil_pelaez_cdf(&gamma2, 2.0).map(|r| (r.value - (1.0 - 3.0 * (-2.0f64).exp())).abs())
    });
    let normal = CharacteristicFunction::new("N(0,1)", 1.0, |w| Ok(Complex64::new((-w * w / 2.0).exp(), 0.0)));
    s.try_le("analytic", "gil_pelaez_normal_median", 1e-8, || {
        gil_pelaez_cdf(&normal, 0.0).map(|r| (r.value - 0.5).abs())
    });
    s.try_le("analytic", "p_suc_monotone_in_gamma", 1e-8, || {
        let mut p = NetworkParams::default();
        p.set_lambda_u(3e-5);
        let mut worst = 0.0f64;
        let mut prev = f64::INFINITY;
        for db in [-10.0, -5.0, 0.0, 5.0] {
            p.gamma_th = 10f64.powf(db / 10.0);
            let v = success_probability(&p)?.p_suc;
            worst = worst.max(v - prev);
            prev = v;
        }
        Ok::<_, gfscma::analytic::AnalyticError>(worst)
    });
    s.try_le("analytic", "pep_constant_uncapped", 1e-9, || {
        let p = NetworkParams {
            rho_max: f64::INFINITY,
            ..NetworkParams::default()
        };
        pep_constant(&p).map(|c| (c - 1.0).abs())
    });
}

fn montecarlo_checks(s: &mut Suite, seed: u64) {
    let mut p = NetworkParams::default();
    p.set_lambda_u(3e-5);
    let n = 4000;
    s.try_le("montecarlo", "p_suc_vs_analytic", 0.05, || {
        let sim = simulate_success(&p, n, seed).map_err(|e| e.to_string())?;
        let ana = success_probability(&p).map_err(|e| e.to_string())?.p_suc;
        Ok::<_, String>((sim.value - ana).abs())
    });
    s.with_detail(format!("{n} realizations, lambda_u = 3e-5, gamma_th = -5 dB"));
    s.try_le("montecarlo", "thread_count_determinism", 0.0, || {
        let a = with_threads(Some(1), || simulate_success(&p, 500, seed)).map_err(|e| e.to_string())?;
        let b = with_threads(Some(3), || simulate_success(&p, 500, seed)).map_err(|e| e.to_string())?;
        let cb = builtin_codebook(BuiltinCodebook::Sparse4);
        let c = with_threads(Some(1), || simulate_asep(&p, &cb, 100.0, 256, seed)).map_err(|e| e.to_string())?;
        let d = with_threads(Some(3), || simulate_asep(&p, &cb, 100.0, 256, seed)).map_err(|e| e.to_string())?;
        Ok::<_, String>(f64::from(u8::from(a != b || c != d)))
    });
    s.try_le("montecarlo", "asep_within_factor_2", 1.0, || {
        let cb = builtin_codebook(BuiltinCodebook::Sparse4);
        let snr = 1e3;
        let sim = simulate_asep(&p, &cb, snr, 20_000, seed).map_err(|e| e.to_string())?;
        let ana = asep(&distance_spectrum(&cb), &p, snr, AsepMethod::NearestNeighbor).map_err(|e| e.to_string())?;
        Ok::<_, String>((sim.value / ana).log2().abs())
    });
    s.with_detail("|log2(sim/analytic)| for sparse4 at 30 dB, 20000 trials");
}

/// Runs the suite with the built-in codebooks.
pub fn run_verify(seed: u64) -> Report {
    let cbs: Vec<(String, Codebook)> = BuiltinCodebook::ALL
        .into_iter()
        .map(|b| (b.name().to_owned(), builtin_codebook(b)))
        .collect();
    run_verify_with(seed, &cbs, &[])
}

/// Runs the suite with the given codebooks in place of the built-ins, plus
/// load errors to report as failed checks.
pub fn run_verify_with(seed: u64, codebooks: &[(String, Codebook)], load_errors: &[(String, String)]) -> Report {
    let mut s = Suite { checks: Vec::new() };
    specfun_checks(&mut s, seed);
    for (name, cb) in codebooks {
        let dmin = name.parse::<BuiltinCodebook>().ok().map(|b| match b {
            BuiltinCodebook::Sparse4 => 2.0,
            BuiltinCodebook::Dense4 => 2.5,
            BuiltinCodebook::Sparse8 => 2.0 - std::f64::consts::FRAC_1_SQRT_2,
            BuiltinCodebook::Dense8 => 1.6464,
        });
        codebook_checks(&mut s, name, cb, dmin);
    }
    for (name, err) in load_errors {
        s.le("scma", format!("load[{name}]"), 1.0, 0.0);
        s.with_detail(err.clone());
    }
    netmodel_checks(&mut s);
    analytic_checks(&mut s);
    montecarlo_checks(&mut s, seed);
    Report {
        seed,
        git_revision: crate::run::GIT_REV,
        passed: s.checks.iter().all(|c| c.passed),
        checks: s.checks,
    }
}
