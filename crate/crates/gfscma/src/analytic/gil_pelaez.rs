use super::quad::{adaptive, wynn_epsilon};
use super::AnalyticError;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;

type Evaluator = dyn Fn(f64) -> Result<Complex64, AnalyticError> + Send + Sync;

/// Characteristic function `ω ↦ E[e^{jωX}]` of a real random variable.
///
/// `scale` is the natural frequency unit of the function (for the network
/// functions, `1/ρ`); quadrature panels are laid out in multiples of it.
pub struct CharacteristicFunction {
    evaluator: Box<Evaluator>,
    description: String,
    scale: f64,
}

impl CharacteristicFunction {
    pub fn new<F>(description: impl Into<String>, scale: f64, f: F) -> Self
    where
        F: Fn(f64) -> Result<Complex64, AnalyticError> + Send + Sync + 'static,
    {
        Self {
            evaluator: Box::new(f),
            description: description.into(),
            scale,
        }
    }

    pub fn eval(&self, omega: f64) -> Result<Complex64, AnalyticError> {
        (self.evaluator)(omega)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl fmt::Debug for CharacteristicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharacteristicFunction")
            .field("description", &self.description)
            .field("scale", &self.scale)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfResult {
    /// Unclamped `P(X ≤ x)`.
    pub value: f64,
    pub integrand_evals: usize,
    /// Frequency at which the integral was truncated (or the oscillatory tail began).
    pub truncation_omega: f64,
}

/// Per-panel absolute tolerance in scaled frequency units.
pub const PANEL_TOL: f64 = 1e-10;
/// Envelope `|cf(ω)|/ω` (scaled) below which the tail is dropped.
pub const ENVELOPE: f64 = 1e-12;
/// First dyadic panel is `[0, 2^-FIRST_EXP]` in scaled units.
const FIRST_EXP: i32 = 12;
/// Last admissible panel exponent.
const LAST_EXP: i32 = 80;
/// Scaled frequency beyond which a non-decaying envelope switches to the oscillatory tail.
const OSC_START: f64 = 64.0;
const OSC_MAX_TERMS: usize = 400;

/// `P(X ≤ x) = 1/2 − (1/π)∫₀^∞ Im{e^{−jωx}cf(ω)}/ω dω`.
///
/// The integral runs over dyadic panels of `cf.scale()`, each integrated by
/// adaptive Gauss–Kronrod. Panel nodes are interior, so the removable
/// singularity at `ω = 0` is never evaluated. The integral is truncated once
/// `|cf(ω)|/ω` (in scaled units) is below `1e-12` at `ω`, `10ω` and `100ω`.
/// A characteristic function that stops decaying (an atom), or a panel that
/// oscillates too often for the interval budget, is finished by integrating
/// half-periods of the residual oscillation and extrapolating with Wynn's
/// ε-algorithm.
pub fn gil_pelaez_cdf(cf: &CharacteristicFunction, x: f64) -> Result<CdfResult, AnalyticError> {
    let s = cf.scale();
    if !(s > 0.0) || !s.is_finite() || !x.is_finite() {
        return Err(AnalyticError::Domain(format!(
            "scale {s} and x {x} must be finite, scale > 0"
        )));
    }
    let xs = x * s;
    let mut evals = 0usize;
    // g(t) = e^{−jtxs}·cf(st).
    let g = |t: f64| -> Result<Complex64, AnalyticError> { Ok(Complex64::from_polar(1.0, -t * xs) * cf.eval(s * t)?) };
    let mut h = |t: f64| -> Result<f64, AnalyticError> { Ok(g(t)?.im / t) };
    let small = |t: f64| -> Result<bool, AnalyticError> { Ok(cf.eval(s * t)?.norm() / t < ENVELOPE) };

    let first = 2f64.powi(-FIRST_EXP);
    let r = adaptive(&mut h, 0.0, first, PANEL_TOL)?;
    evals += r.evals;
    let mut total = r.value;
    for k in -FIRST_EXP..LAST_EXP {
        let a = 2f64.powi(k);
        let b = 2f64.powi(k + 1);
        let r = match adaptive(&mut h, a, b, PANEL_TOL) {
            Ok(r) => r,
            // Too many oscillations per panel for the interval budget.
            Err(AnalyticError::Tolerance { .. }) if a >= OSC_START => {
                let (tail, n) = oscillatory_tail(&g, &mut h, a)?;
                return Ok(CdfResult {
                    value: 0.5 - (total + tail) / PI,
                    integrand_evals: evals + n,
                    truncation_omega: s * a,
                });
            }
            Err(e) => return Err(e),
        };
        evals += r.evals;
        total += r.value;
        if b < 1.0 {
            continue;
        }
        evals += 3;
        if small(b)? && small(10.0 * b)? && small(100.0 * b)? {
            return Ok(CdfResult {
                value: 0.5 - total / PI,
                integrand_evals: evals,
                truncation_omega: s * b,
            });
        }
        if b >= OSC_START {
            let near = cf.eval(s * b)?.norm();
            let far = cf.eval(s * 100.0 * b)?.norm();
            evals += 2;
            if far > 0.1 * near {
                let (tail, n) = oscillatory_tail(&g, &mut h, b)?;
                return Ok(CdfResult {
                    value: 0.5 - (total + tail) / PI,
                    integrand_evals: evals + n,
                    truncation_omega: s * b,
                });
            }
        }
    }
    Err(AnalyticError::Truncation {
        omega: s * 2f64.powi(LAST_EXP),
    })
}

fn oscillatory_tail<G, H>(g: &G, h: &mut H, t0: f64) -> Result<(f64, usize), AnalyticError>
where
    G: Fn(f64) -> Result<Complex64, AnalyticError>,
    H: FnMut(f64) -> Result<f64, AnalyticError>,
{
    let fail = || AnalyticError::Truncation { omega: t0 };
    let phase_rate = |step: f64| -> Result<f64, AnalyticError> {
        let a = g(t0)?;
        let b = g(t0 + step)?;
        Ok((b * a.conj()).arg() / step)
    };
    let nu = phase_rate(1e-4)?;
    let nu2 = phase_rate(5e-5)?;
    let mut evals = 4;
    if (nu - nu2).abs() > 1e-6 * nu.abs().max(1.0) {
        return Err(fail());
    }
    if nu.abs() < 1e-9 {
        // A non-oscillating, non-decaying tail has a convergent integral only if it is real.
        return if g(t0)?.im.abs() < 1e-14 {
            Ok((0.0, evals))
        } else {
            Err(fail())
        };
    }
    let half = PI / nu.abs();
    let mut sums = Vec::new();
    let mut acc = 0.0;
    let mut last: Option<f64> = None;
    for i in 0..OSC_MAX_TERMS {
        let a = t0 + i as f64 * half;
        let r = adaptive(h, a, a + half, 1e-13)?;
        evals += r.evals;
        acc += r.value;
        sums.push(acc);
        if sums.len() >= 8 {
            if let Some((_, est)) = wynn_epsilon(&sums[sums.len().saturating_sub(24)..]) {
                if let Some(prev) = last {
                    if (est - prev).abs() < 1e-12 {
                        return Ok((est, evals));
                    }
                }
                last = Some(est);
            }
        }
    }
    Err(fail())
}
