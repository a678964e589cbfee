use super::dd::{Dd, DdComplex};
use super::gamma::{gamma, rgamma};
use super::sum::Series;
use super::{domain, finite, finite_c, is_nonpositive_integer, ComplexValue, Result, SpecfunError, TERM_BUDGET};

type C = ComplexValue;

fn check_real(function: &'static str, name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(domain(function, format!("{name} = {x} is not finite")))
    }
}

fn check_complex(function: &'static str, z: C) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(domain(function, format!("z = {z} is not finite")))
    }
}

/// Exact sum of a terminating series with `n + 1` terms.
fn terminating(n: usize, mut next: impl FnMut(usize, C) -> C) -> C {
    let mut s = super::sum::CompensatedSum::default();
    let mut term = C::new(1.0, 0.0);
    s.add(term);
    for k in 0..n {
        term = next(k, term);
        s.add(term);
    }
    s.value()
}

/// Generic `pFq` series driven by a term-ratio closure.
fn series(function: &'static str, mut ratio: impl FnMut(usize) -> C) -> Result<C> {
    let mut s = Series::new();
    let mut term = C::new(1.0, 0.0);
    s.push(term);
    for k in 0..TERM_BUDGET {
        term *= ratio(k);
        if s.push(term) {
            return finite_c(function, s.value());
        }
    }
    Err(SpecfunError::NonConvergence {
        function,
        terms: TERM_BUDGET,
    })
}

fn m_series(a: f64, b: f64, z: C) -> Result<C> {
    series("hyp1f1", |k| {
        let k = k as f64;
        z * ((a + k) / ((b + k) * (k + 1.0)))
    })
}

/// ₁F₁ series with parameters `a_hi + a_lo` and `b` carried in double-double,
/// for complex arguments where the terms cancel heavily. Also returns the
/// relative rounding error implied by the largest term.
fn m_series_dd(a: Dd, b: f64, z: C) -> Result<(C, f64)> {
    let mut term = DdComplex::one();
    let mut sum = term;
    let mut peak: f64 = 1.0;
    let mut quiet = 0;
    for k in 0..TERM_BUDGET {
        let kf = k as f64;
        let num = a.add(Dd::new(kf));
        let den = Dd::sum(b, kf).mul_f(kf + 1.0);
        term = term.mul_c(z.re, z.im).scale(num.div(den));
        sum = sum.add(term);
        let mag = term.norm_f64();
        peak = peak.max(mag);
        if mag <= 1e-33 * sum.norm_f64() {
            quiet += 1;
            if quiet >= 3 {
                let v = finite_c("hyp1f1", C::new(sum.re.to_f64(), sum.im.to_f64()))?;
                return Ok((v, f64::EPSILON.max(DD_EPSILON * peak / v.norm())));
            }
        } else {
            quiet = 0;
        }
    }
    Err(SpecfunError::NonConvergence {
        function: "hyp1f1",
        terms: TERM_BUDGET,
    })
}

/// Unit roundoff of double-double arithmetic.
const DD_EPSILON: f64 = 1e-31;

fn m_terminating(n: usize, a: f64, b: f64, z: C) -> C {
    terminating(n, |k, t| {
        let k = k as f64;
        t * z * ((a + k) / ((b + k) * (k + 1.0)))
    })
}

/// Large-|z| expansion of ₁F₁ built from both exponentially weighted parts,
/// with an estimate of its relative truncation error.
fn m_asymptotic(a: f64, b: f64, z: C) -> Option<(C, f64)> {
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let phase = C::from_polar(1.0, sign * std::f64::consts::PI * a);
    let (first_sum, e1) = asymptotic_sum(a, a - b + 1.0, -z)?;
    let (second_sum, e2) = asymptotic_sum(b - a, 1.0 - a, z)?;
    let g = gamma(b).ok()?;
    let first = phase * z.powf(-a) * rgamma(b - a) * first_sum * g;
    let second = z.exp() * z.powf(a - b) * rgamma(a) * second_sum * g;
    let v = first + second;
    let err = (first.norm() * e1 + second.norm() * e2) / v.norm();
    (v.re.is_finite() && v.im.is_finite() && err.is_finite()).then_some((v, err.max(f64::EPSILON)))
}

/// `Σ (p)_s (q)_s / s! · w^{-s}` summed until the terms drop below
/// `1e-16` of the sum, or cut at the smallest term once they start to grow.
/// Returns the sum and the size of the last term kept relative to it.
fn asymptotic_sum(p: f64, q: f64, w: C) -> Option<(C, f64)> {
    let mut s = super::sum::CompensatedSum::default();
    let mut term = C::new(1.0, 0.0);
    s.add(term);
    let inv = w.inv();
    let mut prev = 1.0;
    for k in 0..TERM_BUDGET {
        let kf = k as f64;
        term *= inv * ((p + kf) * (q + kf) / (kf + 1.0));
        let mag = term.norm();
        if mag == 0.0 {
            return Some((s.value(), 0.0));
        }
        if mag > prev {
            let sum = s.value();
            return (k > 0).then(|| (sum, prev / sum.norm()));
        }
        s.add(term);
        if mag <= 1e-16 * s.value().norm() {
            return Some((s.value(), 0.0));
        }
        prev = mag;
    }
    None
}

/// Truncation error below which the large-|z| expansion is taken outright.
const ASYMPTOTIC_ACCEPT: f64 = 1e-15;

/// Confluent hypergeometric function ₁F₁(a; b; z).
///
/// Terminating polynomials are summed exactly; otherwise the Kummer
/// transformation `₁F₁(a;b;z) = e^z ₁F₁(b−a;b;−z)` is applied for `Re z < 0`.
/// Off the real axis the terms cancel like `e^{|z|}`, so for `|z| > 8` the
/// series runs in double-double. Beyond `|z| > 45` a converged large-|z|
/// expansion is taken directly; otherwise whichever of the two has the
/// smaller error estimate wins.
pub fn hyp1f1(a: f64, b: f64, z: C) -> Result<C> {
    const F: &str = "hyp1f1";
    check_real(F, "a", a)?;
    check_real(F, "b", b)?;
    check_complex(F, z)?;
    if is_nonpositive_integer(b) {
        return Err(domain(F, format!("b = {b} is a non-positive integer")));
    }
    if z == C::new(0.0, 0.0) || a == 0.0 {
        return Ok(C::new(1.0, 0.0));
    }
    if is_nonpositive_integer(a) && -a <= 1.0e4 {
        return finite_c(F, m_terminating((-a) as usize, a, b, z));
    }
    let c = b - a;
    if z.re < 0.0 && is_nonpositive_integer(c) && -c <= 1.0e4 {
        return finite_c(F, z.exp() * m_terminating((-c) as usize, c, b, -z));
    }
    let off_axis = z.im.abs() > 1e-12 * z.norm();
    let threshold = if off_axis { 45.0 } else { 60.0 } + 2.0 * (a.abs() + b.abs());
    let asymptotic = if z.norm() > 20.0 { m_asymptotic(a, b, z) } else { None };
    if let Some((v, err)) = asymptotic {
        if z.norm() > threshold && err <= ASYMPTOTIC_ACCEPT {
            return Ok(v);
        }
    }
    if off_axis && z.norm() > 8.0 {
        let (v, err) = if z.re < 0.0 {
            let (inner, err) = m_series_dd(Dd::sum(b, -a), b, -z)?;
            (finite_c(F, z.exp() * inner)?, err)
        } else {
            m_series_dd(Dd::new(a), b, z)?
        };
        return Ok(match asymptotic {
            Some((va, ea)) if ea < err => va,
            _ => v,
        });
    }
    if z.re < 0.0 {
        let inner = m_series(c, b, -z)?;
        finite_c(F, z.exp() * inner)
    } else {
        m_series(a, b, z)
    }
}

fn f_series(a: f64, b: f64, c: f64, z: C) -> Result<C> {
    series("hyp2f1", |k| {
        let k = k as f64;
        z * ((a + k) * (b + k) / ((c + k) * (k + 1.0)))
    })
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Route {
    Direct,
    Pfaff,
    InverseOneMinus,
    Inverse,
    OneMinus,
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z).
///
/// Outside `|z| ≤ 0.5` the evaluation maps `z` to whichever of
/// `z/(z−1)`, `1/(1−z)`, `1/z` or `1−z` has the smallest modulus among the
/// transformations whose gamma prefactors are regular for the given
/// parameters; the Pfaff map is always available.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: C) -> Result<C> {
    const F: &str = "hyp2f1";
    check_real(F, "a", a)?;
    check_real(F, "b", b)?;
    check_real(F, "c", c)?;
    check_complex(F, z)?;
    if is_nonpositive_integer(c) {
        return Err(domain(F, format!("c = {c} is a non-positive integer")));
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(SpecfunError::Branch { function: F, z: z.re });
    }
    if z == C::new(0.0, 0.0) || a == 0.0 || b == 0.0 {
        return Ok(C::new(1.0, 0.0));
    }
    for (p, q) in [(a, b), (b, a)] {
        if is_nonpositive_integer(p) && -p <= 1.0e4 {
            let v = terminating((-p) as usize, |k, t| {
                let k = k as f64;
                t * z * ((p + k) * (q + k) / ((c + k) * (k + 1.0)))
            });
            return finite_c(F, v);
        }
    }
    let one = C::new(1.0, 0.0);
    let mut candidates = vec![(Route::Direct, z.norm()), (Route::Pfaff, (z / (z - one)).norm())];
    if !is_integer(a - b) {
        candidates.push((Route::InverseOneMinus, (one - z).inv().norm()));
        if !(z.im == 0.0 && z.re > 0.0) {
            candidates.push((Route::Inverse, z.inv().norm()));
        }
    }
    if !is_integer(c - a - b) {
        candidates.push((Route::OneMinus, (one - z).norm()));
    }
    let route = if z.norm() <= 0.5 {
        Route::Direct
    } else {
        candidates
            .iter()
            .copied()
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .map(|(r, _)| r)
            .unwrap_or(Route::Pfaff)
    };
    let v = eval_route(route, a, b, c, z)?;
    finite_c(F, v)
}

fn eval_route(route: Route, a: f64, b: f64, c: f64, z: C) -> Result<C> {
    let one = C::new(1.0, 0.0);
    Ok(match route {
        Route::Direct => f_series(a, b, c, z)?,
        Route::Pfaff => (one - z).powf(-b) * f_series(c - a, b, c, z / (z - one))?,
        Route::InverseOneMinus => {
            let w = (one - z).inv();
            let g = gamma(c)?;
            let k1 = g * gamma(b - a)? * rgamma(b) * rgamma(c - a);
            let k2 = g * gamma(a - b)? * rgamma(a) * rgamma(c - b);
            let t1 = if k1 == 0.0 {
                C::new(0.0, 0.0)
            } else {
                (one - z).powf(-a) * k1 * f_series(a, c - b, a - b + 1.0, w)?
            };
            let t2 = if k2 == 0.0 {
                C::new(0.0, 0.0)
            } else {
                (one - z).powf(-b) * k2 * f_series(b, c - a, b - a + 1.0, w)?
            };
            t1 + t2
        }
        Route::Inverse => {
            let w = z.inv();
            let g = gamma(c)?;
            let k1 = g * gamma(b - a)? * rgamma(b) * rgamma(c - a);
            let k2 = g * gamma(a - b)? * rgamma(a) * rgamma(c - b);
            let t1 = if k1 == 0.0 {
                C::new(0.0, 0.0)
            } else {
                (-z).powf(-a) * k1 * f_series(a, a - c + 1.0, a - b + 1.0, w)?
            };
            let t2 = if k2 == 0.0 {
                C::new(0.0, 0.0)
            } else {
                (-z).powf(-b) * k2 * f_series(b, b - c + 1.0, b - a + 1.0, w)?
            };
            t1 + t2
        }
        Route::OneMinus => {
            let w = one - z;
            let g = gamma(c)?;
            let k1 = g * gamma(c - a - b)? * rgamma(c - a) * rgamma(c - b);
            let k2 = g * gamma(a + b - c)? * rgamma(a) * rgamma(b);
            let t1 = if k1 == 0.0 {
                C::new(0.0, 0.0)
            } else {
                k1 * f_series(a, b, a + b - c + 1.0, w)?
            };
            let t2 = if k2 == 0.0 {
                C::new(0.0, 0.0)
            } else {
                w.powf(c - a - b) * k2 * f_series(c - a, c - b, c - a - b + 1.0, w)?
            };
            t1 + t2
        }
    })
}

/// Generalized hypergeometric ₁F₂(a; b1, b2; z) by direct series.
pub fn hyp1f2(a: f64, b1: f64, b2: f64, z: f64) -> Result<f64> {
    const F: &str = "hyp1f2";
    check_real(F, "a", a)?;
    check_real(F, "b1", b1)?;
    check_real(F, "b2", b2)?;
    check_real(F, "z", z)?;
    if is_nonpositive_integer(b1) || is_nonpositive_integer(b2) {
        return Err(domain(
            F,
            format!("b1 = {b1}, b2 = {b2} must not be non-positive integers"),
        ));
    }
    if z == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    let v = series(F, |k| {
        let k = k as f64;
        C::new(z * (a + k) / ((b1 + k) * (b2 + k) * (k + 1.0)), 0.0)
    })?;
    finite(F, v.re)
}
