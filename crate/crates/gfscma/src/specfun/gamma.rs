use super::{domain, finite, is_nonpositive_integer, Result, SpecfunError};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn lanczos_ln_gamma(x: f64) -> f64 {
    let t = x + LANCZOS_G;
    let head = (x + 0.5) * t.ln() - t;
    let mut ser = LANCZOS_C0;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    head + (SQRT_2PI * ser / x).ln()
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("ln_gamma", format!("x = {x} must be positive and finite")));
    }
    finite("ln_gamma", lanczos_ln_gamma(x))
}

/// `sin(πx)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r < 0.5 {
        (PI * r).sin()
    } else if r < 1.5 {
        -(PI * (r - 1.0)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

/// `Γ(x)` for real `x` away from the poles `0, -1, -2, ...`.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("gamma", format!("x = {x} is not finite")));
    }
    if is_nonpositive_integer(x) {
        return Err(domain("gamma", format!("x = {x} is a pole")));
    }
    let v = if x > 0.0 {
        lanczos_ln_gamma(x).exp()
    } else {
        PI / (sin_pi(x) * lanczos_ln_gamma(1.0 - x).exp())
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecfunError::NotFinite { function: "gamma" })
    }
}

/// `1/Γ(x)`, equal to zero at the poles of `Γ`.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 0.0 {
        (-lanczos_ln_gamma(x)).exp()
    } else {
        sin_pi(x) * lanczos_ln_gamma(1.0 - x).exp() / PI
    }
}

/// Pochhammer symbol `(a)_q = a(a+1)…(a+q-1)`, with `(a)_0 = 1`.
pub fn pochhammer(a: f64, q: u32) -> f64 {
    (0..q).fold(1.0, |acc, k| acc * (a + f64::from(k)))
}

const INCOMPLETE_BUDGET: usize = 2000;

/// Lower incomplete gamma `γ(s, x) = ∫₀ˣ t^{s-1} e^{-t} dt`.
pub fn lower_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() || !(x >= 0.0) || !x.is_finite() {
        return Err(domain(
            "lower_incomplete_gamma",
            format!("requires s > 0 and x >= 0, got s = {s}, x = {x}"),
        ));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let log_prefactor = -x + s * x.ln();
    if x < s + 1.0 {
        let mut ap = s;
        let mut del = 1.0 / s;
        let mut sum = del;
        for _ in 0..INCOMPLETE_BUDGET {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-16 {
                return finite("lower_incomplete_gamma", sum * log_prefactor.exp());
            }
        }
        Err(SpecfunError::NonConvergence {
            function: "lower_incomplete_gamma",
            terms: INCOMPLETE_BUDGET,
        })
    } else {
        // Modified Lentz evaluation of the continued fraction for Γ(s, x).
        let tiny = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=INCOMPLETE_BUDGET {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                let upper = h * log_prefactor.exp();
                let full = lanczos_ln_gamma(s).exp();
                return finite("lower_incomplete_gamma", full - upper);
            }
        }
        Err(SpecfunError::NonConvergence {
            function: "lower_incomplete_gamma",
            terms: INCOMPLETE_BUDGET,
        })
    }
}
