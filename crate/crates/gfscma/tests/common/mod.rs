//! Extended-precision helpers shared by the oracle tests.
#![allow(dead_code)]

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

pub const P: usize = 768;
pub const RM: RoundingMode = RoundingMode::ToEven;

pub fn big(x: f64) -> BigFloat {
    BigFloat::from_f64(x, P)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (words, _, sign, exponent, _) = x.as_raw_parts().expect("finite value");
    let n = words.len();
    let hi = words[n - 1] as f64;
    let lo = if n >= 2 { words[n - 2] as f64 } else { 0.0 };
    let m = hi + lo / 18446744073709551616.0;
    let mut v = m / 18446744073709551616.0;
    let mut e = exponent;
    while e > 0 {
        let k = e.min(1000);
        v *= 2f64.powi(k);
        e -= k;
    }
    while e < 0 {
        let k = e.max(-1000);
        v *= 2f64.powi(k);
        e -= k;
    }
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

pub fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, P, RM)
}
pub fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, P, RM)
}
pub fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, P, RM)
}
pub fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, P, RM)
}

pub struct Ctx {
    pub cc: Consts,
}

impl Ctx {
    pub fn new() -> Self {
        Self {
            cc: Consts::new().expect("constants cache"),
        }
    }
    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(P, RM, &mut self.cc)
    }
    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(P, RM, &mut self.cc)
    }
    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(P, RM)
    }
}

/// Complex number with extended-precision parts.
#[derive(Clone, Debug)]
pub struct BigC {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigC {
    pub fn new(re: f64, im: f64) -> Self {
        Self {
            re: big(re),
            im: big(im),
        }
    }
    pub fn add(&self, o: &BigC) -> BigC {
        BigC {
            re: add(&self.re, &o.re),
            im: add(&self.im, &o.im),
        }
    }
    pub fn mul(&self, o: &BigC) -> BigC {
        BigC {
            re: sub(&mul(&self.re, &o.re), &mul(&self.im, &o.im)),
            im: add(&mul(&self.re, &o.im), &mul(&self.im, &o.re)),
        }
    }
    pub fn scale(&self, s: &BigFloat) -> BigC {
        BigC {
            re: mul(&self.re, s),
            im: mul(&self.im, s),
        }
    }
    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
    /// Cheap magnitude proxy used only for stopping rules.
    pub fn approx_norm(&self) -> f64 {
        self.to_c64().norm()
    }
}

/// Raw hypergeometric series `Σ ∏(a_i)_n / ∏(b_i)_n · z^n / n!` in extended
/// precision, summed until the terms fall below `1e-40` of the running sum.
/// Parameter shifts `a + n` are formed in extended precision: the raw series
/// cancels catastrophically for large negative `z`.
pub fn pfq(a: &[f64], b: &[f64], z: num_complex::Complex64, max_terms: usize) -> num_complex::Complex64 {
    let zb = BigC::new(z.re, z.im);
    let mut term = BigC::new(1.0, 0.0);
    let mut sum = term.clone();
    let mut small = 0;
    for n in 0..max_terms {
        let nf = n as f64;
        let mut num = big(1.0);
        for &ai in a {
            num = mul(&num, &add(&big(ai), &big(nf)));
        }
        let mut den = big(nf + 1.0);
        for &bi in b {
            den = mul(&den, &add(&big(bi), &big(nf)));
        }
        term = term.mul(&zb).scale(&div(&num, &den));
        sum = sum.add(&term);
        let t = term.approx_norm();
        let s = sum.approx_norm();
        if t <= 1e-40 * s || t == 0.0 {
            small += 1;
            if small > 3 {
                return sum.to_c64();
            }
        } else {
            small = 0;
        }
    }
    panic!("oracle series did not converge in {max_terms} terms");
}

/// `ln Γ(x) = ln Γ(x + n) − ln ∏_{k<n}(x + k)` with a Stirling tail at `x + n`.
pub fn ln_gamma_oracle(x: f64, ctx: &mut Ctx) -> f64 {
    let n = 500;
    let mut prod = big(1.0);
    for k in 0..n {
        prod = mul(&prod, &big(x + k as f64));
    }
    let y = big(x + n as f64);
    let two_pi = mul(&big(2.0), &ctx.pi());
    let mut s = sub(&mul(&sub(&y, &big(0.5)), &ctx.ln(&y)), &y);
    s = add(&s, &div(&ctx.ln(&two_pi), &big(2.0)));
    // Σ B_2k / (2k(2k−1) y^{2k−1}) for k = 1..7.
    let coeffs: [(f64, f64); 7] = [
        (1.0, 12.0),
        (-1.0, 360.0),
        (1.0, 1260.0),
        (-1.0, 1680.0),
        (1.0, 1188.0),
        (-691.0, 360360.0),
        (1.0, 156.0),
    ];
    let y2 = mul(&y, &y);
    let mut ypow = y.clone();
    for (num, den) in coeffs {
        s = add(&s, &div(&big(num), &mul(&big(den), &ypow)));
        ypow = mul(&ypow, &y2);
    }
    to_f64(&sub(&s, &ctx.ln(&prod)))
}

/// `γ(s, x) = x^s e^{−x} Σ x^n / (s(s+1)…(s+n))` in extended precision.
pub fn lower_gamma_oracle(s: f64, x: f64, ctx: &mut Ctx) -> f64 {
    let xb = big(x);
    let mut term = div(&big(1.0), &big(s));
    let mut sum = term.clone();
    for n in 1..5000 {
        term = div(&mul(&term, &xb), &big(s + n as f64));
        sum = add(&sum, &term);
        if to_f64(&term) < 1e-40 * to_f64(&sum) {
            break;
        }
    }
    let lnx = ctx.ln(&xb);
    let pre = ctx.exp(&sub(&mul(&big(s), &lnx), &xb));
    to_f64(&mul(&pre, &sum))
}
