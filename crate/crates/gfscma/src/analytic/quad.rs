//! Adaptive Gauss–Kronrod quadrature and Wynn ε extrapolation.

use super::AnalyticError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// 7-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Largest number of subintervals a single panel may be split into.
pub const MAX_INTERVALS: usize = 1000;

/// Kronrod estimate and `|K − G|` on `[a, b]`; never evaluates at the endpoints.
fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), AnalyticError>
where
    F: FnMut(f64) -> Result<f64, AnalyticError>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx)? + f(c + dx)?;
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// Result of one adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

/// Globally adaptive bisection until the summed error estimate is below `tol`.
pub fn adaptive<F>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<Integral, AnalyticError>
where
    F: FnMut(f64) -> Result<f64, AnalyticError>,
{
    let mut evals = 15;
    let (v, e) = gk15(f, a, b)?;
    let mut parts = vec![(a, b, v, e)];
    loop {
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= tol {
            parts.sort_by(|x, y| x.0.total_cmp(&y.0));
            let value = parts.iter().map(|p| p.2).sum();
            return Ok(Integral {
                value,
                error: err,
                evals,
            });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(AnalyticError::Tolerance { a, b, error: err, tol });
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (pa, pb, _, _) = parts.swap_remove(i);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            return Err(AnalyticError::Tolerance { a, b, error: err, tol });
        }
        let (lv, le) = gk15(f, pa, mid)?;
        let (rv, re) = gk15(f, mid, pb)?;
        evals += 30;
        parts.push((pa, mid, lv, le));
        parts.push((mid, pb, rv, re));
    }
}

/// Wynn ε-algorithm over a sequence of partial sums; returns the last
/// two even-column estimates.
pub fn wynn_epsilon(sums: &[f64]) -> Option<(f64, f64)> {
    let n = sums.len();
    if n < 3 {
        return None;
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = sums.to_vec();
    let mut estimates = vec![sums[n - 1]];
    for col in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            if d == 0.0 {
                // Converged column: the sequence is already exact here.
                return Some((cur[i], cur[i]));
            }
            next.push(prev[i + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        if col % 2 == 0 && !cur.is_empty() {
            estimates.push(*cur.last().expect("non-empty"));
        }
        if cur.len() < 2 {
            break;
        }
    }
    let k = estimates.len();
    if k < 2 {
        return None;
    }
    Some((estimates[k - 2], estimates[k - 1]))
}
