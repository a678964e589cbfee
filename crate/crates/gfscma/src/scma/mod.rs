//! SCMA codebooks, factor-graph combinatorics and distance spectra.
//!
//! A [`Codebook`] holds the `M` codewords of one layer: length-`K` complex
//! vectors that are nonzero only on the layer's `d_s` resource blocks and
//! carry unit power. The error-rate analysis consumes only the
//! [`DistanceSpectrum`] of a codebook, so any loaded codebook is usable.

mod builtin;
mod format;

pub use builtin::{builtin_codebook, BuiltinCodebook};
pub use format::{load_codebook, parse_codebook, save_codebook, write_codebook};

use num_complex::Complex64;
use std::fmt;

/// Unit-power tolerance enforced on every codeword.
pub const POWER_TOLERANCE: f64 = 1e-9;
/// Relative tolerance used to decide whether a pair sits at the minimum distance.
pub const NEIGHBOR_TOLERANCE: f64 = 1e-9;
/// Entries with modulus at or below this are treated as structural zeros.
const ZERO_ENTRY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScmaError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("K = {k} does not divide L*T = {lt}")]
    Divisibility { k: usize, lt: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("codebook check `{check}` failed: {detail}")]
    Invariant { check: &'static str, detail: String },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

/// `K×L` binary matrix whose columns are the resource-block supports of the layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorMatrix {
    k: usize,
    d_s: usize,
    columns: Vec<Vec<usize>>,
}

impl IndicatorMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of layers (columns).
    pub fn l(&self) -> usize {
        self.columns.len()
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    /// Sorted row indices of the ones in column `layer`.
    pub fn support(&self, layer: usize) -> &[usize] {
        &self.columns[layer]
    }

    pub fn entry(&self, row: usize, layer: usize) -> bool {
        self.columns[layer].binary_search(&row).is_ok()
    }

    /// Dense row-major 0/1 matrix.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.k)
            .map(|r| (0..self.l()).map(|c| u8::from(self.entry(r, c))).collect())
            .collect()
    }
}

/// All `C(K, d_s)` supports of weight `d_s`, in lexicographic order.
pub fn build_indicator(k: usize, d_s: usize) -> Result<IndicatorMatrix, ScmaError> {
    if d_s <= 1 || d_s > k || k > 16 {
        return Err(ScmaError::Domain(format!(
            "indicator needs 1 < d_s <= K <= 16, got K = {k}, d_s = {d_s}"
        )));
    }
    let mut columns = Vec::new();
    let mut cur: Vec<usize> = (0..d_s).collect();
    loop {
        columns.push(cur.clone());
        // Advance to the next combination.
        let mut i = d_s;
        loop {
            if i == 0 {
                return Ok(IndicatorMatrix { k, d_s, columns });
            }
            i -= 1;
            if cur[i] < k - d_s + i {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..d_s {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Number of distinguishable codebooks `J = L·T/K`.
pub fn codebook_count(l: usize, t: usize, k: usize) -> Result<usize, ScmaError> {
    let lt = l * t;
    if k == 0 || lt % k != 0 {
        return Err(ScmaError::Divisibility { k, lt });
    }
    Ok(lt / k)
}

/// Codewords of one layer. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    codewords: Vec<Vec<Complex64>>,
    d_s: usize,
    support: Vec<usize>,
}

impl Codebook {
    /// Validates the codewords and infers the support from their nonzero positions.
    pub fn new(codewords: Vec<Vec<Complex64>>) -> Result<Self, ScmaError> {
        let cb = Self::from_raw_unchecked(codewords);
        cb.validate()?;
        Ok(cb)
    }

    /// Like [`Codebook::new`] but also requires the support size to equal `d_s`.
    pub fn with_degree(codewords: Vec<Vec<Complex64>>, d_s: usize) -> Result<Self, ScmaError> {
        let cb = Self::new(codewords)?;
        if cb.d_s != d_s {
            return Err(ScmaError::Invariant {
                check: "support_size",
                detail: format!("declared d_s = {d_s} but codewords occupy {} positions", cb.d_s),
            });
        }
        Ok(cb)
    }

    /// Builds a codebook without running any check; used to exercise the
    /// verification report on deliberately broken input.
    #[doc(hidden)]
    pub fn from_raw_unchecked(codewords: Vec<Vec<Complex64>>) -> Self {
        let k = codewords.first().map_or(0, Vec::len);
        let support: Vec<usize> = (0..k)
            .filter(|&i| {
                codewords
                    .iter()
                    .any(|c| c.get(i).is_some_and(|v| v.norm() > ZERO_ENTRY))
            })
            .collect();
        Self {
            d_s: support.len(),
            codewords,
            support,
        }
    }

    fn validate(&self) -> Result<(), ScmaError> {
        let m = self.codewords.len();
        if m < 2 {
            return Err(ScmaError::Invariant {
                check: "cardinality",
                detail: format!("need M >= 2 codewords, got {m}"),
            });
        }
        let k = self.k();
        if k == 0 {
            return Err(ScmaError::Invariant {
                check: "length",
                detail: "codewords are empty".into(),
            });
        }
        for (i, c) in self.codewords.iter().enumerate() {
            if c.len() != k {
                return Err(ScmaError::Invariant {
                    check: "length",
                    detail: format!("codeword {i} has {} entries, expected {k}", c.len()),
                });
            }
            if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(ScmaError::Invariant {
                    check: "finite",
                    detail: format!("codeword {i} has a non-finite entry"),
                });
            }
        }
        let dev = self.max_power_deviation();
        if dev > POWER_TOLERANCE {
            let (i, p) = self
                .codewords
                .iter()
                .map(|c| power(c))
                .enumerate()
                .max_by(|a, b| (a.1 - 1.0).abs().total_cmp(&(b.1 - 1.0).abs()))
                .unwrap_or((0, 0.0));
            return Err(ScmaError::Invariant {
                check: "unit_power",
                detail: format!("codeword {i} has power {p}"),
            });
        }
        for i in 0..m {
            for j in i + 1..m {
                if sq_distance(&self.codewords[i], &self.codewords[j]) <= ZERO_ENTRY {
                    return Err(ScmaError::Invariant {
                        check: "distinct",
                        detail: format!("codewords {i} and {j} coincide"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Largest `|Σ_s |c_s|² − 1|` over the codewords.
    pub fn max_power_deviation(&self) -> f64 {
        self.codewords
            .iter()
            .map(|c| (power(c) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn m(&self) -> usize {
        self.codewords.len()
    }

    pub fn k(&self) -> usize {
        self.codewords.first().map_or(0, Vec::len)
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn codeword(&self, i: usize) -> &[Complex64] {
        &self.codewords[i]
    }

    pub fn codewords(&self) -> &[Vec<Complex64>] {
        &self.codewords
    }

    /// Multiplies every entry by `e^{jθ}`; distances are unchanged.
    pub fn rotated(&self, theta: f64) -> Self {
        let r = Complex64::from_polar(1.0, theta);
        Self {
            codewords: self
                .codewords
                .iter()
                .map(|c| c.iter().map(|v| v * r).collect())
                .collect(),
            d_s: self.d_s,
            support: self.support.clone(),
        }
    }
}

impl fmt::Display for Codebook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::to_text(self))
    }
}

fn power(c: &[Complex64]) -> f64 {
    c.iter().map(|v| v.norm_sqr()).sum()
}

fn sq_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

/// Pairwise squared distances of a codebook and its nearest-neighbor structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSpectrum {
    pub delta_min_sq: f64,
    /// `𝒩_c`: number of codewords at the minimum distance from codeword `c`.
    pub neighbor_count: Vec<usize>,
    pub pair_distances: Vec<Vec<f64>>,
}

impl DistanceSpectrum {
    pub fn m(&self) -> usize {
        self.neighbor_count.len()
    }

    /// `(1/M) Σ_c 𝒩_c`.
    pub fn mean_neighbors(&self) -> f64 {
        self.neighbor_count.iter().sum::<usize>() as f64 / self.m() as f64
    }

    /// Squared distances of all ordered pairs `(c, c')`, `c ≠ c'`.
    pub fn ordered_pairs(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.m();
        (0..m).flat_map(move |i| (0..m).filter(move |&j| j != i).map(move |j| self.pair_distances[i][j]))
    }
}

/// Exhaustive pairwise distances. The minimum is taken over all distinct
/// pairs, and `𝒩_c` counts partners within [`NEIGHBOR_TOLERANCE`] of it.
pub fn distance_spectrum(cb: &Codebook) -> DistanceSpectrum {
    let m = cb.m();
    let mut d = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let v = sq_distance(cb.codeword(i), cb.codeword(j));
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    let min = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .map(|(i, j)| d[i][j])
        .fold(f64::INFINITY, f64::min);
    let neighbor_count = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && (d[i][j] - min).abs() <= NEIGHBOR_TOLERANCE * min)
                .count()
        })
        .collect();
    DistanceSpectrum {
        delta_min_sq: min,
        neighbor_count,
        pair_distances: d,
    }
}
