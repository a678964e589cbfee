//! Deterministic stand-in codebooks.
//!
//! Each built-in places an `M`-PSK alphabet `q_m = e^{j(π/M + 2πm/M)}` on every
//! support position, relabelled by a fixed permutation per position and scaled
//! by `1/√d_s`: entry `s` of codeword `m` is `q_{π_s(m)}/√d_s`. For `M = 4` the
//! alphabet is 4-QAM rotated by π/4. Sparse codebooks occupy resource blocks
//! `{0, 1}` (the first indicator column); dense ones occupy all four.
//!
//! | kind    | M | d_s | permutations                                          | ‖Δ_min‖² |
//! |---------|---|-----|-------------------------------------------------------|----------|
//! | sparse4 | 4 | 2   | id, id                                                | 2        |
//! | dense4  | 4 | 4   | id, id, (0 1 3 2), (0 2 1 3)                          | 2.5      |
//! | sparse8 | 8 | 2   | id, (6 3 5 1 7 4 2 0)                                 | 1.2929   |
//! | dense8  | 8 | 4   | id, (3 2 4 0 6 1 7 5), (5 2 0 4 1 7 6 3), (2 5 1 7 6 3 0 4) | 1.6464 |
//!
//! The permutations were chosen so that every codeword has at least one
//! neighbor at the minimum distance.

use super::Codebook;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinCodebook {
    Sparse4,
    Dense4,
    Sparse8,
    Dense8,
}

impl BuiltinCodebook {
    pub const ALL: [BuiltinCodebook; 4] = [Self::Sparse4, Self::Dense4, Self::Sparse8, Self::Dense8];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sparse4 => "sparse4",
            Self::Dense4 => "dense4",
            Self::Sparse8 => "sparse8",
            Self::Dense8 => "dense8",
        }
    }

    fn layout(self) -> (usize, &'static [usize], &'static [&'static [usize]]) {
        const ID4: &[usize] = &[0, 1, 2, 3];
        const ID8: &[usize] = &[0, 1, 2, 3, 4, 5, 6, 7];
        match self {
            Self::Sparse4 => (4, &[0, 1], &[ID4, ID4]),
            Self::Dense4 => (4, &[0, 1, 2, 3], &[ID4, ID4, &[0, 1, 3, 2], &[0, 2, 1, 3]]),
            Self::Sparse8 => (8, &[0, 1], &[ID8, &[6, 3, 5, 1, 7, 4, 2, 0]]),
            Self::Dense8 => (
                8,
                &[0, 1, 2, 3],
                &[
                    ID8,
                    &[3, 2, 4, 0, 6, 1, 7, 5],
                    &[5, 2, 0, 4, 1, 7, 6, 3],
                    &[2, 5, 1, 7, 6, 3, 0, 4],
                ],
            ),
        }
    }
}

impl fmt::Display for BuiltinCodebook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinCodebook {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown builtin codebook `{s}` (expected sparse4, dense4, sparse8 or dense8)"))
    }
}

const K: usize = 4;

pub fn builtin_codebook(kind: BuiltinCodebook) -> Codebook {
    let (m, support, perms) = kind.layout();
    let scale = 1.0 / (support.len() as f64).sqrt();
    let alphabet: Vec<Complex64> = (0..m)
        .map(|i| Complex64::from_polar(scale, PI / m as f64 + 2.0 * PI * i as f64 / m as f64))
        .collect();
    let codewords = (0..m)
        .map(|cw| {
            let mut row = vec![Complex64::default(); K];
            for (pos, perm) in support.iter().zip(perms) {
                row[*pos] = alphabet[perm[cw]];
            }
            row
        })
        .collect();
    Codebook::with_degree(codewords, support.len()).expect("built-in codebooks satisfy every invariant")
}
