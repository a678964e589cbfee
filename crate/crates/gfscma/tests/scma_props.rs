use gfscma::scma::{
    build_indicator, builtin_codebook, distance_spectrum, load_codebook, parse_codebook, save_codebook, write_codebook,
    BuiltinCodebook, Codebook, ScmaError,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::collections::HashSet;

fn brute_force_spectrum(cw: &[Vec<Complex64>]) -> (f64, Vec<usize>, Vec<Vec<f64>>) {
    let m = cw.len();
    let mut d = vec![vec![0.0; m]; m];
    let mut min = f64::INFINITY;
    for i in 0..m {
        for j in 0..m {
            let mut acc = 0.0;
            for s in 0..cw[i].len() {
                let diff = cw[i][s] - cw[j][s];
                acc += diff.re * diff.re + diff.im * diff.im;
            }
            d[i][j] = acc;
            if i != j {
                min = min.min(acc);
            }
        }
    }
    let n = (0..m)
        .map(|i| (0..m).filter(|&j| j != i && d[i][j] <= min * (1.0 + 1e-9)).count())
        .collect();
    (min, n, d)
}

fn golden() -> (f64, Vec<usize>, Vec<Vec<f64>>) {
    let text = include_str!("golden/sparse4_spectrum.txt");
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let nums = |l: &str| {
        l.split_whitespace()
            .skip(1)
            .map(|t| t.parse::<f64>().unwrap())
            .collect::<Vec<_>>()
    };
    let dmin = nums(lines.next().unwrap())[0];
    let counts = nums(lines.next().unwrap()).into_iter().map(|v| v as usize).collect();
    lines.next();
    let rows = lines
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    (dmin, counts, rows)
}

#[test]
fn sparse4_spectrum_matches_golden_file() {
    let cb = builtin_codebook(BuiltinCodebook::Sparse4);
    let (gmin, gcount, gd) = golden();
    let (bmin, bcount, bd) = brute_force_spectrum(cb.codewords());
    let s = distance_spectrum(&cb);
    assert!((s.delta_min_sq - gmin).abs() < 1e-12 && (bmin - gmin).abs() < 1e-12);
    assert_eq!(s.neighbor_count, gcount);
    assert_eq!(bcount, gcount);
    for i in 0..4 {
        for j in 0..4 {
            assert!((s.pair_distances[i][j] - gd[i][j]).abs() < 1e-12);
            assert!((bd[i][j] - gd[i][j]).abs() < 1e-12);
        }
    }
}

#[test]
fn builtins_hold_invariants_and_agree_with_brute_force() {
    for kind in BuiltinCodebook::ALL {
        let cb = builtin_codebook(kind);
        for c in cb.codewords() {
            let nz = c.iter().filter(|v| v.norm() > 0.0).count();
            assert_eq!(nz, cb.d_s(), "{kind}");
            let p: f64 = c.iter().map(|v| v.norm_sqr()).sum();
            assert!((p - 1.0).abs() <= 1e-9, "{kind}");
        }
        let s = distance_spectrum(&cb);
        let (bmin, bcount, _) = brute_force_spectrum(cb.codewords());
        assert!((s.delta_min_sq - bmin).abs() < 1e-12);
        assert_eq!(s.neighbor_count, bcount);
        assert!(s.neighbor_count.iter().all(|&n| n >= 1), "{kind}");
    }
    let sparse = distance_spectrum(&builtin_codebook(BuiltinCodebook::Sparse4));
    let dense = distance_spectrum(&builtin_codebook(BuiltinCodebook::Dense4));
    assert!(dense.delta_min_sq > sparse.delta_min_sq);
    let s8 = builtin_codebook(BuiltinCodebook::Sparse8);
    assert_eq!(s8.m(), 8);
    let distinct: HashSet<String> = s8.codewords().iter().map(|c| format!("{c:?}")).collect();
    assert_eq!(distinct.len(), 8);
}

#[test]
fn save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for kind in BuiltinCodebook::ALL {
        let cb = builtin_codebook(kind);
        let path = dir.path().join(format!("{kind}.txt"));
        save_codebook(&cb, &path).unwrap();
        assert_eq!(load_codebook(&path).unwrap(), cb);
    }
    assert!(matches!(
        load_codebook(dir.path().join("missing.txt")),
        Err(ScmaError::Io { .. })
    ));
}

#[test]
fn load_rejects_low_power_and_jagged_files() {
    let low = format!("2 2 2\n{0}+0j {0}+0j\n-{1}+0j -{1}+0j\n", 0.5f64.sqrt(), 0.4f64.sqrt());
    match parse_codebook(&low) {
        Err(ScmaError::Invariant { check, .. }) => assert_eq!(check, "unit_power"),
        other => panic!("{other:?}"),
    }
    let jagged = "4 4 2\n1+0j 0+0j 0+0j 0+0j\n0+1j 0+0j 0+0j\n";
    assert!(matches!(parse_codebook(jagged), Err(ScmaError::Parse { line: 3, .. })));
    let comments = "# two points\n2 1 1 # header\n\n1+0j\n-1+0j # antipode\n";
    assert_eq!(parse_codebook(comments).unwrap().m(), 2);
    let undeclared_degree = "2 2 2\n1+0j 0+0j\n-1+0j 0+0j\n";
    assert!(matches!(
        parse_codebook(undeclared_degree),
        Err(ScmaError::Invariant {
            check: "support_size",
            ..
        })
    ));
}

fn random_codebook() -> impl Strategy<Value = Codebook> {
    (2usize..9, 1usize..5).prop_flat_map(|(m, k)| {
        prop::collection::vec(prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), k), m).prop_filter_map(
            "degenerate codebook",
            |rows| {
                let cw: Vec<Vec<Complex64>> = rows
                    .into_iter()
                    .map(|r| {
                        let v: Vec<Complex64> = r.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
                        let p = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                        v.into_iter().map(|x| x / p).collect()
                    })
                    .collect();
                Codebook::new(cw).ok()
            },
        )
    })
}

proptest! {
    #[test]
    fn spectrum_is_rotation_invariant(cb in random_codebook(), theta in -3.2f64..3.2) {
        let a = distance_spectrum(&cb);
        let b = distance_spectrum(&cb.rotated(theta));
        prop_assert!((a.delta_min_sq - b.delta_min_sq).abs() <= 1e-12);
        for i in 0..cb.m() {
            prop_assert_eq!(a.pair_distances[i][i], 0.0);
            for j in 0..cb.m() {
                prop_assert_eq!(a.pair_distances[i][j], a.pair_distances[j][i]);
            }
        }
    }

    #[test]
    fn text_round_trip_is_exact(cb in random_codebook()) {
        prop_assert_eq!(parse_codebook(&write_codebook(&cb)).unwrap(), cb);
    }

    #[test]
    fn indicator_columns_exhaust_supports(k in 2usize..11, d in 2usize..11) {
        prop_assume!(d <= k);
        let f = build_indicator(k, d).unwrap();
        let cols: HashSet<Vec<usize>> = (0..f.l()).map(|c| f.support(c).to_vec()).collect();
        let binom = (0..d).fold(1usize, |acc, i| acc * (k - i) / (i + 1));
        prop_assert_eq!(cols.len(), f.l());
        prop_assert_eq!(f.l(), binom);
        for c in 0..f.l() {
            prop_assert_eq!(f.support(c).len(), d);
            if c > 0 {
                prop_assert!(f.support(c - 1) < f.support(c));
            }
        }
    }
}

#[test]
fn format_doc_example_is_the_sparse4_builtin() {
    let doc = include_str!("../../../docs/codebook-format.md");
    let block = doc.split("```").nth(3).unwrap();
    let cb = parse_codebook(block).unwrap();
    assert_eq!(cb, builtin_codebook(BuiltinCodebook::Sparse4));
    assert_eq!(write_codebook(&cb).trim(), block.trim());
}
