//! Plain-text codebook files: a header `M K d_s`, then one codeword per line
//! as `K` whitespace-separated `re+imj` entries. `#` starts a comment.

use super::{Codebook, ScmaError};
use num_complex::Complex64;
use std::path::Path;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> ScmaError {
    ScmaError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (i, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, i)),
            (true, Some((c, s))) => {
                out.push((c, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, s)) = start {
        out.push((c, &line[s..]));
    }
    out
}

fn parse_real(s: &str) -> Option<f64> {
    // Rust accepts "inf" and "nan"; neither is a valid entry.
    if !s.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses `re+imj` or `re-imj`.
pub(crate) fn parse_complex(tok: &str) -> Option<Complex64> {
    let body = tok.strip_suffix('j')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re = parse_real(&body[..split])?;
    let im_str = &body[split..];
    if im_str.len() < 2 {
        return None;
    }
    let im = parse_real(im_str)?;
    Some(Complex64::new(re, im))
}

fn format_complex(v: Complex64) -> String {
    let sign = if v.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", v.re, sign, v.im.abs())
}

fn parse_count(line: usize, column: usize, tok: &str, what: &str) -> Result<usize, ScmaError> {
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, column, format!("expected integer {what}, found `{tok}`")))
}

/// Parses codebook text and checks every invariant.
pub fn parse_codebook(text: &str) -> Result<Codebook, ScmaError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        match header {
            None => {
                if toks.len() != 3 {
                    return Err(parse_err(line_no, toks[0].0, "header must be `M K d_s`"));
                }
                let m = parse_count(line_no, toks[0].0, toks[0].1, "M")?;
                let k = parse_count(line_no, toks[1].0, toks[1].1, "K")?;
                let d = parse_count(line_no, toks[2].0, toks[2].1, "d_s")?;
                if k == 0 || d == 0 || d > k {
                    return Err(parse_err(line_no, toks[1].0, "header needs 1 <= d_s <= K"));
                }
                if m > 1 << 16 || k > 1 << 10 {
                    return Err(parse_err(line_no, toks[0].0, "codebook dimensions too large"));
                }
                header = Some((m, k, d));
            }
            Some((m, k, _)) => {
                if rows.len() == m {
                    return Err(parse_err(
                        line_no,
                        toks[0].0,
                        format!("more than M = {m} codeword rows"),
                    ));
                }
                if toks.len() != k {
                    let col = toks.get(k).map_or(content.chars().count() + 1, |t| t.0);
                    return Err(parse_err(
                        line_no,
                        col,
                        format!("row has {} entries, expected K = {k}", toks.len()),
                    ));
                }
                let row = toks
                    .iter()
                    .map(|&(col, t)| {
                        parse_complex(t).ok_or_else(|| {
                            parse_err(line_no, col, format!("invalid complex entry `{t}`, expected re+imj"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                rows.push(row);
            }
        }
    }
    let Some((m, _, d)) = header else {
        return Err(parse_err(last_line.max(1), 1, "missing header `M K d_s`"));
    };
    if rows.len() != m {
        return Err(parse_err(
            last_line + 1,
            1,
            format!("expected M = {m} codeword rows, found {}", rows.len()),
        ));
    }
    Codebook::with_degree(rows, d)
}

pub(crate) fn to_text(cb: &Codebook) -> String {
    let mut s = format!("{} {} {}\n", cb.m(), cb.k(), cb.d_s());
    for c in cb.codewords() {
        let row: Vec<String> = c.iter().map(|&v| format_complex(v)).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Serializes a codebook; the output parses back to an identical codebook.
pub fn write_codebook(cb: &Codebook) -> String {
    to_text(cb)
}

pub fn load_codebook(path: impl AsRef<Path>) -> Result<Codebook, ScmaError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ScmaError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_codebook(&text)
}

pub fn save_codebook(cb: &Codebook, path: impl AsRef<Path>) -> Result<(), ScmaError> {
    let path = path.as_ref();
    std::fs::write(path, to_text(cb)).map_err(|e| ScmaError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
