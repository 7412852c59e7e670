//! Plain-text matrix format.
//!
//! First non-comment line is `m n`, followed by `m` lines of `n`
//! whitespace-separated reals. `#` starts a comment. Writers emit 17
//! significant digits so `f64` values round-trip exactly.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Formats like C's `%.{digits}g`.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
    .trim()
}

/// Parses a matrix from `(line_number, line)` pairs; used by the bundle
/// readers that embed matrices between other content.
pub(crate) fn parse_matrix_lines<'a, T: Scalar>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<Matrix<T>> {
    let mut header = None;
    for (no, raw) in lines.by_ref() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse_dim = |tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| Error::Parse {
                line: no,
                msg: "expected header \"m n\"".into(),
            })?
            .parse()
            .map_err(|_| Error::Parse {
                line: no,
                msg: format!("bad dimension in header {line:?}"),
            })
        };
        let m = parse_dim(it.next())?;
        let n = parse_dim(it.next())?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: no,
                msg: "header has more than two fields".into(),
            });
        }
        header = Some((m, n));
        break;
    }
    let (m, n) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing \"m n\" header".into(),
    })?;
    let mut data = Vec::with_capacity(m * n);
    let mut seen = 0;
    while seen < m {
        let (no, raw) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: format!("expected {m} rows, found {seen}"),
        })?;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let x: f64 = tok.parse().map_err(|_| Error::Parse {
                line: no,
                msg: format!("not a number: {tok:?}"),
            })?;
            if !x.is_finite() {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("non-finite entry {tok:?}"),
                });
            }
            data.push(T::c(x));
        }
        if data.len() - before != n {
            return Err(Error::Parse {
                line: no,
                msg: format!("expected {n} entries, found {}", data.len() - before),
            });
        }
        seen += 1;
    }
    Matrix::from_vec(m, n, data)
}

pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let m = parse_matrix_lines(&mut lines)?;
    for (no, raw) in lines {
        if !strip_comment(raw).is_empty() {
            return Err(Error::Parse {
                line: no,
                msg: "trailing content after matrix".into(),
            });
        }
    }
    Ok(m)
}

pub fn write_matrix<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format_sig(x.as_f64(), 17)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
