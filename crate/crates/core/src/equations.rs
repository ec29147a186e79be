//! Tiny grammar for linear forms in homogeneous coordinates.
//!
//! `xk` denotes coordinate `k` and a bare constant denotes the `x0` term, so
//! a dehomogenized line like `x2+x4+1` means `x2 + x4 + x0`. Accepted layout:
//! one form per line, or a braced, comma-separated block; a leading
//! polynomial-ring header line (`Q[x1,...,x5]`) is skipped; `# ...` comments
//! and a trailing `= 0` are tolerated.

use num::Zero;

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::rational::{parse_rational, Rational};

/// Parses a block of linear forms. Returns the coefficient matrix (one row
/// per form) and the inferred ambient coordinate count (max index + 1).
pub fn parse_linear_forms(text: &str) -> Result<(RationalMatrix, usize)> {
    let mut forms: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut max_index = 0usize;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let line = line.trim();
        if line.is_empty() || line.starts_with("Q[") || line.starts_with("_") {
            continue;
        }
        // a braced block may hold several comma-separated forms
        let cleaned = line.replace(['{', '}'], " ");
        for chunk in cleaned.split(',') {
            let mut form = chunk.trim();
            if form.is_empty() {
                continue;
            }
            if let Some(stripped) = form.strip_suffix("=0") {
                form = stripped.trim_end();
            } else if let Some(stripped) = form.strip_suffix("= 0") {
                form = stripped.trim_end();
            }
            if form.is_empty() {
                continue;
            }
            let parsed = parse_form(form, lineno + 1)?;
            for (idx, _) in &parsed {
                max_index = max_index.max(*idx);
            }
            forms.push(parsed);
        }
    }
    if forms.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no linear forms found".into(),
        });
    }
    let ambient = max_index + 1;
    let mut rows = Vec::with_capacity(forms.len());
    for form in forms {
        let mut row = vec![Rational::zero(); ambient];
        for (idx, coeff) in form {
            row[idx] += coeff;
        }
        rows.push(row);
    }
    Ok((RationalMatrix::from_rows(rows)?, ambient))
}

fn parse_form(form: &str, line: usize) -> Result<Vec<(usize, Rational)>> {
    let bad = |msg: String| Error::Parse { line, msg };
    let compact: String = form.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut rest = compact.as_str();
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    while !rest.is_empty() {
        let end = rest
            .char_indices()
            .find(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let term = &rest[..end];
        if term.is_empty() {
            return Err(bad(format!("empty term in `{form}`")));
        }
        terms.push(parse_term(term, sign, line)?);
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
        rest = &rest[end + 1..];
    }
    Ok(terms)
}

fn parse_term(term: &str, sign: i64, line: usize) -> Result<(usize, Rational)> {
    let bad = |msg: String| Error::Parse { line, msg };
    let signed = |x: Rational| if sign < 0 { -x } else { x };
    match term.find('x') {
        None => {
            // bare constant: coefficient of x0
            let c = parse_rational(term).map_err(|_| bad(format!("malformed constant `{term}`")))?;
            Ok((0, signed(c)))
        }
        Some(pos) => {
            let coeff_str = term[..pos].trim_end_matches('*');
            let coeff = if coeff_str.is_empty() {
                Rational::from_integer(1.into())
            } else {
                parse_rational(coeff_str)
                    .map_err(|_| bad(format!("malformed coefficient `{coeff_str}`")))?
            };
            let idx: usize = term[pos + 1..]
                .parse()
                .map_err(|_| bad(format!("malformed variable `{term}`")))?;
            Ok((idx, signed(coeff)))
        }
    }
}
