//! Text format for monomial ideals.
//!
//! ```text
//! # comment
//! ring 3
//! gen 2 0 1
//! mon x1^2*x3
//! ```
//!
//! `ring <n>` must be the first directive. `gen` lines give one exponent
//! per variable; `mon` lines give a product of `x<k>` or `x<k>^<d>`
//! factors joined by `*` with 1-based variable indices. Formatting mirrors
//! parsing and emits the canonical form, so parse(format(I)) == I.

use std::fmt::Write as _;

use thiserror::Error;

use super::{minimalize, ExponentVector, MonomialIdeal};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

/// Parse the ideal file format. Returns the canonical (minimalized) ideal.
pub fn parse_ideal(input: &str) -> Result<MonomialIdeal, ParseError> {
    let mut num_vars: Option<usize> = None;
    let mut gens: Vec<ExponentVector> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut words = tokens(line);
        let (kw_col, keyword) = words.next().expect("non-blank line has a first token");
        match keyword {
            "ring" => {
                if num_vars.is_some() {
                    return Err(ParseError::new(line_no, kw_col, "duplicate ring declaration"));
                }
                let (col, word) = words
                    .next()
                    .ok_or_else(|| ParseError::new(line_no, kw_col, "ring needs a variable count"))?;
                let n: usize = word.parse().map_err(|_| {
                    ParseError::new(line_no, col, format!("invalid variable count `{word}`"))
                })?;
                if n == 0 {
                    return Err(ParseError::new(line_no, col, "ring needs at least one variable"));
                }
                if let Some((col, extra)) = words.next() {
                    return Err(ParseError::new(line_no, col, format!("unexpected token `{extra}`")));
                }
                num_vars = Some(n);
            }
            "gen" => {
                let n = num_vars
                    .ok_or_else(|| ParseError::new(line_no, kw_col, "ring declaration must come first"))?;
                let mut exps = Vec::with_capacity(n);
                for (col, word) in words {
                    let e: u32 = word.parse().map_err(|_| {
                        ParseError::new(line_no, col, format!("invalid exponent `{word}`"))
                    })?;
                    exps.push(e);
                }
                if exps.len() != n {
                    return Err(ParseError::new(
                        line_no,
                        kw_col,
                        format!("gen has {} exponents, ring has {} variables", exps.len(), n),
                    ));
                }
                gens.push(ExponentVector::new(exps));
            }
            "mon" => {
                let n = num_vars
                    .ok_or_else(|| ParseError::new(line_no, kw_col, "ring declaration must come first"))?;
                let (col, expr) = words
                    .next()
                    .ok_or_else(|| ParseError::new(line_no, kw_col, "mon needs a monomial expression"))?;
                if let Some((col, extra)) = words.next() {
                    return Err(ParseError::new(line_no, col, format!("unexpected token `{extra}`")));
                }
                gens.push(parse_monomial_expr(expr, n, line_no, col)?);
            }
            other => {
                return Err(ParseError::new(line_no, kw_col, format!("unknown directive `{other}`")));
            }
        }
    }

    let n = num_vars.ok_or_else(|| ParseError::new(1, 1, "missing ring declaration"))?;
    Ok(MonomialIdeal { num_vars: n, gens: minimalize(gens) })
}

/// Tokens of a line with their 1-based starting columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |word| {
        let col = word.as_ptr() as usize - line.as_ptr() as usize + 1;
        (col, word)
    })
}

/// Parse `x1^2*x3` style expressions; repeated variables accumulate.
fn parse_monomial_expr(
    expr: &str,
    num_vars: usize,
    line: usize,
    start_col: usize,
) -> Result<ExponentVector, ParseError> {
    let mut exps = vec![0u32; num_vars];
    let mut offset = 0;
    for factor in expr.split('*') {
        let col = start_col + offset;
        offset += factor.len() + 1;
        let rest = factor
            .strip_prefix('x')
            .ok_or_else(|| ParseError::new(line, col, format!("expected x<k>, found `{factor}`")))?;
        let (var_digits, exp_digits) = match rest.find('^') {
            Some(pos) => (&rest[..pos], Some(&rest[pos + 1..])),
            None => (rest, None),
        };
        let var: usize = var_digits.parse().map_err(|_| {
            ParseError::new(line, col, format!("invalid variable index in `{factor}`"))
        })?;
        if var == 0 || var > num_vars {
            return Err(ParseError::new(
                line,
                col,
                format!("variable index {var} out of range 1..={num_vars}"),
            ));
        }
        let exp: u32 = match exp_digits {
            Some(d) => d.parse().map_err(|_| {
                ParseError::new(line, col, format!("invalid exponent in `{factor}`"))
            })?,
            None => 1,
        };
        exps[var - 1] += exp;
    }
    Ok(ExponentVector::new(exps))
}

/// Canonical text form: `ring n` followed by one `gen` line per minimal
/// generator in canonical order.
pub fn format_ideal(ideal: &MonomialIdeal) -> String {
    let mut out = String::new();
    writeln!(out, "ring {}", ideal.num_vars()).unwrap();
    for g in ideal.generators() {
        out.push_str("gen");
        for v in 0..g.len() {
            write!(out, " {}", g.exponent(v)).unwrap();
        }
        out.push('\n');
    }
    out
}
