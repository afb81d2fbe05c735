//! Text syntax: `3*x1^2*x2 - 4*x2 + 1`, one polynomial per line.

use num_bigint::BigInt;
use num_traits::One;

use super::multi::{MultiPoly, PolynomialSystem};
use super::uni::UniPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(src: &str, line: usize) -> Result<Lexed> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), col));
            }
            'x' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let idx = if start == i {
                    1
                } else {
                    let s: String = chars[start..i].iter().collect();
                    s.parse::<usize>()
                        .ok()
                        .filter(|&k| k >= 1)
                        .ok_or_else(|| perr(line, col, format!("bad variable index x{s}")))?
                };
                toks.push((Tok::Var(idx - 1), col));
            }
            _ => return Err(perr(line, col, format!("unexpected character '{c}'"))),
        }
    }
    Ok(Lexed {
        toks,
        end: chars.len() + 1,
    })
}

/// A parsed polynomial before the variable count is fixed.
struct RawPoly {
    terms: Vec<(Vec<(usize, u32)>, BigInt)>,
    max_var: Option<usize>,
}

impl RawPoly {
    fn into_poly(self, n: usize) -> MultiPoly {
        MultiPoly::from_terms(
            n,
            self.terms.into_iter().map(|(vars, c)| {
                let mut e = vec![0u32; n];
                for (v, k) in vars {
                    e[v] += k;
                }
                (e, c)
            }),
        )
    }
}

fn parse_raw(src: &str, line: usize) -> Result<RawPoly> {
    let lx = lex(src, line)?;
    let toks = &lx.toks;
    let col_at = |p: usize| toks.get(p).map(|t| t.1).unwrap_or(lx.end);
    if toks.is_empty() {
        return Err(perr(line, 1, "empty polynomial"));
    }
    let mut pos = 0;
    let mut terms = Vec::new();
    let mut max_var: Option<usize> = None;
    let mut first = true;
    loop {
        let mut sign = BigInt::one();
        match toks.get(pos).map(|t| &t.0) {
            Some(Tok::Plus) if !first => pos += 1,
            Some(Tok::Minus) => {
                sign = -sign;
                pos += 1;
            }
            Some(Tok::Plus) => pos += 1,
            _ if first => {}
            _ => return Err(perr(line, col_at(pos), "expected '+' or '-'")),
        }
        first = false;
        // term := factor ('*' factor)*
        let mut coef = sign;
        let mut vars = Vec::new();
        loop {
            match toks.get(pos).map(|t| &t.0) {
                Some(Tok::Int(v)) => {
                    coef *= v;
                    pos += 1;
                }
                Some(Tok::Var(v)) => {
                    let v = *v;
                    pos += 1;
                    let mut k = 1u32;
                    if let Some(Tok::Caret) = toks.get(pos).map(|t| &t.0) {
                        pos += 1;
                        match toks.get(pos).map(|t| &t.0) {
                            Some(Tok::Int(e)) => {
                                k = u32::try_from(e).map_err(|_| {
                                    perr(line, col_at(pos), "exponent too large")
                                })?;
                                pos += 1;
                            }
                            _ => return Err(perr(line, col_at(pos), "expected exponent")),
                        }
                    }
                    max_var = Some(max_var.map_or(v, |m| m.max(v)));
                    vars.push((v, k));
                }
                _ => return Err(perr(line, col_at(pos), "expected coefficient or variable")),
            }
            if let Some(Tok::Star) = toks.get(pos).map(|t| &t.0) {
                pos += 1;
            } else {
                break;
            }
        }
        terms.push((vars, coef));
        if pos >= toks.len() {
            break;
        }
    }
    Ok(RawPoly { terms, max_var })
}

/// Parses one polynomial. The variable count is the larger of `num_vars`
/// and the highest index used. A bare `x` means `x1`.
pub fn parse_poly(src: &str, num_vars: Option<usize>) -> Result<MultiPoly> {
    let raw = parse_raw(src, 1)?;
    let used = raw.max_var.map_or(0, |m| m + 1);
    if let Some(n) = num_vars {
        if used > n {
            return Err(perr(1, 1, format!("variable x{used} exceeds declared count {n}")));
        }
    }
    let n = num_vars.unwrap_or(used);
    Ok(raw.into_poly(n))
}

/// Parses a univariate polynomial in `x` (or `x1`).
pub fn parse_univariate(src: &str) -> Result<UniPoly> {
    let mut lines = src
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (lno, text) = lines.next().ok_or_else(|| perr(1, 1, "empty input"))?;
    if let Some((l2, _)) = lines.next() {
        return Err(perr(l2 + 1, 1, "expected a single polynomial"));
    }
    let raw = parse_raw(text, lno + 1)?;
    if raw.max_var.unwrap_or(0) > 0 {
        return Err(perr(lno + 1, 1, "expected a univariate polynomial in x"));
    }
    Ok(raw.into_poly(1).to_uni(0).expect("univariate"))
}

/// Parses a system file: an optional `vars n` line, then one polynomial per
/// line. Blank lines and lines starting with `#` are skipped.
pub fn parse_system(src: &str) -> Result<PolynomialSystem> {
    let mut declared: Option<usize> = None;
    let mut raws = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let lno = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("vars") {
            if declared.is_some() || !raws.is_empty() {
                return Err(perr(lno, 1, "'vars' must be the first line"));
            }
            let n = rest
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| perr(lno, 6, "expected a positive variable count"))?;
            declared = Some(n);
            continue;
        }
        raws.push((lno, parse_raw(line, lno)?));
    }
    if raws.is_empty() {
        return Err(perr(1, 1, "empty system"));
    }
    let used = raws
        .iter()
        .filter_map(|(_, r)| r.max_var)
        .max()
        .map_or(0, |m| m + 1);
    let n = match declared {
        Some(n) if used > n => {
            let lno = raws
                .iter()
                .find(|(_, r)| r.max_var.is_some_and(|m| m >= n))
                .map_or(1, |(l, _)| *l);
            return Err(perr(lno, 1, format!("variable index exceeds declared count {n}")));
        }
        Some(n) => n,
        None => used,
    };
    let polys: Vec<MultiPoly> = raws.into_iter().map(|(_, r)| r.into_poly(n)).collect();
    if polys.len() != n {
        return Err(Error::NonSquare {
            polys: polys.len(),
            vars: n,
        });
    }
    PolynomialSystem::new(polys)
}
