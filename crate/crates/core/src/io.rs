//! Text codecs for matrices and orthogonal arrays.
//!
//! Matrix files start with `HAD <n>`, `QHAD <n>`, `BMS <q>` or `QBMS <q>`,
//! followed by one line per row. Real entries are `+`/`-`, quaternary
//! entries are digits `0..3` meaning `i^e`. `BMS` files have order `q²` and
//! the block widths `(1, q−1, …)`.
//!
//! Array files start with `OA <N> <k> <q> <t> <lambda>`, then `N` lines of
//! `k` space-separated symbols in `1..=q`.
//!
//! Every line, including the last, ends with `\n`; no trailing whitespace.

use crate::construct::BmsMatrix;
use crate::error::{Error, Result};
use crate::matrix::{QuatMatrix, SignMatrix, UnitMatrix};
use crate::oa::{OrthogonalArray, SymbolArray};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFile {
    Had(SignMatrix),
    QHad(QuatMatrix),
    Bms(BmsMatrix<SignMatrix>),
    QBms(BmsMatrix<QuatMatrix>),
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Splits into lines, enforcing the trailing newline and no trailing
/// whitespace.
fn lines(text: &str) -> Result<Vec<&str>> {
    if text.is_empty() {
        return Err(perr(1, "empty file"));
    }
    let Some(body) = text.strip_suffix('\n') else {
        return Err(perr(text.lines().count(), "missing final newline"));
    };
    let out: Vec<&str> = body.split('\n').collect();
    for (i, l) in out.iter().enumerate() {
        if l.ends_with([' ', '\t', '\r']) {
            return Err(perr(i + 1, "trailing whitespace"));
        }
    }
    Ok(out)
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(perr(line, format!("bad {what} {tok:?}")));
    }
    tok.parse().map_err(|_| perr(line, format!("bad {what} {tok:?}")))
}

fn encode_rows<M: UnitMatrix>(m: &M, out: &mut String) {
    for r in 0..m.n_rows() {
        for c in 0..m.n_cols() {
            let e = m.exp(r, c);
            out.push(match M::KIND {
                crate::matrix::MatrixKind::Sign => {
                    if e == 0 {
                        '+'
                    } else {
                        '-'
                    }
                }
                crate::matrix::MatrixKind::Quat => char::from(b'0' + e),
            });
        }
        out.push('\n');
    }
}

fn decode_rows<M: UnitMatrix>(body: &[&str], n: usize, first_line: usize) -> Result<M> {
    if body.len() != n {
        return Err(perr(
            first_line + body.len().min(n),
            format!("expected {n} rows, found {}", body.len()),
        ));
    }
    let mut exps = vec![0u8; n * n];
    for (r, l) in body.iter().enumerate() {
        let line = first_line + r;
        if l.len() != n {
            return Err(perr(line, format!("expected {n} entries, found {}", l.len())));
        }
        for (c, ch) in l.bytes().enumerate() {
            exps[r * n + c] = match (M::KIND, ch) {
                (crate::matrix::MatrixKind::Sign, b'+') => 0,
                (crate::matrix::MatrixKind::Sign, b'-') => 2,
                (crate::matrix::MatrixKind::Quat, b'0'..=b'3') => ch - b'0',
                _ => {
                    return Err(perr(
                        line,
                        format!("invalid entry {:?} at column {}", ch as char, c + 1),
                    ))
                }
            };
        }
    }
    M::try_from_fn(n, n, |r, c| exps[r * n + c])
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self> {
        let ls = lines(text)?;
        let mut head = ls[0].split(' ');
        let tag = head.next().unwrap_or("");
        let size = parse_count(head.next(), 1, "size")?;
        if head.next().is_some() {
            return Err(perr(1, "unexpected token in header"));
        }
        let body = &ls[1..];
        match tag {
            "HAD" => Ok(Self::Had(decode_rows(body, size, 2)?)),
            "QHAD" => Ok(Self::QHad(decode_rows(body, size, 2)?)),
            "BMS" | "QBMS" => {
                if size == 0 {
                    return Err(perr(1, "q must be positive"));
                }
                let order = size
                    .checked_mul(size)
                    .ok_or_else(|| perr(1, "q too large"))?;
                if tag == "BMS" {
                    Ok(Self::Bms(BmsMatrix::new(size, decode_rows(body, order, 2)?)?))
                } else {
                    Ok(Self::QBms(BmsMatrix::new(size, decode_rows(body, order, 2)?)?))
                }
            }
            other => Err(perr(1, format!("unknown header {other:?}"))),
        }
    }

    pub fn encode(&self) -> String {
        let mut out = String::new();
        match self {
            Self::Had(m) => {
                out.push_str(&format!("HAD {}\n", m.n_rows()));
                encode_rows(m, &mut out);
            }
            Self::QHad(m) => {
                out.push_str(&format!("QHAD {}\n", m.n_rows()));
                encode_rows(m, &mut out);
            }
            Self::Bms(b) => {
                out.push_str(&format!("BMS {}\n", b.q()));
                encode_rows(b.matrix(), &mut out);
            }
            Self::QBms(b) => {
                out.push_str(&format!("QBMS {}\n", b.q()));
                encode_rows(b.matrix(), &mut out);
            }
        }
        out
    }

    pub fn header(&self) -> &'static str {
        match self {
            Self::Had(_) => "HAD",
            Self::QHad(_) => "QHAD",
            Self::Bms(_) => "BMS",
            Self::QBms(_) => "QBMS",
        }
    }
}

pub fn parse_oa(text: &str) -> Result<OrthogonalArray> {
    let ls = lines(text)?;
    let mut head = ls[0].split(' ');
    if head.next() != Some("OA") {
        return Err(perr(1, "expected header \"OA <N> <k> <q> <t> <lambda>\""));
    }
    let n = parse_count(head.next(), 1, "N")?;
    let k = parse_count(head.next(), 1, "k")?;
    let q = parse_count(head.next(), 1, "q")?;
    let t = parse_count(head.next(), 1, "t")?;
    let lambda = parse_count(head.next(), 1, "lambda")?;
    if head.next().is_some() {
        return Err(perr(1, "unexpected token in header"));
    }
    if q == 0 || q > u16::MAX as usize {
        return Err(perr(1, format!("unsupported q = {q}")));
    }
    let body = &ls[1..];
    if body.len() != n {
        return Err(perr(
            2 + body.len().min(n),
            format!("expected {n} rows, found {}", body.len()),
        ));
    }
    let mut data = Vec::with_capacity(n * k);
    for (r, l) in body.iter().enumerate() {
        let line = r + 2;
        let toks: Vec<&str> = l.split(' ').collect();
        if toks.len() != k {
            return Err(perr(line, format!("expected {k} symbols, found {}", toks.len())));
        }
        for tok in toks {
            let s = parse_count(Some(tok), line, "symbol")?;
            if s == 0 || s > q {
                return Err(perr(line, format!("symbol {s} outside 1..={q}")));
            }
            data.push(s as u16);
        }
    }
    let array = SymbolArray::new(n, k, q, data)?;
    OrthogonalArray::new(array, t, lambda).map_err(|e| perr(1, e.to_string()))
}

pub fn encode_oa(oa: &OrthogonalArray) -> String {
    let p = oa.params();
    let mut out = format!("OA {} {} {} {} {}\n", p.n, p.k, p.q, p.t, p.lambda);
    for row in oa.array().rows() {
        let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
