//! Text formats for field descriptors, codes and arrays.
//!
//! ```text
//! # a code of type [2][1][1] over F_2
//! code q=2
//! type 2 1 1
//! gen 1 0 1 1
//! gen 0 1 1 0
//! ```
//!
//! ```text
//! moa q=2
//! cols 2 1
//! row 0 0
//! row 3 1
//! ```
//!
//! Array symbols use the polynomial-basis encoding `Σ c_j q^j` of each
//! column field under its default modulus. Blocks or columns given out of
//! order are sorted by nonincreasing size and the permutation is recorded.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::error_block::{BlockCode, Partition};
use crate::field::{BaseField, ExtField, PrimePower};
use crate::moa::MixedArray;

/// `GF(p^r)`, `GF(p^r, m)` or `GF(p^r, m; c_0 ... c_m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub base: PrimePower,
    pub degree: Option<usize>,
    pub modulus: Option<Vec<u32>>,
}

impl FieldDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        let err = |column: usize, message: &str| Error::Parse {
            line: 1,
            column,
            message: message.to_string(),
        };
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        let inner = trimmed
            .strip_prefix("GF(")
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| err(lead + 1, "expected GF(...)"))?;
        let offset = lead + 4;
        let (head, modulus_text) = match inner.split_once(';') {
            Some((h, m)) => (h, Some((m, offset + h.len() + 1))),
            None => (inner, None),
        };
        let (base_text, degree_text) = match head.split_once(',') {
            Some((b, d)) => (b, Some((d, offset + b.len() + 1))),
            None => (head, None),
        };
        let (p, r) = match base_text.trim().split_once('^') {
            Some((p, r)) => (p.trim(), r.trim()),
            None => (base_text.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| err(offset, "bad characteristic"))?;
        let r: u32 = r.parse().map_err(|_| err(offset, "bad exponent"))?;
        let base = PrimePower::new(p, r)?;
        let degree = degree_text
            .map(|(d, col)| {
                d.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| err(col + 1, "bad extension degree"))
            })
            .transpose()?;
        let modulus = match modulus_text {
            None => None,
            Some(_) if degree.is_none() => return Err(err(offset, "modulus given without a degree")),
            Some((m, col)) => Some(
                m.split_whitespace()
                    .map(|c| c.parse::<u32>().map_err(|_| err(col + 1, "bad modulus coefficient")))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(Self { base, degree, modulus })
    }

    pub fn base_field(&self) -> Result<BaseField> {
        BaseField::new(self.base)
    }

    /// The extension, or the base viewed as a degree-1 extension.
    pub fn ext_field(&self) -> Result<ExtField> {
        ExtField::new(Arc::new(self.base_field()?), self.degree.unwrap_or(1), self.modulus.clone())
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn err(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn numbers<T: std::str::FromStr>(&self) -> Result<Vec<(T, usize)>> {
        self.tokens[1..]
            .iter()
            .map(|t| {
                t.text
                    .parse::<T>()
                    .map(|v| (v, t.column))
                    .map_err(|_| self.err(t.column, format!("expected a nonnegative integer, got {:?}", t.text)))
            })
            .collect()
    }

    fn end_column(&self) -> usize {
        self.tokens.last().map_or(1, |t| t.column + t.text.len())
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (j, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(j),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &body[s..j],
                            column: s + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect()
}

fn parse_header(line: &Line, keyword: &str) -> Result<BaseField> {
    if line.tokens[0].text != keyword || line.tokens.len() != 2 {
        return Err(line.err(1, format!("expected `{keyword} q=<q>`")));
    }
    let tok = &line.tokens[1];
    let q: u64 = tok
        .text
        .strip_prefix("q=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| line.err(tok.column, "expected q=<prime power>"))?;
    BaseField::from_order(q).map_err(|e| line.err(tok.column, e.to_string()))
}

fn parse_sizes(line: &Line, keyword: &str) -> Result<Vec<usize>> {
    if line.tokens[0].text != keyword {
        return Err(line.err(1, format!("expected `{keyword}` line")));
    }
    let sizes = line.numbers::<usize>()?;
    if sizes.is_empty() {
        return Err(line.err(line.end_column(), "expected at least one size"));
    }
    if let Some(&(_, col)) = sizes.iter().find(|(v, _)| *v == 0) {
        return Err(line.err(col, "sizes must be positive"));
    }
    Ok(sizes.into_iter().map(|(v, _)| v).collect())
}

/// A parsed code file. `permutation[i]` is the input block placed at
/// position `i`, when blocks had to be sorted.
#[derive(Debug, Clone)]
pub struct ParsedCode {
    pub code: BlockCode,
    pub permutation: Option<Vec<usize>>,
    pub gen_rows: usize,
}

pub fn parse_code(text: &str) -> Result<ParsedCode> {
    let lines = lines(text);
    let Some(first) = lines.first() else {
        return Err(Error::EmptyFile);
    };
    let field = Arc::new(parse_header(first, "code")?);
    let type_line = lines
        .get(1)
        .ok_or_else(|| Error::Parse {
            line: first.number + 1,
            column: 1,
            message: "missing `type` line".into(),
        })?;
    let sizes = parse_sizes(type_line, "type")?;
    let n: usize = sizes.iter().sum();
    let q = field.q();

    let perm = Partition::sorting_permutation(&sizes);
    let identity = perm.iter().enumerate().all(|(i, &p)| i == p);
    let mut offsets = vec![0];
    for &m in &sizes {
        offsets.push(offsets.last().unwrap() + m);
    }
    let column_order: Vec<usize> = perm.iter().flat_map(|&b| offsets[b]..offsets[b + 1]).collect();

    let mut rows = Vec::new();
    for line in &lines[2..] {
        if line.tokens[0].text != "gen" {
            return Err(line.err(1, "expected `gen` line"));
        }
        let values = line.numbers::<u64>()?;
        if values.len() != n {
            return Err(line.err(
                line.end_column(),
                format!("expected {n} symbols, got {}", values.len()),
            ));
        }
        if let Some((i, &(v, _))) = values.iter().enumerate().find(|(_, (v, _))| *v >= q) {
            return Err(Error::AlphabetViolation {
                value: v,
                size: q,
                position: Some(i),
                line: Some(line.number),
            });
        }
        rows.push(column_order.iter().map(|&c| values[c].0 as u32).collect::<Vec<u32>>());
    }
    let mut sorted = sizes.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let gen_rows = rows.len();
    let code = BlockCode::new(Partition::new(sorted)?, field, &rows)?;
    Ok(ParsedCode {
        code,
        permutation: (!identity).then_some(perm),
        gen_rows,
    })
}

pub fn parse_moa(text: &str) -> Result<MixedArray> {
    let lines = lines(text);
    let Some(first) = lines.first() else {
        return Err(Error::EmptyFile);
    };
    let base = Arc::new(parse_header(first, "moa")?);
    let cols_line = lines
        .get(1)
        .ok_or_else(|| Error::Parse {
            line: first.number + 1,
            column: 1,
            message: "missing `cols` line".into(),
        })?;
    let degrees = parse_sizes(cols_line, "cols")?;
    let fields = degrees
        .iter()
        .map(|&m| ExtField::new(base.clone(), m, None))
        .collect::<Result<Vec<_>>>()?;
    let s = fields.len();

    let mut rows = Vec::new();
    for line in &lines[2..] {
        if line.tokens[0].text != "row" {
            return Err(line.err(1, "expected `row` line"));
        }
        let values = line.numbers::<u64>()?;
        if values.len() != s {
            return Err(line.err(
                line.end_column(),
                format!("expected {s} symbols, got {}", values.len()),
            ));
        }
        for (i, (&(v, _), f)) in values.iter().zip(&fields).enumerate() {
            if v >= f.order() as u64 {
                return Err(Error::AlphabetViolation {
                    value: v,
                    size: f.order() as u64,
                    position: Some(i),
                    line: Some(line.number),
                });
            }
        }
        rows.push(values.into_iter().map(|(v, _)| v as u32).collect());
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: cols_line.number + 1,
            column: 1,
            message: "array has no rows".into(),
        });
    }
    MixedArray::new_sorted(fields, rows)
}

fn push_comments(out: &mut String, comments: &[String]) {
    for c in comments {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
}

fn join(values: &[u32]) -> String {
    values.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// Writes `code` in the code file format, generator rows in reduced
/// echelon form.
pub fn write_code(code: &BlockCode, comments: &[String]) -> String {
    let mut out = String::new();
    push_comments(&mut out, comments);
    let sizes: Vec<String> = code.partition().block_sizes().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "code q={}", code.field().q());
    let _ = writeln!(out, "type {}", sizes.join(" "));
    for row in code.generator().row_vecs() {
        let _ = writeln!(out, "gen {}", join(&row));
    }
    out
}

/// Writes `arr` in the array file format. Symbols are re-encoded in the
/// polynomial basis, so any field basis round-trips.
pub fn write_moa(arr: &MixedArray, comments: &[String]) -> String {
    let mut out = String::new();
    push_comments(&mut out, comments);
    let degrees: Vec<String> = arr.degrees().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "moa q={}", arr.q());
    let _ = writeln!(out, "cols {}", degrees.join(" "));
    for row in arr.rows() {
        let _ = writeln!(out, "row {}", join(row));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_descriptors() {
        let d = FieldDescriptor::parse("GF(2^2)").unwrap();
        assert_eq!((d.base.p(), d.base.r(), d.degree), (2, 2, None));
        let d = FieldDescriptor::parse(" GF(3, 2) ").unwrap();
        assert_eq!((d.base.q(), d.degree), (3, Some(2)));
        let d = FieldDescriptor::parse("GF(2^1, 3; 1 0 1 1)").unwrap();
        assert_eq!(d.modulus, Some(vec![1, 0, 1, 1]));
        assert_eq!(d.ext_field().unwrap().order(), 8);
        assert!(matches!(FieldDescriptor::parse("F(2)"), Err(Error::Parse { .. })));
        assert!(matches!(FieldDescriptor::parse("GF(6)"), Err(Error::NotPrime(6))));
        assert!(matches!(
            FieldDescriptor::parse("GF(2, 2; 1 0 1)").unwrap().ext_field(),
            Err(Error::NotIrreducible(_))
        ));
        assert!(matches!(FieldDescriptor::parse("GF(2; 1 1)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn code_round_trip_and_sorting() {
        let text = "# comment\ncode q=2\ntype 1 2\ngen 1 0 1  # trailing\ngen 0 1 1\n";
        let parsed = parse_code(text).unwrap();
        assert_eq!(parsed.permutation, Some(vec![1, 0]));
        assert_eq!(parsed.code.partition().block_sizes(), &[2, 1]);
        assert!(parsed.code.contains(&[0, 1, 1]));
        assert!(parsed.code.contains(&[1, 1, 0]));
        let again = parse_code(&write_code(&parsed.code, &["x".into()])).unwrap();
        assert!(again.code.same_code(&parsed.code));
        assert_eq!(again.permutation, None);
    }

    #[test]
    fn moa_parse_errors() {
        assert_eq!(parse_moa("# nothing\n\n").unwrap_err(), Error::EmptyFile);
        let bad = "moa q=2\ncols 2 1\nrow 0 0\nrow 4 1\n";
        assert_eq!(
            parse_moa(bad).unwrap_err(),
            Error::AlphabetViolation {
                value: 4,
                size: 4,
                position: Some(0),
                line: Some(4),
            }
        );
        match parse_moa("moa q=2\ncols 2 1\nrow 0 x\n").unwrap_err() {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (3, 7)),
            e => panic!("{e:?}"),
        }
        assert!(matches!(parse_moa("moa q=6\ncols 1\nrow 0\n"), Err(Error::Parse { line: 1, column: 5, .. })));
        assert!(matches!(parse_moa("moa q=2\ncols 1 1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_moa("moa q=2\ncols 1 1\nrow 0\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn moa_sorting_and_round_trip() {
        let arr = parse_moa("moa q=2\ncols 1 2\nrow 1 3\nrow 0 2\n").unwrap();
        assert_eq!(arr.degrees(), vec![2, 1]);
        assert_eq!(arr.permutation(), Some(&[1, 0][..]));
        assert_eq!(arr.rows(), &[vec![3, 1], vec![2, 0]]);
        let back = parse_moa(&write_moa(&arr, &[])).unwrap();
        assert_eq!(back.rows(), arr.rows());
    }
}
