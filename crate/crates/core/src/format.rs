//! Text formats for definitions and identity systems.
//!
//! Definition files are line oriented; `#` starts a comment. Header fields
//! `q`, `M`, `m`, `l`, `u`, `offset` may appear in any order, followed by a
//! `coefficients` section of `s k value` rows and an `initial` section of
//! whitespace-separated values. Values are integers or `p/q` fractions;
//! decimals are rejected.
//!
//! ```text
//! q 2
//! M 1
//! m 0
//! l 0
//! u 1
//! offset 0
//! coefficients
//! 0 0 1
//! 0 1 0
//! 1 0 1
//! 1 1 1
//! initial
//! 0 1
//! ```
//!
//! Identity files reuse the header (`q`, `M`, `m`) and the `initial`
//! section; each `identity start <n>` block lists `coeff level residue`
//! rows for one vanishing combination.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::definition::{DefinitionError, QRecursiveDefinition};
use crate::disentangle::RecurrenceIdentity;
use crate::linalg::{format_rational, parse_rational, Rational};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header field `{0}`")]
    MissingField(&'static str),
    #[error(transparent)]
    Definition(#[from] DefinitionError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    cursor: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items, cursor: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.cursor).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.peek();
        if item.is_some() {
            self.cursor += 1;
        }
        item
    }
}

#[derive(Default)]
struct Header {
    q: Option<u32>,
    exp_upper: Option<u32>,
    exp_lower: Option<u32>,
    shift_lower: Option<i64>,
    shift_upper: Option<i64>,
    offset: Option<u64>,
}

fn parse_header_line(header: &mut Header, line_no: usize, line: &str) -> Result<bool, FormatError> {
    let mut parts = line.split_whitespace();
    let key = parts.next().unwrap_or("");
    let rest = parts.next();
    let trailing = parts.next();
    let value = |v: Option<&str>| -> Result<&str, FormatError> {
        v.ok_or_else(|| syntax(line_no, format!("field `{key}` needs a value")))
    };
    if trailing.is_some() {
        return Err(syntax(line_no, format!("trailing data after `{key}`")));
    }
    match key {
        "q" => header.q = Some(value(rest)?.parse().map_err(|e| syntax(line_no, format!("bad q: {e}")))?),
        "M" => header.exp_upper = Some(value(rest)?.parse().map_err(|e| syntax(line_no, format!("bad M: {e}")))?),
        "m" => header.exp_lower = Some(value(rest)?.parse().map_err(|e| syntax(line_no, format!("bad m: {e}")))?),
        "l" => header.shift_lower = Some(value(rest)?.parse().map_err(|e| syntax(line_no, format!("bad l: {e}")))?),
        "u" => header.shift_upper = Some(value(rest)?.parse().map_err(|e| syntax(line_no, format!("bad u: {e}")))?),
        "offset" => {
            header.offset = Some(value(rest)?.parse().map_err(|e| syntax(line_no, format!("bad offset: {e}")))?)
        }
        _ => return Ok(false),
    }
    Ok(true)
}

/// Parses a definition file.
pub fn parse_definition(text: &str) -> Result<QRecursiveDefinition, FormatError> {
    let mut lines = Lines::new(text);
    let mut header = Header::default();
    while let Some((line_no, line)) = lines.peek() {
        if line == "coefficients" {
            break;
        }
        lines.next();
        if !parse_header_line(&mut header, line_no, line)? {
            return Err(syntax(line_no, format!("unknown field `{line}`")));
        }
    }
    let q = header.q.ok_or(FormatError::MissingField("q"))?;
    let exp_upper = header.exp_upper.ok_or(FormatError::MissingField("M"))?;
    let exp_lower = header.exp_lower.ok_or(FormatError::MissingField("m"))?;
    let shift_lower = header.shift_lower.ok_or(FormatError::MissingField("l"))?;
    let shift_upper = header.shift_upper.ok_or(FormatError::MissingField("u"))?;
    let offset = header.offset.ok_or(FormatError::MissingField("offset"))?;

    match lines.next() {
        Some((_, "coefficients")) => {}
        other => {
            let line = other.map_or(0, |(n, _)| n);
            return Err(syntax(line, "expected `coefficients` section"));
        }
    }
    let mut table: BTreeMap<(u64, i64), Rational> = BTreeMap::new();
    while let Some((line_no, line)) = lines.peek() {
        if line == "initial" {
            break;
        }
        lines.next();
        let mut parts = line.split_whitespace();
        let s: u64 = parts
            .next()
            .ok_or_else(|| syntax(line_no, "coefficient row needs `s k value`"))?
            .parse()
            .map_err(|e| syntax(line_no, format!("bad residue: {e}")))?;
        let k: i64 = parts
            .next()
            .ok_or_else(|| syntax(line_no, "coefficient row needs `s k value`"))?
            .parse()
            .map_err(|e| syntax(line_no, format!("bad shift: {e}")))?;
        let value = parts.next().ok_or_else(|| syntax(line_no, "coefficient row needs `s k value`"))?;
        if parts.next().is_some() {
            return Err(syntax(line_no, "trailing data in coefficient row"));
        }
        let value = parse_rational(value).map_err(|e| syntax(line_no, e))?;
        if table.insert((s, k), value).is_some() {
            return Err(syntax(line_no, format!("duplicate coefficient ({s}, {k})")));
        }
    }
    match lines.next() {
        Some((_, "initial")) => {}
        other => {
            let line = other.map_or(0, |(n, _)| n);
            return Err(syntax(line, "expected `initial` section"));
        }
    }
    let mut initial = Vec::new();
    while let Some((line_no, line)) = lines.next() {
        for tok in line.split_whitespace() {
            initial.push(parse_rational(tok).map_err(|e| syntax(line_no, e))?);
        }
    }
    Ok(QRecursiveDefinition::new(
        q,
        exp_upper,
        exp_lower,
        shift_lower,
        shift_upper,
        offset,
        &table,
        initial,
    )?)
}

/// Serializes a definition in the file format; the output re-parses to an
/// equal definition.
pub fn serialize_definition(def: &QRecursiveDefinition) -> String {
    let mut out = String::new();
    out.push_str(&format!("q {}\n", def.q()));
    out.push_str(&format!("M {}\n", def.exp_upper()));
    out.push_str(&format!("m {}\n", def.exp_lower()));
    out.push_str(&format!("l {}\n", def.shift_lower()));
    out.push_str(&format!("u {}\n", def.shift_upper()));
    out.push_str(&format!("offset {}\n", def.offset()));
    out.push_str("coefficients\n");
    for s in 0..def.q_pow_upper() {
        for k in def.shift_lower()..=def.shift_upper() {
            out.push_str(&format!("{s} {k} {}\n", format_rational(def.coeff(s, k))));
        }
    }
    out.push_str("initial\n");
    let values: Vec<String> = def.initial_values().iter().map(format_rational).collect();
    for chunk in values.chunks(16) {
        out.push_str(&chunk.join(" "));
        out.push('\n');
    }
    out
}

/// Parsed identity file: the system plus the target exponents and seed values.
pub struct IdentityFile {
    pub q: u32,
    pub exp_upper: u32,
    pub exp_lower: u32,
    pub identities: Vec<RecurrenceIdentity>,
    pub initial_values: Vec<Rational>,
}

/// Parses an identity file for the disentangler.
pub fn parse_identities(text: &str) -> Result<IdentityFile, FormatError> {
    let mut lines = Lines::new(text);
    let mut header = Header::default();
    while let Some((line_no, line)) = lines.peek() {
        if line.starts_with("identity") || line == "initial" {
            break;
        }
        lines.next();
        if !parse_header_line(&mut header, line_no, line)? {
            return Err(syntax(line_no, format!("unknown field `{line}`")));
        }
    }
    let q = header.q.ok_or(FormatError::MissingField("q"))?;
    let exp_upper = header.exp_upper.ok_or(FormatError::MissingField("M"))?;
    let exp_lower = header.exp_lower.ok_or(FormatError::MissingField("m"))?;

    let mut identities = Vec::new();
    while let Some((line_no, line)) = lines.peek() {
        if line == "initial" {
            break;
        }
        lines.next();
        let mut parts = line.split_whitespace();
        if parts.next() != Some("identity") {
            return Err(syntax(line_no, "expected `identity start <n>`"));
        }
        if parts.next() != Some("start") {
            return Err(syntax(line_no, "expected `identity start <n>`"));
        }
        let start: u64 = parts
            .next()
            .ok_or_else(|| syntax(line_no, "identity needs a start index"))?
            .parse()
            .map_err(|e| syntax(line_no, format!("bad start: {e}")))?;
        let mut terms = Vec::new();
        while let Some((t_no, t_line)) = lines.peek() {
            if t_line.starts_with("identity") || t_line == "initial" {
                break;
            }
            lines.next();
            let mut parts = t_line.split_whitespace();
            let coeff = parts.next().ok_or_else(|| syntax(t_no, "term needs `coeff level residue`"))?;
            let level: u32 = parts
                .next()
                .ok_or_else(|| syntax(t_no, "term needs `coeff level residue`"))?
                .parse()
                .map_err(|e| syntax(t_no, format!("bad level: {e}")))?;
            let residue: i64 = parts
                .next()
                .ok_or_else(|| syntax(t_no, "term needs `coeff level residue`"))?
                .parse()
                .map_err(|e| syntax(t_no, format!("bad residue: {e}")))?;
            if parts.next().is_some() {
                return Err(syntax(t_no, "trailing data in term row"));
            }
            terms.push((parse_rational(coeff).map_err(|e| syntax(t_no, e))?, level, residue));
        }
        if terms.len() < 2 {
            return Err(syntax(line_no, "an identity needs at least two terms"));
        }
        identities.push(RecurrenceIdentity { terms, start });
    }
    let mut initial_values = Vec::new();
    if let Some((_, "initial")) = lines.peek() {
        lines.next();
        while let Some((line_no, line)) = lines.next() {
            for tok in line.split_whitespace() {
                initial_values.push(parse_rational(tok).map_err(|e| syntax(line_no, e))?);
            }
        }
    }
    Ok(IdentityFile { q, exp_upper, exp_lower, identities, initial_values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_round_trips() {
        for name in catalog::NAMES {
            let def = catalog::entry(name).unwrap().definition().clone();
            let text = serialize_definition(&def);
            let back = parse_definition(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(def, back, "{name}");
        }
    }

    #[test]
    fn decimals_rejected() {
        let text = "q 2\nM 1\nm 0\nl 0\nu 1\noffset 0\ncoefficients\n0 0 1.5\n0 1 0\n1 0 1\n1 1 1\ninitial\n0 1\n";
        assert!(matches!(parse_definition(text), Err(FormatError::Syntax { .. })));
    }

    #[test]
    fn identity_file_parses() {
        let text = "q 2\nM 2\nm 1\nidentity start 0\n1 1 1\n-3 0 0\n1 1 0\nidentity start 0\n1 2 0\n1 0 0\n-2 1 0\nidentity start 0\n1 2 2\n-4 0 0\n1 1 0\ninitial\n1 2 3 3\n";
        let file = parse_identities(text).unwrap();
        assert_eq!(file.identities.len(), 3);
        assert_eq!((file.q, file.exp_upper, file.exp_lower), (2, 2, 1));
        let def = crate::disentangle::disentangle(
            &file.identities,
            file.q,
            file.exp_upper,
            file.exp_lower,
            file.initial_values,
        )
        .unwrap();
        assert_eq!(&def, catalog::pascal_z().definition());
    }
}
