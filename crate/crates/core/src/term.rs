//! Single-valued attribute terms of the form `tag = value` or `tag <= value`.
//!
//! The same surface syntax is used inside FCIF/CLIF bodies, cross-table
//! headers, scale-set files, and on the command line. A term with the
//! equality operator and an empty value is written as the bare tag, which
//! is how plain attribute names such as `author` are represented.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relational operator between a tag and its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Op {
    /// Nominal scaling.
    #[serde(rename = "=")]
    Equals,
    /// Ordinal scaling.
    #[serde(rename = "<=")]
    AtMost,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Equals => "=",
            Op::AtMost => "<=",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AttributeTerm {
    pub tag: String,
    pub op: Op,
    pub value: String,
}

impl AttributeTerm {
    /// Builds a term, checking the tag invariants.
    pub fn new(tag: impl Into<String>, op: Op, value: impl Into<String>) -> Result<Self> {
        let term = AttributeTerm { tag: tag.into(), op, value: value.into() };
        term.validate()?;
        Ok(term)
    }

    pub fn equals(tag: impl Into<String>, value: impl Into<String>) -> Result<Self> {
        Self::new(tag, Op::Equals, value)
    }

    pub fn at_most(tag: impl Into<String>, value: impl Into<String>) -> Result<Self> {
        Self::new(tag, Op::AtMost, value)
    }

    /// A bare attribute name: `name = ""`.
    pub fn bare(tag: impl Into<String>) -> Result<Self> {
        Self::new(tag, Op::Equals, "")
    }

    pub fn is_bare(&self) -> bool {
        self.op == Op::Equals && self.value.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |reason: &str| Err(Error::Term { text: self.tag.clone(), reason: reason.to_string() });
        if self.tag.is_empty() {
            return fail("empty tag");
        }
        if self.tag.trim() != self.tag {
            return fail("tag has surrounding whitespace");
        }
        if self.tag.chars().any(|c| matches!(c, '{' | '}' | '\n' | '\r' | '"' | '=' | '≤')) || self.tag.contains("<=")
        {
            return fail("tag contains a brace, quote, newline, or operator");
        }
        Ok(())
    }
}

impl fmt::Display for AttributeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bare() {
            return f.write_str(&self.tag);
        }
        write!(f, "{} {} ", self.tag, self.op)?;
        write_value(f, &self.value)
    }
}

impl FromStr for AttributeTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_term(s)
    }
}

fn needs_quotes(value: &str) -> bool {
    value.is_empty()
        || value.chars().any(|c| c.is_whitespace() || c.is_control() || matches!(c, '"' | '\\' | '{' | '}'))
}

fn write_value(f: &mut fmt::Formatter<'_>, value: &str) -> fmt::Result {
    if !needs_quotes(value) {
        return f.write_str(value);
    }
    f.write_str("\"")?;
    for c in value.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\r' => f.write_str("\\r")?,
            '\t' => f.write_str("\\t")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

/// Reads a double-quoted string starting at `s[0] == '"'`.
/// Returns the unescaped contents and the byte length consumed.
pub(crate) fn read_quoted(s: &str) -> std::result::Result<(String, usize), String> {
    let mut out = String::new();
    let mut chars = s.char_indices();
    chars.next();
    while let Some((i, c)) = chars.next() {
        match c {
            '"' => return Ok((out, i + 1)),
            '\\' => match chars.next() {
                Some((_, 'n')) => out.push('\n'),
                Some((_, 'r')) => out.push('\r'),
                Some((_, 't')) => out.push('\t'),
                Some((_, c)) => out.push(c),
                None => break,
            },
            c => out.push(c),
        }
    }
    Err("unterminated quoted value".to_string())
}

/// Parses the surface syntax of a single term.
///
/// The first unquoted `=`, `<=` or `≤` splits tag from value. Without an
/// operator the whole text is a bare tag.
pub fn parse_term(text: &str) -> Result<AttributeTerm> {
    let err = |reason: &str| Error::Term { text: text.to_string(), reason: reason.to_string() };
    let trimmed = text.trim();
    let mut split = None;
    for (i, c) in trimmed.char_indices() {
        match c {
            '"' => return Err(err("quote before operator")),
            '=' => {
                split = Some((i, Op::Equals, 1));
                break;
            }
            '≤' => {
                split = Some((i, Op::AtMost, c.len_utf8()));
                break;
            }
            '<' if trimmed[i + 1..].starts_with('=') => {
                split = Some((i, Op::AtMost, 2));
                break;
            }
            _ => {}
        }
    }
    let Some((at, op, width)) = split else {
        return AttributeTerm::bare(trimmed).map_err(|e| match e {
            Error::Term { reason, .. } => err(&reason),
            other => other,
        });
    };
    let tag = trimmed[..at].trim_end();
    let rest = trimmed[at + width..].trim_start();
    let value = if rest.starts_with('"') {
        let (value, used) = read_quoted(rest).map_err(|m| err(&m))?;
        if !rest[used..].trim().is_empty() {
            return Err(err("trailing text after quoted value"));
        }
        value
    } else {
        rest.to_string()
    };
    AttributeTerm::new(tag, op, value).map_err(|e| match e {
        Error::Term { reason, .. } => err(&reason),
        other => other,
    })
}
