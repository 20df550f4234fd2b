//! Shared lexer for the brace-structured section documents (FCIF, CLIF).
//!
//! A document is a sequence of section keywords, each on its own line,
//! followed by entries of the form `key { body }`. Bodies may span lines
//! and never nest. Double quotes protect braces inside attribute values.

use crate::error::{parse_err, Error, Result};
use crate::term::{parse_term, AttributeTerm};

#[derive(Debug)]
pub(crate) struct Section {
    pub keyword: &'static str,
    /// Non-entry lines (only meaningful in `TYPE`).
    pub lines: Vec<(usize, String)>,
    pub entries: Vec<Entry>,
}

#[derive(Debug)]
pub(crate) struct Entry {
    pub key: String,
    pub line: usize,
    pub body: String,
    pub body_line: usize,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }
}

/// Splits a document into sections.
///
/// `keywords` lists the section keywords recognized by the format, in their
/// required order; a section may be omitted but not repeated or reordered.
pub(crate) fn lex(format: &'static str, text: &str, keywords: &[&'static str]) -> Result<Vec<Section>> {
    let mut cur = Cursor { text, pos: 0, line: 1 };
    let mut sections: Vec<Section> = Vec::new();
    let mut last_rank: Option<usize> = None;

    loop {
        while cur.peek().is_some_and(char::is_whitespace) {
            cur.bump();
        }
        if cur.peek().is_none() {
            break;
        }
        let line = cur.line;
        let mut head = String::new();
        let mut in_quotes = false;
        let mut opened = false;
        while let Some(c) = cur.peek() {
            if c == '\n' && !in_quotes {
                break;
            }
            cur.bump();
            match c {
                '"' => in_quotes = !in_quotes,
                '\\' if in_quotes => {
                    head.push(c);
                    if let Some(n) = cur.bump() {
                        head.push(n);
                    }
                    continue;
                }
                '{' if !in_quotes => {
                    opened = true;
                    break;
                }
                '}' if !in_quotes => return Err(parse_err(format, line, "unbalanced braces: unexpected `}`")),
                _ => {}
            }
            head.push(c);
        }

        if !opened {
            let word = head.trim();
            if let Some(rank) = keywords.iter().position(|k| *k == word) {
                if last_rank.is_some_and(|r| r >= rank) {
                    return Err(parse_err(format, line, format!("section `{word}` out of order")));
                }
                last_rank = Some(rank);
                sections.push(Section { keyword: keywords[rank], lines: Vec::new(), entries: Vec::new() });
                continue;
            }
            match sections.last_mut() {
                Some(section) if section.keyword == "TYPE" && section.lines.is_empty() => {
                    section.lines.push((line, word.to_string()));
                    continue;
                }
                _ => return Err(parse_err(format, line, format!("unknown section keyword `{word}`"))),
            }
        }

        let key = head.trim().to_string();
        if key.is_empty() {
            return Err(parse_err(format, line, "entry without a name before `{`"));
        }
        let body_line = cur.line;
        let mut body = String::new();
        let mut in_quotes = false;
        let mut closed = false;
        while let Some(c) = cur.bump() {
            match c {
                '"' => in_quotes = !in_quotes,
                '\\' if in_quotes => {
                    body.push(c);
                    if let Some(n) = cur.bump() {
                        body.push(n);
                    }
                    continue;
                }
                '{' if !in_quotes => {
                    return Err(parse_err(format, cur.line, "unbalanced braces: nested `{`"));
                }
                '}' if !in_quotes => {
                    closed = true;
                    break;
                }
                _ => {}
            }
            body.push(c);
        }
        if !closed {
            return Err(parse_err(format, line, format!("unbalanced braces: `{key} {{` is never closed")));
        }
        while let Some(c) = cur.peek() {
            if c == '\n' {
                break;
            }
            if !c.is_whitespace() {
                return Err(parse_err(format, cur.line, format!("unexpected `{c}` after `}}`")));
            }
            cur.bump();
        }
        match sections.last_mut() {
            Some(section) if section.keyword != "TYPE" => section.entries.push(Entry { key, line, body, body_line }),
            _ => return Err(parse_err(format, line, "entry outside of a section")),
        }
    }
    Ok(sections)
}

impl Entry {
    /// Whitespace-delimited body members with their line numbers.
    pub fn tokens(&self) -> Vec<(usize, &str)> {
        let mut out = Vec::new();
        for (offset, line) in self.body.split('\n').enumerate() {
            out.extend(line.split_whitespace().map(|t| (self.body_line + offset, t)));
        }
        out
    }

    /// Newline-delimited attribute terms.
    pub fn terms(&self, format: &'static str) -> Result<Vec<(usize, AttributeTerm)>> {
        let mut out = Vec::new();
        for (offset, line) in self.body.split('\n').enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let at = self.body_line + offset;
            let term = parse_term(line).map_err(|e| parse_err(format, at, e.to_string()))?;
            out.push((at, term));
        }
        Ok(out)
    }

    pub fn key_term(&self, format: &'static str) -> Result<AttributeTerm> {
        parse_term(&self.key).map_err(|e| parse_err(format, self.line, e.to_string()))
    }

    pub fn key_index(&self, format: &'static str) -> Result<usize> {
        parse_index(format, self.line, &self.key)
    }
}

pub(crate) fn parse_index(format: &'static str, line: usize, text: &str) -> Result<usize> {
    match text.parse::<usize>() {
        Ok(k) if k >= 1 && text.bytes().all(|b| b.is_ascii_digit()) => Ok(k),
        _ => Err(parse_err(format, line, format!("`{text}` is not a class index (natural number from 1)"))),
    }
}

/// The `TYPE` section's name; `????` or nothing means no type.
pub(crate) fn type_name(format: &'static str, section: Option<&Section>) -> Result<Option<String>> {
    let Some(section) = section else { return Ok(None) };
    if let Some(entry) = section.entries.first() {
        return Err(parse_err(format, entry.line, "TYPE takes a bare name, not an entry"));
    }
    match section.lines.as_slice() {
        [] => Ok(None),
        [(_, name)] if name.chars().all(|c| c == '?') => Ok(None),
        [(_, name)] => Ok(Some(name.clone())),
        [.., (line, extra)] => Err(parse_err(format, *line, format!("unexpected `{extra}` in TYPE section"))),
    }
}

/// Object names must be single whitespace-free tokens without braces or
/// quotes so they survive the OBJECT row syntax.
pub(crate) fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || matches!(c, '{' | '}' | '"')) {
        return Err(Error::Validation(format!("object name `{name}` cannot be written in an OBJECT row")));
    }
    Ok(())
}

pub(crate) fn write_type(out: &mut String, type_name: Option<&str>) {
    out.push_str("TYPE\n    ");
    out.push_str(type_name.unwrap_or("????"));
    out.push('\n');
}

pub(crate) fn write_token_row(out: &mut String, key: &str, members: &[String]) {
    out.push_str("    ");
    out.push_str(key);
    if members.is_empty() {
        out.push_str(" {}\n");
    } else {
        out.push_str(" { ");
        out.push_str(&members.join(" "));
        out.push_str(" }\n");
    }
}

pub(crate) fn write_term_row(out: &mut String, key: &str, members: &[AttributeTerm]) {
    out.push_str("    ");
    out.push_str(key);
    if members.is_empty() {
        out.push_str(" {}\n");
        return;
    }
    out.push_str(" {\n");
    for m in members {
        out.push_str("        ");
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out.push_str("    }\n");
}
