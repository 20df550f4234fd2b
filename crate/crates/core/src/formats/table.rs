//! Cross tables: a header row of attribute names, then one row per object
//! whose first cell is the object name and whose other cells mark
//! incidence with `X`, `x`, `1` or `×`.
//!
//! The delimiter is the first tab, `;`, `|` or `,` in the header line.
//! Burmeister `.cxt` files (starting with a `B` line) are read as well.

use std::collections::HashSet;

use crate::context::FormalContext;
use crate::error::{parse_err, Error, Result};
use crate::term::{parse_term, AttributeTerm};

const FORMAT: &str = "table";

fn is_mark(cell: &str) -> Option<bool> {
    match cell.trim() {
        "X" | "x" | "1" | "×" => Some(true),
        "" | "." | "0" | "-" => Some(false),
        _ => None,
    }
}

/// The first candidate delimiter outside double quotes. The header starts
/// with the corner cell, so this is normally the character right after it.
fn sniff_delimiter(header: &str) -> u8 {
    let mut quoted = false;
    for b in header.bytes() {
        match b {
            b'"' => quoted = !quoted,
            b'\t' | b';' | b'|' | b',' if !quoted => return b,
            _ => {}
        }
    }
    b','
}

pub fn parse_context_table(text: &str) -> Result<FormalContext> {
    if text.lines().next().map(str::trim) == Some("B") {
        return parse_burmeister(text);
    }
    let header = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let delimiter = sniff_delimiter(header);
    let mut reader =
        csv::ReaderBuilder::new().delimiter(delimiter).has_headers(false).flexible(true).from_reader(text.as_bytes());

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(FORMAT, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows.push((line, record.iter().map(str::to_string).collect::<Vec<_>>()));
    }
    let Some(((header_line, header), body)) = rows.split_first() else {
        return Ok(FormalContext::empty());
    };

    let mut attributes = Vec::new();
    let mut seen = HashSet::new();
    for name in &header[1..] {
        let term = parse_term(name).map_err(|e| parse_err(FORMAT, *header_line, e.to_string()))?;
        if !seen.insert(term.clone()) {
            return Err(parse_err(FORMAT, *header_line, format!("duplicate attribute `{term}`")));
        }
        attributes.push(term);
    }

    let mut objects = Vec::new();
    let mut incidence = Vec::new();
    let mut names = HashSet::new();
    for (g, (line, cells)) in body.iter().enumerate() {
        if cells.len() != header.len() {
            return Err(parse_err(
                FORMAT,
                *line,
                format!("row has {} cells, header has {}", cells.len(), header.len()),
            ));
        }
        let name = cells[0].trim().to_string();
        if name.is_empty() {
            return Err(parse_err(FORMAT, *line, "empty object name"));
        }
        if !names.insert(name.clone()) {
            return Err(parse_err(FORMAT, *line, format!("duplicate object `{name}`")));
        }
        for (m, cell) in cells[1..].iter().enumerate() {
            match is_mark(cell) {
                Some(true) => incidence.push((g, m)),
                Some(false) => {}
                None => return Err(parse_err(FORMAT, *line, format!("unrecognized mark `{cell}`"))),
            }
        }
        objects.push(name);
    }
    FormalContext::new(objects, attributes, incidence)
}

fn parse_burmeister(text: &str) -> Result<FormalContext> {
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 1;
    let next = |i: &mut usize| -> Result<(usize, &str)> {
        let line = lines.get(*i).ok_or_else(|| parse_err(FORMAT, *i + 1, "unexpected end of file"))?;
        *i += 1;
        Ok((*i, line.trim_end_matches('\r')))
    };
    // optional blank or name line before the counts
    while lines.get(i).is_some_and(|l| l.trim().parse::<usize>().is_err()) {
        i += 1;
    }
    let count = |i: &mut usize| -> Result<usize> {
        let (at, l) = next(i)?;
        l.trim().parse().map_err(|_| parse_err(FORMAT, at, format!("expected a count, found `{l}`")))
    };
    let n = count(&mut i)?;
    let m = count(&mut i)?;
    while lines.get(i).is_some_and(|l| l.trim().is_empty()) {
        i += 1;
    }
    let mut objects = Vec::with_capacity(n);
    for _ in 0..n {
        objects.push(next(&mut i)?.1.trim().to_string());
    }
    let mut attributes = Vec::with_capacity(m);
    for _ in 0..m {
        let (at, l) = next(&mut i)?;
        attributes.push(parse_term(l).map_err(|e| parse_err(FORMAT, at, e.to_string()))?);
    }
    let mut incidence = Vec::new();
    for g in 0..n {
        let (at, row) = next(&mut i)?;
        let cells: Vec<char> = row.trim().chars().collect();
        if cells.len() != m {
            return Err(parse_err(FORMAT, at, format!("row has {} cells, expected {m}", cells.len())));
        }
        for (a, c) in cells.into_iter().enumerate() {
            match c {
                'X' | 'x' => incidence.push((g, a)),
                '.' => {}
                other => return Err(parse_err(FORMAT, at, format!("unrecognized mark `{other}`"))),
            }
        }
    }
    FormalContext::new(objects, attributes, incidence).map_err(|e| match e {
        Error::DuplicateObject(name) => parse_err(FORMAT, 0, format!("duplicate object `{name}`")),
        other => other,
    })
}

/// Writes a comma-separated cross table with `X` marks.
pub fn write_context_table(ctx: &FormalContext) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    let header = std::iter::once(String::new()).chain(ctx.attributes().iter().map(AttributeTerm::to_string));
    writer.write_record(header).expect("in-memory write");
    for (g, name) in ctx.objects().iter().enumerate() {
        let cells = std::iter::once(name.clone()).chain((0..ctx.attribute_count()).map(|m| {
            if ctx.has(g, m) {
                "X".into()
            } else {
                String::new()
            }
        }));
        writer.write_record(cells).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}
