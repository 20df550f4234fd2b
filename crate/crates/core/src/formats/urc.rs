//! Uniform Resource Characteristics in the plain `Key: value` layout and
//! in the TEI-like SGML layout.
//!
//! Both layouts read into a [`UrcRecord`]: an optional URN with its own
//! pairs, then locations in precedence order, each with its own pairs.

use crate::error::{parse_err, Result};
use crate::scaling::RawRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrcLocation {
    /// The key or element name that introduced the location, as written
    /// (`URL` in the plain layout, `url` in SGML). Object names are
    /// `label:url`.
    pub label: String,
    pub url: String,
    pub pairs: Vec<(String, String)>,
}

impl UrcLocation {
    pub fn object_name(&self) -> String {
        format!("{}:{}", self.label, self.url)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UrcRecord {
    pub urn: Option<String>,
    pub global_pairs: Vec<(String, String)>,
    pub locations: Vec<UrcLocation>,
}

/// Parses the plain layout.
///
/// A `URN:` line sets the URN (the whole line, since the URN scheme name is
/// part of the identifier). Keys before the first `URL:` line belong to the
/// resource; each `URL:` line opens a location that collects the keys
/// after it.
pub fn parse_urc(text: &str) -> Result<UrcRecord> {
    let mut record = UrcRecord::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(parse_err("URC", i + 1, format!("expected `Key: value`, found `{line}`")));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(parse_err("URC", i + 1, "empty key"));
        }
        if key.eq_ignore_ascii_case("URN") {
            if record.urn.is_some() {
                return Err(parse_err("URC", i + 1, "second URN line"));
            }
            if !record.locations.is_empty() {
                return Err(parse_err("URC", i + 1, "URN after the first URL"));
            }
            record.urn = Some(line.to_string());
        } else if key.eq_ignore_ascii_case("URL") {
            if value.is_empty() {
                return Err(parse_err("URC", i + 1, "empty URL"));
            }
            record.locations.push(UrcLocation { label: key.to_string(), url: value.to_string(), pairs: Vec::new() });
        } else {
            let pair = (key.to_string(), value.to_string());
            match record.locations.last_mut() {
                Some(loc) => loc.pairs.push(pair),
                None => record.global_pairs.push(pair),
            }
        }
    }
    Ok(record)
}

pub fn serialize_urc(record: &UrcRecord) -> String {
    let mut out = String::new();
    let pair = |out: &mut String, (k, v): &(String, String)| {
        out.push_str(k);
        out.push(':');
        if !v.is_empty() {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
    };
    if let Some(urn) = &record.urn {
        out.push_str(urn);
        out.push('\n');
    }
    for p in &record.global_pairs {
        pair(&mut out, p);
    }
    for loc in &record.locations {
        out.push_str(&loc.object_name());
        out.push('\n');
        for p in &loc.pairs {
            pair(&mut out, p);
        }
    }
    out
}

/// Raw records for a URC: the URN record carries the resource pairs and
/// lists every location as a child; each location is its own record.
///
/// Without a URN the resource pairs are copied onto every location.
pub fn urc_to_records(record: &UrcRecord) -> Vec<RawRecord> {
    let mut out = Vec::with_capacity(record.locations.len() + 1);
    let names: Vec<String> = record.locations.iter().map(UrcLocation::object_name).collect();
    if let Some(urn) = &record.urn {
        out.push(RawRecord { name: urn.clone(), pairs: record.global_pairs.clone(), children: names.clone() });
    }
    for (loc, name) in record.locations.iter().zip(names) {
        let mut pairs = Vec::new();
        if record.urn.is_none() {
            pairs.extend(record.global_pairs.iter().cloned());
        }
        pairs.extend(loc.pairs.iter().cloned());
        out.push(RawRecord { name, pairs, children: Vec::new() });
    }
    out
}

// ---------------------------------------------------------------------------
// SGML

#[derive(Debug)]
enum Node {
    Element(Element),
    Text(String),
}

#[derive(Debug)]
struct Element {
    name: String,
    line: usize,
    children: Vec<Node>,
}

impl Element {
    fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.children {
            if let Node::Text(t) = c {
                s.push_str(t);
            }
        }
        s.trim().to_string()
    }

    fn elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|c| match c {
            Node::Element(e) => Some(e),
            Node::Text(_) => None,
        })
    }

    fn has_elements(&self) -> bool {
        self.elements().next().is_some()
    }
}

fn decode_entities(text: &str) -> String {
    text.replace("&lt;", "<").replace("&gt;", ">").replace("&quot;", "\"").replace("&amp;", "&")
}

fn encode_entities(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Builds the element tree. `</>` closes the innermost open element.
fn parse_tree(text: &str) -> Result<Vec<Element>> {
    const F: &str = "URC-SGML";
    let mut roots: Vec<Element> = Vec::new();
    let mut stack: Vec<Element> = Vec::new();
    let mut rest = text;
    let mut line = 1;

    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix('<') {
            let close = after.find('>').ok_or_else(|| parse_err(F, line, "unterminated tag"))?;
            let tag = &after[..close];
            let consumed = close + 2;
            let tag_line = line;
            line += rest[..consumed].matches('\n').count();
            rest = &rest[consumed..];

            if tag.starts_with('!') || tag.starts_with('?') {
                continue;
            }
            if let Some(name) = tag.strip_prefix('/') {
                let name = name.trim();
                let Some(open) = stack.pop() else {
                    return Err(parse_err(F, tag_line, format!("closing tag `</{name}>` with nothing open")));
                };
                if !name.is_empty() && !name.eq_ignore_ascii_case(&open.name) {
                    return Err(parse_err(F, tag_line, format!("`</{name}>` does not match open `<{}>`", open.name)));
                }
                match stack.last_mut() {
                    Some(parent) => parent.children.push(Node::Element(open)),
                    None => roots.push(open),
                }
                continue;
            }
            let name = tag.split_whitespace().next().unwrap_or("");
            if name.is_empty() {
                return Err(parse_err(F, tag_line, "empty tag"));
            }
            stack.push(Element { name: name.to_string(), line: tag_line, children: Vec::new() });
        } else {
            let end = rest.find('<').unwrap_or(rest.len());
            let chunk = &rest[..end];
            match stack.last_mut() {
                Some(open) => open.children.push(Node::Text(decode_entities(chunk))),
                None if chunk.trim().is_empty() => {}
                None => {
                    return Err(parse_err(F, line, format!("text outside any element: `{}`", chunk.trim())));
                }
            }
            line += chunk.matches('\n').count();
            rest = &rest[end..];
        }
    }
    if let Some(open) = stack.last() {
        return Err(parse_err(F, open.line, format!("`<{}>` is never closed", open.name)));
    }
    Ok(roots)
}

/// Parses the TEI-like SGML layout.
///
/// `urn`, `title`, `author`, `date` and any unknown leaf elements directly
/// under `urc` become resource pairs; `locationGroup` and `list` are
/// containers; each `item` is a location whose `url` child names it and
/// whose other leaf children (`extent`, `format`, ...) are its pairs.
pub fn parse_urc_sgml(text: &str) -> Result<UrcRecord> {
    const F: &str = "URC-SGML";
    let roots = parse_tree(text)?;
    let root = match roots.as_slice() {
        [root] if root.name.eq_ignore_ascii_case("urc") => root,
        [root] => return Err(parse_err(F, root.line, format!("expected <urc>, found <{}>", root.name))),
        [] => return Err(parse_err(F, 1, "no <urc> element")),
        [_, extra, ..] => return Err(parse_err(F, extra.line, "more than one top-level element")),
    };
    check_no_text(root)?;
    let mut record = UrcRecord::default();
    collect(root, &mut record)?;
    Ok(record)
}

fn check_no_text(e: &Element) -> Result<()> {
    for c in &e.children {
        if let Node::Text(t) = c {
            if !t.trim().is_empty() {
                return Err(parse_err("URC-SGML", e.line, format!("unexpected text `{}` in <{}>", t.trim(), e.name)));
            }
        }
    }
    Ok(())
}

fn collect(container: &Element, record: &mut UrcRecord) -> Result<()> {
    for e in container.elements() {
        let name = e.name.to_ascii_lowercase();
        match name.as_str() {
            "urn" => {
                if record.urn.is_some() {
                    return Err(parse_err("URC-SGML", e.line, "second <urn>"));
                }
                record.urn = Some(e.text());
            }
            "item" => {
                check_no_text(e)?;
                record.locations.push(item_location(e)?);
            }
            "url" => record.locations.push(UrcLocation { label: e.name.clone(), url: e.text(), pairs: Vec::new() }),
            _ if e.has_elements() => {
                check_no_text(e)?;
                collect(e, record)?;
            }
            _ => record.global_pairs.push((e.name.clone(), e.text())),
        }
    }
    Ok(())
}

fn item_location(item: &Element) -> Result<UrcLocation> {
    let mut location: Option<UrcLocation> = None;
    let mut pairs = Vec::new();
    for e in item.elements() {
        if e.name.eq_ignore_ascii_case("url") {
            if location.is_some() {
                return Err(parse_err("URC-SGML", e.line, "second <url> in <item>"));
            }
            location = Some(UrcLocation { label: e.name.clone(), url: e.text(), pairs: Vec::new() });
        } else if e.has_elements() {
            return Err(parse_err("URC-SGML", e.line, format!("unexpected nested <{}> in <item>", e.name)));
        } else {
            pairs.push((e.name.clone(), e.text()));
        }
    }
    let mut location = location.ok_or_else(|| parse_err("URC-SGML", item.line, "<item> without <url>"))?;
    if location.url.is_empty() {
        return Err(parse_err("URC-SGML", item.line, "empty <url>"));
    }
    location.pairs = pairs;
    Ok(location)
}

/// Writes the SGML layout with abbreviated `</>` closing tags on location
/// pairs.
pub fn serialize_urc_sgml(record: &UrcRecord) -> String {
    let mut out = String::from("<urc>\n");
    if let Some(urn) = &record.urn {
        out.push_str(&format!("<urn>{}</urn>\n", encode_entities(urn)));
    }
    for (k, v) in &record.global_pairs {
        out.push_str(&format!("<{k}>{}</{k}>\n", encode_entities(v)));
    }
    if !record.locations.is_empty() {
        out.push_str("<locationGroup>\n<list>\n");
        for loc in &record.locations {
            out.push_str(&format!("<item><{l}>{}</{l}>\n", encode_entities(&loc.url), l = loc.label));
            for (k, v) in &loc.pairs {
                out.push_str(&format!("<{k}>{}</>\n", encode_entities(v)));
            }
            out.push_str("</item>\n");
        }
        out.push_str("</list>\n</locationGroup>\n");
    }
    out.push_str("</urc>\n");
    out
}

/// Reports whether an SGML element name is one the reader interprets
/// structurally rather than as a pair.
pub fn is_structural_element(name: &str) -> bool {
    ["urc", "urn", "locationgroup", "list", "item", "url"].iter().any(|n| name.eq_ignore_ascii_case(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn anonymous_record() {
        let r = parse_urc("URL: http://x/y\nSize: 5\n").unwrap();
        assert_eq!(r.urn, None);
        assert_eq!(r.locations.len(), 1);
        assert_eq!(r.locations[0].pairs, vec![("Size".into(), "5".into())]);
        let recs = urc_to_records(&r);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].name, "URL:http://x/y");
    }

    #[test]
    fn keys_without_scope_are_global() {
        let r = parse_urc("Title: t\nURL:u\n").unwrap();
        assert_eq!(r.global_pairs, vec![("Title".into(), "t".into())]);
        let recs = urc_to_records(&r);
        assert_eq!(recs[0].pairs, vec![("Title".into(), "t".into())]);
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = parse_urc("URN:x\n\nno colon here\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn sgml_empty_record() {
        assert_eq!(parse_urc_sgml("<urc></urc>").unwrap(), UrcRecord::default());
    }

    #[test]
    fn sgml_errors() {
        assert!(parse_urc_sgml("<urc><title>x</author></urc>").is_err());
        assert!(parse_urc_sgml("stray <urc></urc>").is_err());
        assert!(parse_urc_sgml("<urc><title>x</title>").is_err());
        assert!(parse_urc_sgml("<urc>loose</urc>").is_err());
        assert!(parse_urc_sgml("<urc><list><item><extent>1</></item></list></urc>").is_err());
    }

    #[test]
    fn sgml_unknown_elements_become_pairs() {
        let r = parse_urc_sgml("<urc><publisher>ACME &amp; Co</publisher></urc>").unwrap();
        assert_eq!(r.global_pairs, vec![("publisher".into(), "ACME & Co".into())]);
        assert!(is_structural_element("locationGroup"));
        assert!(!is_structural_element("publisher"));
    }
}
