//! Summary Object Interchange Format.
//!
//! A template is `@TYPE { URL` followed by attribute lines
//! `Name {count}:<TAB>value`, where the value is exactly `count` raw bytes
//! and may contain newlines or braces, and a closing `}`. Templates may be
//! wrapped in a group such as `@UPDATE { ... }`; member templates can be
//! laid out inline or across lines.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoifTemplate {
    pub template_type: String,
    pub url: String,
    pub pairs: Vec<(String, Vec<u8>)>,
}

impl SoifTemplate {
    pub fn new(template_type: impl Into<String>, url: impl Into<String>) -> Self {
        SoifTemplate { template_type: template_type.into(), url: url.into(), pairs: Vec::new() }
    }

    pub fn with_pair(mut self, name: impl Into<String>, value: impl Into<Vec<u8>>) -> Self {
        self.pairs.push((name.into(), value.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.pairs.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SoifItem {
    Template(SoifTemplate),
    Group { group_type: String, members: Vec<SoifTemplate> },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SoifStream {
    pub items: Vec<SoifItem>,
}

impl SoifStream {
    pub fn templates(&self) -> impl Iterator<Item = &SoifTemplate> {
        self.items.iter().flat_map(|item| match item {
            SoifItem::Template(t) => std::slice::from_ref(t).iter(),
            SoifItem::Group { members, .. } => members.iter(),
        })
    }

    pub fn into_templates(self) -> Vec<SoifTemplate> {
        self.items
            .into_iter()
            .flat_map(|item| match item {
                SoifItem::Template(t) => vec![t],
                SoifItem::Group { members, .. } => members,
            })
            .collect()
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Soif { offset: self.pos, message: message.into() }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn skip_blanks(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8, what: &str) -> Result<()> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.err(format!("expected {what}"))),
            None => Err(self.err(format!("truncated stream: expected {what}"))),
        }
    }

    fn take_while(&mut self, keep: impl Fn(u8) -> bool) -> &[u8] {
        let start = self.pos;
        while self.peek().is_some_and(&keep) {
            self.pos += 1;
        }
        &self.bytes[start..self.pos]
    }

    fn text(&self, raw: &[u8], at: usize, what: &str) -> Result<String> {
        String::from_utf8(raw.to_vec())
            .map_err(|_| Error::Soif { offset: at, message: format!("{what} is not valid UTF-8") })
    }

    /// `@TYPE {` with optional blanks after `@`.
    fn header(&mut self) -> Result<String> {
        self.expect(b'@', "`@` starting a template")?;
        self.skip_blanks();
        let at = self.pos;
        let raw = self.take_while(|b| !b.is_ascii_whitespace() && b != b'{').to_vec();
        if raw.is_empty() {
            return Err(self.err("missing template type"));
        }
        let kind = self.text(&raw, at, "template type")?;
        self.skip_blanks();
        self.expect(b'{', "`{` after template type")?;
        Ok(kind)
    }

    /// Body of a template after its header, up to and including `}`.
    fn template_body(&mut self, template_type: String) -> Result<SoifTemplate> {
        self.skip_ws();
        let at = self.pos;
        let raw = self.take_while(|b| !b.is_ascii_whitespace()).to_vec();
        if raw.is_empty() {
            return Err(self.err("truncated stream: missing URL"));
        }
        let url = self.text(&raw, at, "URL")?;
        let mut template = SoifTemplate::new(template_type, url);
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(self.err("truncated stream: template is not closed")),
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(template);
                }
                Some(_) => {}
            }
            let at = self.pos;
            let raw = self.take_while(|b| b != b'{' && b != b'\n' && b != b'}').to_vec();
            if self.peek() != Some(b'{') {
                return Err(self.err("expected `{count}` after attribute name"));
            }
            let name = self.text(raw.trim_ascii(), at, "attribute name")?;
            if name.is_empty() {
                return Err(Error::Soif { offset: at, message: "empty attribute name".into() });
            }
            self.pos += 1;
            let digits = self.take_while(|b| b.is_ascii_digit()).to_vec();
            let count: usize = std::str::from_utf8(&digits)
                .ok()
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| self.err(format!("missing byte count for `{name}`")))?;
            self.expect(b'}', "`}` closing the byte count")?;
            self.expect(b':', "`:` after the byte count")?;
            if self.peek() != Some(b'\t') {
                return Err(self.err(format!("missing tab before the value of `{name}`")));
            }
            self.pos += 1;
            if self.bytes.len() - self.pos < count {
                return Err(self.err(format!(
                    "truncated stream: `{name}` declares {count} bytes, {} remain",
                    self.bytes.len() - self.pos
                )));
            }
            let value = self.bytes[self.pos..self.pos + count].to_vec();
            self.pos += count;
            if let Some(b) = self.peek() {
                if !b.is_ascii_whitespace() && b != b'}' {
                    return Err(self.err(format!("value of `{name}` does not match its declared count {count}")));
                }
            }
            template.pairs.push((name, value));
        }
    }
}

/// Parses a SOIF stream, keeping group wrappers.
pub fn parse_soif_stream(bytes: &[u8]) -> Result<SoifStream> {
    let mut r = Reader { bytes, pos: 0 };
    let mut stream = SoifStream::default();
    loop {
        r.skip_ws();
        if r.peek().is_none() {
            return Ok(stream);
        }
        let kind = r.header()?;
        r.skip_ws();
        // a template always has a URL, so `{` followed by `@` or `}` is a group
        if matches!(r.peek(), Some(b'@' | b'}')) {
            let mut members = Vec::new();
            loop {
                r.skip_ws();
                match r.peek() {
                    Some(b'}') => {
                        r.pos += 1;
                        break;
                    }
                    None => return Err(r.err(format!("truncated stream: `@{kind}` group is not closed"))),
                    Some(_) => {
                        let member_type = r.header()?;
                        members.push(r.template_body(member_type)?);
                    }
                }
            }
            stream.items.push(SoifItem::Group { group_type: kind, members });
        } else {
            stream.items.push(SoifItem::Template(r.template_body(kind)?));
        }
    }
}

/// Parses a SOIF stream into its templates, flattening group wrappers.
pub fn parse_soif(bytes: &[u8]) -> Result<Vec<SoifTemplate>> {
    Ok(parse_soif_stream(bytes)?.into_templates())
}

fn write_template(out: &mut Vec<u8>, t: &SoifTemplate) {
    out.extend_from_slice(format!("@{} {{ {}\n", t.template_type, t.url).as_bytes());
    for (name, value) in &t.pairs {
        out.extend_from_slice(format!("{name} {{{}}}:\t", value.len()).as_bytes());
        out.extend_from_slice(value);
        out.push(b'\n');
    }
    out.extend_from_slice(b"}\n");
}

pub fn serialize_soif(stream: &SoifStream) -> Vec<u8> {
    let mut out = Vec::new();
    for item in &stream.items {
        match item {
            SoifItem::Template(t) => write_template(&mut out, t),
            SoifItem::Group { group_type, members } => {
                out.extend_from_slice(format!("@{group_type} {{\n").as_bytes());
                for t in members {
                    write_template(&mut out, t);
                }
                out.extend_from_slice(b"}\n");
            }
        }
    }
    out
}

pub fn serialize_templates(templates: &[SoifTemplate]) -> Vec<u8> {
    serialize_soif(&SoifStream { items: templates.iter().cloned().map(SoifItem::Template).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brace_inside_counted_value_is_data() {
        let t = parse_soif(b"@FILE { u\nName {3}:\tab}\n}\n").unwrap();
        assert_eq!(t[0].get("Name").unwrap(), b"ab}");
    }

    #[test]
    fn multi_line_values() {
        let t = parse_soif(b"@FILE { u\nD {5}:\ta\nb\nc\n}\n").unwrap();
        assert_eq!(t[0].get("D").unwrap(), b"a\nb\nc");
    }

    #[test]
    fn header_whitespace_is_optional() {
        let a = parse_soif(b"@ FILE { u\n}\n").unwrap();
        let b = parse_soif(b"@FILE{u\n}").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn update_groups_inline_and_multiline() {
        let text = b"@ UPDATE {\n@FILE { u1 T {1}:\tx }\n@FILE { u2\nT {1}:\ty\n}\n}\n";
        let stream = parse_soif_stream(text).unwrap();
        assert_eq!(stream.items.len(), 1);
        let ts: Vec<_> = stream.templates().collect();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[1].get("T").unwrap(), b"y");
        let again = parse_soif_stream(&serialize_soif(&stream)).unwrap();
        assert_eq!(again, stream);
    }

    #[test]
    fn empty_group() {
        let stream = parse_soif_stream(b"@UPDATE {\n}\n@FILE { u\n}\n").unwrap();
        assert_eq!(stream.items.len(), 2);
        assert!(matches!(&stream.items[0], SoifItem::Group { members, .. } if members.is_empty()));
    }

    #[test]
    fn errors_carry_offsets() {
        let err = parse_soif(b"@FILE { u\nT {1}: x\n}\n").unwrap_err();
        assert!(matches!(err, Error::Soif { offset: 16, .. }), "{err:?}");
        let err = parse_soif(b"@FILE { u\nT {2}:\txyz\n}\n").unwrap_err();
        assert!(err.to_string().contains("declared count"), "{err}");
        let err = parse_soif(b"@FILE { u\nT {20}:\txyz\n}\n").unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
        let err = parse_soif(b"@FILE { u\nT {1}:\tx\n").unwrap_err();
        assert!(err.to_string().contains("truncated"), "{err}");
        assert!(parse_soif(b"FILE { u }").is_err());
        assert!(parse_soif(b"@FILE { u\nT:\tx\n}").is_err());
    }

    #[test]
    fn eight_bit_values() {
        let t = SoifTemplate::new("FILE", "u").with_pair("B", vec![0xff, b'\n', 0x00, b'}']);
        let bytes = serialize_templates(std::slice::from_ref(&t));
        assert_eq!(parse_soif(&bytes).unwrap(), vec![t]);
    }
}
