//! Formal Context Interchange Format.
//!
//! ```text
//! TYPE
//!     ????
//! OBJECT
//!     URN:IANA:623:oit:cs:ftp-and-telnet { URL:file://... URL:http://... }
//!     URL:file://... {}
//! ATTRIBUTE
//!     title = "Intro to FTP and Telnet" {
//!         author = "Adam Arrowood"
//!     }
//! INCIDENCE
//!     URL:file://... {
//!         content-type = text/postscript
//!     }
//! ```
//!
//! OBJECT rows list more specialized objects (or typed parts); ATTRIBUTE
//! rows list implied attributes; INCIDENCE rows list the attributes an
//! object has. The serializer emits the canonical layout above.

use std::collections::{HashMap, HashSet};

use super::lex::{self, check_name};
use crate::context::FormalContext;
use crate::error::{parse_err, Error, Result};
use crate::ordered::OrderedContext;
use crate::term::AttributeTerm;

const FORMAT: &str = "FCIF";
const SECTIONS: &[&str] = &["TYPE", "OBJECT", "ATTRIBUTE", "INCIDENCE"];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FcifDocument {
    pub type_name: Option<String>,
    pub objects: Vec<(String, Vec<String>)>,
    pub attributes: Vec<(AttributeTerm, Vec<AttributeTerm>)>,
    pub incidence: Vec<(String, Vec<AttributeTerm>)>,
}

pub fn parse_fcif(text: &str) -> Result<FcifDocument> {
    let sections = lex::lex(FORMAT, text, SECTIONS)?;
    let find = |kw: &str| sections.iter().find(|s| s.keyword == kw);
    let mut doc = FcifDocument { type_name: lex::type_name(FORMAT, find("TYPE"))?, ..Default::default() };

    let mut object_lines = Vec::new();
    if let Some(section) = find("OBJECT") {
        let mut seen = HashSet::new();
        for entry in &section.entries {
            check_name(&entry.key).map_err(|e| parse_err(FORMAT, entry.line, e.to_string()))?;
            if !seen.insert(entry.key.clone()) {
                return Err(parse_err(FORMAT, entry.line, format!("duplicate object `{}`", entry.key)));
            }
            let tokens = entry.tokens();
            object_lines.push(tokens.iter().map(|(l, _)| *l).collect::<Vec<_>>());
            doc.objects.push((entry.key.clone(), tokens.iter().map(|(_, t)| t.to_string()).collect()));
        }
    }

    let mut attribute_lines = Vec::new();
    if let Some(section) = find("ATTRIBUTE") {
        let mut seen = HashSet::new();
        for entry in &section.entries {
            let term = entry.key_term(FORMAT)?;
            if !seen.insert(term.clone()) {
                return Err(parse_err(FORMAT, entry.line, format!("duplicate attribute `{term}`")));
            }
            let members = entry.terms(FORMAT)?;
            attribute_lines.push(members.iter().map(|(l, _)| *l).collect::<Vec<_>>());
            doc.attributes.push((term, members.into_iter().map(|(_, t)| t).collect()));
        }
    }

    let known_objects: HashSet<&str> = doc.objects.iter().map(|(o, _)| o.as_str()).collect();
    let known_terms: HashSet<&AttributeTerm> = doc.attributes.iter().map(|(a, _)| a).collect();
    for ((_, children), lines) in doc.objects.iter().zip(&object_lines) {
        for (child, line) in children.iter().zip(lines) {
            if !known_objects.contains(child.as_str()) {
                return Err(parse_err(FORMAT, *line, format!("undeclared object `{child}`")));
            }
        }
    }
    for ((_, children), lines) in doc.attributes.iter().zip(&attribute_lines) {
        for (child, line) in children.iter().zip(lines) {
            if !known_terms.contains(child) {
                return Err(parse_err(FORMAT, *line, format!("undeclared attribute `{child}`")));
            }
        }
    }

    if let Some(section) = find("INCIDENCE") {
        let mut seen = HashSet::new();
        for entry in &section.entries {
            if !known_objects.contains(entry.key.as_str()) {
                return Err(parse_err(FORMAT, entry.line, format!("undeclared object `{}`", entry.key)));
            }
            if !seen.insert(entry.key.clone()) {
                return Err(parse_err(FORMAT, entry.line, format!("duplicate incidence row `{}`", entry.key)));
            }
            let members = entry.terms(FORMAT)?;
            for (line, term) in &members {
                if !known_terms.contains(term) {
                    return Err(parse_err(FORMAT, *line, format!("undeclared attribute `{term}`")));
                }
            }
            doc.incidence.push((entry.key.clone(), members.into_iter().map(|(_, t)| t).collect()));
        }
    }
    Ok(doc)
}

pub fn serialize_fcif(doc: &FcifDocument) -> String {
    let mut out = String::new();
    lex::write_type(&mut out, doc.type_name.as_deref());
    out.push_str("OBJECT\n");
    for (name, children) in &doc.objects {
        lex::write_token_row(&mut out, name, children);
    }
    out.push_str("ATTRIBUTE\n");
    for (term, children) in &doc.attributes {
        lex::write_term_row(&mut out, &term.to_string(), children);
    }
    out.push_str("INCIDENCE\n");
    for (name, terms) in &doc.incidence {
        lex::write_term_row(&mut out, name, terms);
    }
    out
}

impl FcifDocument {
    /// Builds the ordered context the document describes.
    pub fn to_ordered_context(&self) -> Result<OrderedContext> {
        let objects: Vec<String> = self.objects.iter().map(|(o, _)| o.clone()).collect();
        let attributes: Vec<AttributeTerm> = self.attributes.iter().map(|(a, _)| a.clone()).collect();
        let object_at: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
        let term_at: HashMap<&AttributeTerm, usize> = attributes.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let obj = |name: &str| {
            object_at.get(name).copied().ok_or_else(|| Error::Validation(format!("undeclared object `{name}`")))
        };
        let attr = |term: &AttributeTerm| {
            term_at.get(term).copied().ok_or_else(|| Error::Validation(format!("undeclared attribute `{term}`")))
        };

        let mut pairs = Vec::new();
        for (name, terms) in &self.incidence {
            let g = obj(name)?;
            for t in terms {
                pairs.push((g, attr(t)?));
            }
        }
        let object_children = self
            .objects
            .iter()
            .map(|(_, kids)| kids.iter().map(|k| obj(k)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let attribute_children = self
            .attributes
            .iter()
            .map(|(_, kids)| kids.iter().map(attr).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let base = FormalContext::new(objects, attributes, pairs)?;
        OrderedContext::new(base, object_children, attribute_children)
    }

    /// Writes an ordered context as a document: one incidence row per
    /// object, terms in attribute order.
    pub fn from_ordered_context(octx: &OrderedContext, type_name: Option<String>) -> Result<Self> {
        let ctx = octx.base();
        for name in ctx.objects() {
            check_name(name)?;
        }
        let objects = ctx
            .objects()
            .iter()
            .zip(octx.object_children())
            .map(|(name, kids)| (name.clone(), kids.iter().map(|&k| ctx.objects()[k].clone()).collect()))
            .collect();
        let attributes = ctx
            .attributes()
            .iter()
            .zip(octx.attribute_children())
            .map(|(term, kids)| (term.clone(), kids.iter().map(|&k| ctx.attributes()[k].clone()).collect()))
            .collect();
        let incidence = ctx
            .objects()
            .iter()
            .enumerate()
            .map(|(g, name)| (name.clone(), ctx.row(g).ones().map(|m| ctx.attributes()[m].clone()).collect()))
            .collect();
        Ok(FcifDocument {
            type_name: type_name.filter(|t| !t.chars().all(|c| c == '?')),
            objects,
            attributes,
            incidence,
        })
    }

    pub fn from_context(ctx: &FormalContext, type_name: Option<String>) -> Result<Self> {
        Self::from_ordered_context(&OrderedContext::discrete(ctx.clone()), type_name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sections_give_empty_context() {
        let doc = parse_fcif("TYPE\nOBJECT\nATTRIBUTE\nINCIDENCE\n").unwrap();
        assert_eq!(doc, FcifDocument::default());
        let octx = doc.to_ordered_context().unwrap();
        assert_eq!(octx.base().object_count(), 0);
    }

    #[test]
    fn zero_attributes_keep_the_section() {
        let doc =
            FcifDocument { type_name: Some("FILE".into()), objects: vec![("a".into(), vec![])], ..Default::default() };
        let text = serialize_fcif(&doc);
        assert_eq!(text, "TYPE\n    FILE\nOBJECT\n    a {}\nATTRIBUTE\nINCIDENCE\n");
        assert_eq!(parse_fcif(&text).unwrap(), doc);
    }

    #[test]
    fn undeclared_references_report_lines() {
        let text = "TYPE\nOBJECT\n    a {}\nATTRIBUTE\n    x {}\nINCIDENCE\n    a {\n        y\n    }\n";
        let err = parse_fcif(text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 8, .. }), "{err:?}");
        let text = "TYPE\nOBJECT\n    a { b }\n";
        assert!(matches!(parse_fcif(text).unwrap_err(), Error::Parse { line: 3, .. }));
        let text = "TYPE\nOBJECT\nINCIDENCE\n    ghost {}\n";
        assert!(matches!(parse_fcif(text).unwrap_err(), Error::Parse { line: 4, .. }));
    }

    #[test]
    fn duplicate_rows_are_rejected() {
        assert!(parse_fcif("OBJECT\n    a {}\n    a {}\n").is_err());
        assert!(parse_fcif("ATTRIBUTE\n    x {}\n    x = \"\" {}\n").is_err());
    }

    #[test]
    fn object_cycles_fail_conversion() {
        let doc = parse_fcif("OBJECT\n    a { b }\n    b { a }\n").unwrap();
        assert!(matches!(doc.to_ordered_context(), Err(Error::Cycle("object", _))));
    }

    #[test]
    fn names_that_cannot_be_written_are_rejected() {
        let ctx = FormalContext::new(vec!["has space".into()], vec![], []).unwrap();
        assert!(FcifDocument::from_context(&ctx, None).is_err());
    }
}
