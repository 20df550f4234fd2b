//! Concept Lattice Interchange Format.
//!
//! Classes are numbered from 1 in canonical concept order, so class 1 is
//! the top. `GENERATOR:OBJECT` lists the objects whose object concept is
//! the class, `GENERATOR:ATTRIBUTE` the attributes whose attribute concept
//! is the class, and `SUCCESSOR` the class's lower covers (immediate
//! subclasses). An optional trailing `LAYOUT` section is accepted and
//! ignored on input.

use std::collections::HashSet;

use super::lex::{self, check_name, parse_index};
use crate::error::{parse_err, Error, Result};
use crate::lattice::ConceptLattice;
use crate::ordered::find_cycle;
use crate::term::AttributeTerm;

const FORMAT: &str = "CLIF";
const SECTIONS: &[&str] = &["TYPE", "GENERATOR:OBJECT", "GENERATOR:ATTRIBUTE", "SUCCESSOR", "LAYOUT"];

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClifDocument {
    pub type_name: Option<String>,
    pub object_generators: Vec<(usize, Vec<String>)>,
    pub attribute_generators: Vec<(usize, Vec<AttributeTerm>)>,
    pub successors: Vec<(usize, Vec<usize>)>,
}

pub fn parse_clif(text: &str) -> Result<ClifDocument> {
    let sections = lex::lex(FORMAT, text, SECTIONS)?;
    let find = |kw: &str| sections.iter().find(|s| s.keyword == kw);
    let mut doc = ClifDocument { type_name: lex::type_name(FORMAT, find("TYPE"))?, ..Default::default() };

    let check_dup = |seen: &mut HashSet<usize>, k: usize, line: usize| {
        if seen.insert(k) {
            Ok(())
        } else {
            Err(parse_err(FORMAT, line, format!("class {k} listed twice")))
        }
    };

    if let Some(section) = find("GENERATOR:OBJECT") {
        let mut seen = HashSet::new();
        for entry in &section.entries {
            let k = entry.key_index(FORMAT)?;
            check_dup(&mut seen, k, entry.line)?;
            let mut names = Vec::new();
            for (line, token) in entry.tokens() {
                check_name(token).map_err(|e| parse_err(FORMAT, line, e.to_string()))?;
                names.push(token.to_string());
            }
            doc.object_generators.push((k, names));
        }
    }
    if let Some(section) = find("GENERATOR:ATTRIBUTE") {
        let mut seen = HashSet::new();
        for entry in &section.entries {
            let k = entry.key_index(FORMAT)?;
            check_dup(&mut seen, k, entry.line)?;
            let terms = entry.terms(FORMAT)?.into_iter().map(|(_, t)| t).collect();
            doc.attribute_generators.push((k, terms));
        }
    }
    if let Some(section) = find("SUCCESSOR") {
        let mut seen = HashSet::new();
        for entry in &section.entries {
            let k = entry.key_index(FORMAT)?;
            check_dup(&mut seen, k, entry.line)?;
            let succ =
                entry.tokens().into_iter().map(|(line, t)| parse_index(FORMAT, line, t)).collect::<Result<Vec<_>>>()?;
            doc.successors.push((k, succ));
        }
    }
    if let Some(section) = find("LAYOUT") {
        for entry in &section.entries {
            entry.key_index(FORMAT)?;
        }
    }
    doc.validate()?;
    Ok(doc)
}

pub fn serialize_clif(doc: &ClifDocument) -> String {
    let mut out = String::new();
    lex::write_type(&mut out, doc.type_name.as_deref());
    out.push_str("GENERATOR:OBJECT\n");
    for (k, names) in &doc.object_generators {
        lex::write_token_row(&mut out, &k.to_string(), names);
    }
    out.push_str("GENERATOR:ATTRIBUTE\n");
    for (k, terms) in &doc.attribute_generators {
        lex::write_term_row(&mut out, &k.to_string(), terms);
    }
    out.push_str("SUCCESSOR\n");
    for (k, succ) in &doc.successors {
        let succ: Vec<String> = succ.iter().map(usize::to_string).collect();
        lex::write_token_row(&mut out, &k.to_string(), &succ);
    }
    out
}

impl ClifDocument {
    /// Number of classes (the largest class index mentioned).
    pub fn class_count(&self) -> usize {
        self.indices().max().unwrap_or(0)
    }

    fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.object_generators
            .iter()
            .map(|(k, _)| *k)
            .chain(self.attribute_generators.iter().map(|(k, _)| *k))
            .chain(self.successors.iter().flat_map(|(k, s)| std::iter::once(*k).chain(s.iter().copied())))
    }

    /// Lower covers per class, 0-based.
    pub fn successor_lists(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.class_count()];
        for (k, succ) in &self.successors {
            lists[k - 1].extend(succ.iter().map(|s| s - 1));
        }
        lists
    }

    /// Checks contiguous class indices, unique generators, and an acyclic
    /// successor graph with a single maximal class.
    pub fn validate(&self) -> Result<()> {
        let p = self.class_count();
        let mut present = vec![false; p];
        for k in self.indices() {
            if k == 0 {
                return Err(Error::Validation("class index 0".into()));
            }
            present[k - 1] = true;
        }
        if let Some(missing) = present.iter().position(|&x| !x) {
            return Err(Error::Validation(format!(
                "class indices are not contiguous: {} missing of 1..{p}",
                missing + 1
            )));
        }
        let mut objects = HashSet::new();
        for name in self.object_generators.iter().flat_map(|(_, n)| n) {
            if !objects.insert(name) {
                return Err(Error::Validation(format!("object `{name}` generated by two classes")));
            }
        }
        let mut terms = HashSet::new();
        for term in self.attribute_generators.iter().flat_map(|(_, t)| t) {
            if !terms.insert(term) {
                return Err(Error::Validation(format!("attribute `{term}` generated by two classes")));
            }
        }
        let lists = self.successor_lists();
        if let Some(k) = find_cycle(&lists) {
            return Err(Error::Cycle("class", (k + 1).to_string()));
        }
        let mut has_parent = vec![false; p];
        for s in lists.iter().flatten() {
            has_parent[*s] = true;
        }
        let maximal = has_parent.iter().filter(|&&x| !x).count();
        if p > 0 && maximal != 1 {
            return Err(Error::Validation(format!("successor graph has {maximal} maximal classes")));
        }
        Ok(())
    }

    /// Writes a lattice: one row per class in every section.
    pub fn from_lattice(lat: &ConceptLattice, type_name: Option<String>) -> Self {
        let ctx = lat.context();
        let mut doc =
            ClifDocument { type_name: type_name.filter(|t| !t.chars().all(|c| c == '?')), ..Default::default() };
        for id in 0..lat.len() {
            let k = id + 1;
            doc.object_generators
                .push((k, lat.object_labels(id).into_iter().map(|g| ctx.objects()[g].clone()).collect()));
            doc.attribute_generators
                .push((k, lat.attribute_labels(id).into_iter().map(|m| ctx.attributes()[m].clone()).collect()));
            doc.successors.push((k, lat.lower_covers()[id].iter().map(|c| c + 1).collect()));
        }
        doc
    }
}
