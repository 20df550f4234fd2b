//! Conversions between the interchange formats and raw records.

use std::collections::HashSet;

use super::clif::ClifDocument;
use super::fcif::FcifDocument;
use super::soif::SoifTemplate;
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::ConceptLattice;
use crate::scaling::{apply_scales, RawRecord, ScaleSet};

/// Order-closes the document's incidence, builds its lattice and writes
/// the lattice as CLIF.
pub fn fcif_to_clif(doc: &FcifDocument) -> Result<ClifDocument> {
    let ctx = doc.to_ordered_context()?.order_close_incidence();
    let lattice = ConceptLattice::new(ctx);
    Ok(ClifDocument::from_lattice(&lattice, doc.type_name.clone()))
}

/// Rebuilds a formal context from a CLIF document: object `g` has
/// attribute `m` iff the class generating `g` lies at or below the class
/// generating `m`.
pub fn clif_to_context(doc: &ClifDocument) -> Result<FormalContext> {
    doc.validate()?;
    let p = doc.class_count();
    let successors = doc.successor_lists();
    // below[k]: classes reachable downward from k, including k
    let below: Vec<Vec<bool>> = (0..p)
        .map(|k| {
            let mut seen = vec![false; p];
            let mut stack = vec![k];
            while let Some(c) = stack.pop() {
                if !std::mem::replace(&mut seen[c], true) {
                    stack.extend(&successors[c]);
                }
            }
            seen
        })
        .collect();

    let mut object_class = Vec::new();
    let mut objects = Vec::new();
    for (k, names) in &doc.object_generators {
        for name in names {
            objects.push(name.clone());
            object_class.push(k - 1);
        }
    }
    let mut attribute_class = Vec::new();
    let mut attributes = Vec::new();
    for (k, terms) in &doc.attribute_generators {
        for term in terms {
            attributes.push(term.clone());
            attribute_class.push(k - 1);
        }
    }
    let mut pairs = Vec::new();
    for (g, &cg) in object_class.iter().enumerate() {
        for (m, &cm) in attribute_class.iter().enumerate() {
            if below[cm][cg] {
                pairs.push((g, m));
            }
        }
    }
    FormalContext::new(objects, attributes, pairs)
}

/// The FCIF form of [`clif_to_context`]. Object and attribute rows carry
/// no children since the declared orders are not recoverable.
pub fn clif_to_fcif(doc: &ClifDocument) -> Result<FcifDocument> {
    FcifDocument::from_context(&clif_to_context(doc)?, doc.type_name.clone())
}

/// One record per template, named by its URL, pairs in order.
pub fn soif_to_records(templates: &[SoifTemplate]) -> Result<Vec<RawRecord>> {
    let mut seen = HashSet::new();
    templates
        .iter()
        .map(|t| {
            if !seen.insert(t.url.as_str()) {
                return Err(Error::DuplicateObject(t.url.clone()));
            }
            let mut record = RawRecord::new(t.url.clone());
            for (name, value) in &t.pairs {
                record = record.with_pair(name.clone(), super::decode_text(value));
            }
            Ok(record)
        })
        .collect()
}

/// The template type shared by every template, if there is one.
pub fn soif_common_type(templates: &[SoifTemplate]) -> Option<String> {
    let first = templates.first()?;
    templates.iter().all(|t| t.template_type == first.template_type).then(|| first.template_type.clone())
}

/// Scales raw records and writes the result as FCIF.
pub fn records_to_fcif(records: &[RawRecord], scales: &ScaleSet, type_name: Option<String>) -> Result<FcifDocument> {
    FcifDocument::from_ordered_context(&apply_scales(records, scales)?, type_name)
}
