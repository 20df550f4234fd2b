//! Formal contexts and the two derivation operators.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::term::AttributeTerm;

/// A set of object or attribute indices.
pub type IndexSet = FixedBitSet;

/// Builds an index set of the given universe size from indices.
///
/// Indices past `len` grow the set, which derivation then rejects as an
/// index error.
pub fn index_set(len: usize, indices: impl IntoIterator<Item = usize>) -> IndexSet {
    let mut set = FixedBitSet::with_capacity(len);
    for i in indices {
        if i >= set.len() {
            set.grow(i + 1);
        }
        set.insert(i);
    }
    set
}

pub(crate) fn full_set(len: usize) -> IndexSet {
    let mut set = FixedBitSet::with_capacity(len);
    set.insert_range(..);
    set
}

/// Objects, attribute terms, and the incidence relation between them.
///
/// Rows and columns of the incidence are both kept so that each derivation
/// is a fold of bitset intersections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<AttributeTerm>,
    rows: Vec<FixedBitSet>,
    cols: Vec<FixedBitSet>,
}

impl FormalContext {
    pub fn new(
        objects: Vec<String>,
        attributes: Vec<AttributeTerm>,
        incidence: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for name in &objects {
            if name.is_empty() {
                return Err(Error::Validation("empty object name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateObject(name.clone()));
            }
        }
        let mut seen = HashSet::new();
        for term in &attributes {
            term.validate()?;
            if !seen.insert(term) {
                return Err(Error::Validation(format!("duplicate attribute `{term}`")));
            }
        }
        let (n, m) = (objects.len(), attributes.len());
        let mut rows = vec![FixedBitSet::with_capacity(m); n];
        let mut cols = vec![FixedBitSet::with_capacity(n); m];
        for (g, a) in incidence {
            if g >= n {
                return Err(Error::Index { kind: "object", index: g, len: n });
            }
            if a >= m {
                return Err(Error::Index { kind: "attribute", index: a, len: m });
            }
            rows[g].insert(a);
            cols[a].insert(g);
        }
        Ok(FormalContext { objects, attributes, rows, cols })
    }

    pub fn empty() -> Self {
        FormalContext { objects: Vec::new(), attributes: Vec::new(), rows: Vec::new(), cols: Vec::new() }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[AttributeTerm] {
        &self.attributes
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn attribute_index(&self, term: &AttributeTerm) -> Option<usize> {
        self.attributes.iter().position(|a| a == term)
    }

    /// Looks up a term as a user typed it. An exact match wins; otherwise a
    /// term with an empty value stands for the single declared attribute
    /// carrying that tag.
    pub fn resolve_term(&self, term: &AttributeTerm) -> Result<usize> {
        if let Some(m) = self.attribute_index(term) {
            return Ok(m);
        }
        let unknown = || Error::UnknownAttribute(term.to_string());
        if !term.value.is_empty() {
            return Err(unknown());
        }
        let mut matches = self.attributes.iter().enumerate().filter(|(_, a)| a.tag == term.tag);
        match (matches.next(), matches.next()) {
            (Some((m, _)), None) => Ok(m),
            (Some(_), Some(_)) => Err(Error::AmbiguousAttribute(term.tag.clone())),
            _ => Err(unknown()),
        }
    }

    pub fn has(&self, object: usize, attribute: usize) -> bool {
        self.rows.get(object).is_some_and(|r| r.contains(attribute))
    }

    /// Attributes of one object.
    pub fn row(&self, object: usize) -> &FixedBitSet {
        &self.rows[object]
    }

    /// Objects having one attribute.
    pub fn column(&self, attribute: usize) -> &FixedBitSet {
        &self.cols[attribute]
    }

    /// All incident (object, attribute) pairs, row by row.
    pub fn incidence(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().enumerate().flat_map(|(g, row)| row.ones().map(move |m| (g, m)))
    }

    pub fn incidence_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn object_set(&self, indices: impl IntoIterator<Item = usize>) -> IndexSet {
        index_set(self.object_count(), indices)
    }

    pub fn attribute_set(&self, indices: impl IntoIterator<Item = usize>) -> IndexSet {
        index_set(self.attribute_count(), indices)
    }

    pub fn all_objects(&self) -> IndexSet {
        full_set(self.object_count())
    }

    pub fn all_attributes(&self) -> IndexSet {
        full_set(self.attribute_count())
    }

    fn check(set: &IndexSet, len: usize, kind: &'static str) -> Result<()> {
        match set.ones().find(|&i| i >= len) {
            Some(index) => Err(Error::Index { kind, index, len }),
            None => Ok(()),
        }
    }

    /// Attributes shared by every object in `objects`; all attributes for
    /// the empty set.
    pub fn derive_intent(&self, objects: &IndexSet) -> Result<IndexSet> {
        Self::check(objects, self.object_count(), "object")?;
        Ok(self.intent_unchecked(objects))
    }

    /// Objects having every attribute in `attributes`; all objects for the
    /// empty set.
    pub fn derive_extent(&self, attributes: &IndexSet) -> Result<IndexSet> {
        Self::check(attributes, self.attribute_count(), "attribute")?;
        Ok(self.extent_unchecked(attributes))
    }

    pub(crate) fn intent_unchecked(&self, objects: &IndexSet) -> IndexSet {
        let mut out = self.all_attributes();
        for g in objects.ones() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    pub(crate) fn extent_unchecked(&self, attributes: &IndexSet) -> IndexSet {
        let mut out = self.all_objects();
        for m in attributes.ones() {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    /// The concept generated by a set of attributes: `(A', A'')`.
    pub fn concept_of_attributes(&self, attributes: &IndexSet) -> Result<Concept> {
        let extent = self.derive_extent(attributes)?;
        let intent = self.intent_unchecked(&extent);
        Ok(Concept { extent, intent })
    }

    /// The concept generated by a set of objects: `(B'', B')`.
    pub fn concept_of_objects(&self, objects: &IndexSet) -> Result<Concept> {
        let intent = self.derive_intent(objects)?;
        let extent = self.extent_unchecked(&intent);
        Ok(Concept { extent, intent })
    }

    pub(crate) fn with_incidence(&self, rows: Vec<FixedBitSet>) -> Self {
        let mut cols = vec![FixedBitSet::with_capacity(self.object_count()); self.attribute_count()];
        for (g, row) in rows.iter().enumerate() {
            for m in row.ones() {
                cols[m].insert(g);
            }
        }
        FormalContext { objects: self.objects.clone(), attributes: self.attributes.clone(), rows, cols }
    }

    pub(crate) fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }
}

/// A closed extent/intent pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: IndexSet,
    pub intent: IndexSet,
}
