use std::path::Path;

use anyhow::Result;
use facet_lattice::{AttributeTerm, ConceptId, ConceptLattice, DiagramDoc, Error, IndexSet, Layout, OrderedContext};
use serde::Serialize;

use crate::input::{read_document, scale_set, to_context, Format};

/// A loaded context with its lattice and diagram layout.
///
/// Built in one step and never mutated, so the lattice and layout always
/// describe the loaded context.
#[derive(Debug)]
pub struct Session {
    pub source: String,
    pub context: OrderedContext,
    pub lattice: ConceptLattice,
    pub layout: Layout,
    pub type_name: Option<String>,
}

/// One concept as the service reports it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConceptView {
    pub id: ConceptId,
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
    pub objects: Vec<String>,
    pub attributes: Vec<AttributeTerm>,
    pub object_labels: Vec<String>,
    pub attribute_labels: Vec<AttributeTerm>,
    pub upper_covers: Vec<ConceptId>,
    pub lower_covers: Vec<ConceptId>,
}

impl Session {
    pub fn new(source: impl Into<String>, context: OrderedContext, type_name: Option<String>) -> Self {
        let lattice = ConceptLattice::new(context.order_close_incidence());
        let layout = Layout::of(&lattice);
        Session { source: source.into(), context, lattice, layout, type_name }
    }

    pub fn load(path: &Path, from: Option<Format>, scales: Option<&str>) -> Result<Self> {
        let format = Format::resolve(path, from)?;
        let doc = read_document(path, format)?;
        let loaded = to_context(&doc, &scale_set(scales, format)?)?;
        Ok(Session::new(path.display().to_string(), loaded.context, loaded.type_name))
    }

    pub fn diagram(&self) -> DiagramDoc {
        DiagramDoc::new(&self.lattice, &self.layout, self.type_name.clone())
    }

    pub fn view(&self, id: ConceptId) -> Result<ConceptView, Error> {
        let lat = &self.lattice;
        let ctx = lat.context();
        let c = lat.concept(id)?;
        let objects = |ids: &mut dyn Iterator<Item = usize>| ids.map(|g| ctx.objects()[g].clone()).collect();
        let terms = |ids: &mut dyn Iterator<Item = usize>| ids.map(|m| ctx.attributes()[m].clone()).collect();
        Ok(ConceptView {
            id,
            extent: c.extent.ones().collect(),
            intent: c.intent.ones().collect(),
            objects: objects(&mut c.extent.ones()),
            attributes: terms(&mut c.intent.ones()),
            object_labels: objects(&mut lat.object_labels(id).into_iter()),
            attribute_labels: terms(&mut lat.attribute_labels(id).into_iter()),
            upper_covers: lat.upper_covers()[id].clone(),
            lower_covers: lat.lower_covers()[id].clone(),
        })
    }

    /// The concept generated by a set of attribute terms.
    pub fn query(&self, terms: &[AttributeTerm]) -> Result<ConceptId, Error> {
        let ctx = self.lattice.context();
        let ids = terms.iter().map(|t| ctx.resolve_term(t)).collect::<Result<Vec<_>, _>>()?;
        let concept = ctx.concept_of_attributes(&ctx.attribute_set(ids))?;
        Ok(self.by_extent(&concept.extent))
    }

    /// Drills down from `concept` by one attribute: the meet with the
    /// attribute's concept.
    pub fn refine(&self, concept: ConceptId, term: &AttributeTerm) -> Result<ConceptId, Error> {
        let m = self.lattice.context().resolve_term(term)?;
        self.lattice.meet(&[concept, self.lattice.mu()[m]])
    }

    pub fn object_concept(&self, name: &str) -> Result<ConceptId, Error> {
        let g = self.lattice.context().object_index(name).ok_or_else(|| Error::UnknownObject(name.to_string()))?;
        Ok(self.lattice.gamma()[g])
    }

    fn by_extent(&self, extent: &IndexSet) -> ConceptId {
        self.lattice.find_by_extent(extent).expect("closed extents are concepts")
    }
}
