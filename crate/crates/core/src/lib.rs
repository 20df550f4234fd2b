//! Formal concept analysis over resource meta-information.
//!
//! Raw records (SOIF templates, URCs) are scaled into ordered formal
//! contexts, whose concept lattices can be written as FCIF or CLIF and
//! drawn as layered line diagrams.

pub mod context;
pub mod diagram;
pub mod error;
pub mod formats;
pub mod lattice;
pub mod ordered;
pub mod scaling;
pub mod term;

pub use context::{index_set, Concept, FormalContext, IndexSet};
pub use diagram::{assign_layers, emit_dot, emit_json, layout_coordinates, DiagramDoc, DiagramNode, Layout};
pub use error::{Error, Result};
pub use lattice::{enumerate_concepts, ConceptId, ConceptLattice};
pub use ordered::OrderedContext;
pub use scaling::{apply_scales, RawRecord, Scale, ScaleSet};
pub use term::{parse_term, AttributeTerm, Op};
