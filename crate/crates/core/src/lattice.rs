//! Concept lattice construction and navigation.
//!
//! Intents are enumerated with NextClosure in lectic order, then all
//! concepts are sorted into the canonical order: descending extent size,
//! ties broken by comparing extents as ascending index lists. Concept ids
//! are positions in that order, so the top is always id 0 and every
//! concept appears after all of its superconcepts.

use std::cmp::Ordering;
use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::context::{Concept, FormalContext, IndexSet};
use crate::error::{Error, Result};

pub type ConceptId = usize;

#[derive(Debug, Clone)]
pub struct ConceptLattice {
    context: FormalContext,
    concepts: Vec<Concept>,
    lower_covers: Vec<Vec<ConceptId>>,
    upper_covers: Vec<Vec<ConceptId>>,
    gamma: Vec<ConceptId>,
    mu: Vec<ConceptId>,
    by_extent: HashMap<FixedBitSet, ConceptId>,
}

/// All intents of `ctx` in lectic order (Ganter's NextClosure).
fn next_closure_intents(ctx: &FormalContext) -> Vec<IndexSet> {
    let m = ctx.attribute_count();
    let closure = |set: &IndexSet| ctx.intent_unchecked(&ctx.extent_unchecked(set));
    let mut current = closure(&FixedBitSet::with_capacity(m));
    let mut out = vec![current.clone()];
    'outer: loop {
        for i in (0..m).rev() {
            if current.contains(i) {
                current.set(i, false);
                continue;
            }
            let mut candidate = current.clone();
            candidate.insert(i);
            let closed = closure(&candidate);
            // accept iff the closure adds nothing below i
            let new_below_i = closed.ones().take_while(|&j| j < i).any(|j| !current.contains(j));
            if !new_below_i {
                current = closed;
                out.push(current.clone());
                continue 'outer;
            }
        }
        break;
    }
    out
}

fn canonical_cmp(a: &Concept, b: &Concept) -> Ordering {
    b.extent.count_ones(..).cmp(&a.extent.count_ones(..)).then_with(|| a.extent.ones().cmp(b.extent.ones()))
}

impl ConceptLattice {
    /// Computes every concept of `context` together with the cover
    /// relation and the object/attribute generator maps.
    pub fn new(context: FormalContext) -> Self {
        let mut concepts: Vec<Concept> = next_closure_intents(&context)
            .into_iter()
            .map(|intent| Concept { extent: context.extent_unchecked(&intent), intent })
            .collect();
        concepts.sort_by(canonical_cmp);

        let by_extent: HashMap<FixedBitSet, ConceptId> =
            concepts.iter().enumerate().map(|(i, c)| (c.extent.clone(), i)).collect();

        let lower_covers: Vec<Vec<ConceptId>> =
            concepts.iter().map(|c| Self::lower_covers_of(&context, &by_extent, &concepts, c)).collect();
        let mut upper_covers = vec![Vec::new(); concepts.len()];
        for (upper, lowers) in lower_covers.iter().enumerate() {
            for &l in lowers {
                upper_covers[l].push(upper);
            }
        }

        let lookup = |extent: &FixedBitSet| by_extent[extent];
        let gamma = (0..context.object_count())
            .map(|g| {
                let single = context.object_set([g]);
                lookup(&context.extent_unchecked(&context.intent_unchecked(&single)))
            })
            .collect();
        let mu = (0..context.attribute_count())
            .map(|a| lookup(&context.extent_unchecked(&context.attribute_set([a]))))
            .collect();

        ConceptLattice { context, concepts, lower_covers, upper_covers, gamma, mu, by_extent }
    }

    /// Lower covers of `c` are the maximal concepts among the closures of
    /// `intent(c) + m` for each attribute `m` outside the intent.
    fn lower_covers_of(
        ctx: &FormalContext,
        by_extent: &HashMap<FixedBitSet, ConceptId>,
        concepts: &[Concept],
        c: &Concept,
    ) -> Vec<ConceptId> {
        let mut candidates: Vec<ConceptId> = Vec::new();
        for m in 0..ctx.attribute_count() {
            if c.intent.contains(m) {
                continue;
            }
            let mut extent = c.extent.clone();
            extent.intersect_with(ctx.column(m));
            let id = by_extent[&extent];
            if !candidates.contains(&id) {
                candidates.push(id);
            }
        }
        let mut covers: Vec<ConceptId> = candidates
            .iter()
            .copied()
            .filter(|&x| !candidates.iter().any(|&y| y != x && concepts[x].extent.is_subset(&concepts[y].extent)))
            .collect();
        covers.sort_unstable();
        covers
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, id: ConceptId) -> Result<&Concept> {
        self.concepts.get(id).ok_or(Error::Index { kind: "concept", index: id, len: self.concepts.len() })
    }

    pub fn top(&self) -> ConceptId {
        0
    }

    pub fn bottom(&self) -> ConceptId {
        self.concepts.len() - 1
    }

    /// Immediate proper subconcepts of each concept, ascending ids.
    pub fn lower_covers(&self) -> &[Vec<ConceptId>] {
        &self.lower_covers
    }

    pub fn upper_covers(&self) -> &[Vec<ConceptId>] {
        &self.upper_covers
    }

    pub fn edge_count(&self) -> usize {
        self.lower_covers.iter().map(Vec::len).sum()
    }

    /// The object concept map (least concept containing each object).
    pub fn gamma(&self) -> &[ConceptId] {
        &self.gamma
    }

    /// The attribute concept map (greatest concept having each attribute).
    pub fn mu(&self) -> &[ConceptId] {
        &self.mu
    }

    pub fn generator_maps(&self) -> (&[ConceptId], &[ConceptId]) {
        (&self.gamma, &self.mu)
    }

    /// Looks up the concept with exactly this extent.
    pub fn find_by_extent(&self, extent: &IndexSet) -> Option<ConceptId> {
        self.by_extent.get(extent).copied()
    }

    /// `c1 <= c2`: `c1` is at least as specific as `c2`.
    pub fn leq(&self, c1: ConceptId, c2: ConceptId) -> Result<bool> {
        let a = self.concept(c1)?;
        let b = self.concept(c2)?;
        Ok(a.extent.is_subset(&b.extent))
    }

    /// Least upper bound; the empty join is the bottom.
    pub fn join(&self, ids: &[ConceptId]) -> Result<ConceptId> {
        let mut intent = self.context.all_attributes();
        for &id in ids {
            intent.intersect_with(&self.concept(id)?.intent);
        }
        Ok(self.by_extent[&self.context.extent_unchecked(&intent)])
    }

    /// Greatest lower bound; the empty meet is the top.
    pub fn meet(&self, ids: &[ConceptId]) -> Result<ConceptId> {
        let mut extent = self.context.all_objects();
        for &id in ids {
            extent.intersect_with(&self.concept(id)?.extent);
        }
        let closed = self.context.extent_unchecked(&self.context.intent_unchecked(&extent));
        Ok(self.by_extent[&closed])
    }

    /// Objects whose object concept is `id` (reduced labeling).
    pub fn object_labels(&self, id: ConceptId) -> Vec<usize> {
        (0..self.gamma.len()).filter(|&g| self.gamma[g] == id).collect()
    }

    /// Attributes whose attribute concept is `id` (reduced labeling).
    pub fn attribute_labels(&self, id: ConceptId) -> Vec<usize> {
        (0..self.mu.len()).filter(|&m| self.mu[m] == id).collect()
    }
}

/// Free-function form of lattice construction.
pub fn enumerate_concepts(ctx: &FormalContext) -> ConceptLattice {
    ConceptLattice::new(ctx.clone())
}
