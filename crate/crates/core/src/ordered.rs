//! Formal contexts with declared object and attribute orders.
//!
//! An object row `O { children }` declares each child as a specialization
//! (or typed part) of `O`; the child inherits every attribute of `O`. An
//! attribute row `A { children }` declares that having `A` implies having
//! every child.

use fixedbitset::FixedBitSet;

use crate::context::FormalContext;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedContext {
    base: FormalContext,
    object_children: Vec<Vec<usize>>,
    attribute_children: Vec<Vec<usize>>,
}

impl OrderedContext {
    /// Wraps a context with raw parent → children declarations, indexed
    /// like the base context's objects and attributes.
    ///
    /// Fails on out-of-range indices and on cycles in either declared order.
    pub fn new(
        base: FormalContext,
        object_children: Vec<Vec<usize>>,
        attribute_children: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let (n, m) = (base.object_count(), base.attribute_count());
        let object_children = pad(object_children, n, "object")?;
        let attribute_children = pad(attribute_children, m, "attribute")?;
        if let Some(g) = find_cycle(&object_children) {
            return Err(Error::Cycle("object", base.objects()[g].clone()));
        }
        if let Some(a) = find_cycle(&attribute_children) {
            return Err(Error::Cycle("attribute", base.attributes()[a].to_string()));
        }
        Ok(OrderedContext { base, object_children, attribute_children })
    }

    /// A context with no declared orders.
    pub fn discrete(base: FormalContext) -> Self {
        let n = base.object_count();
        let m = base.attribute_count();
        OrderedContext { base, object_children: vec![Vec::new(); n], attribute_children: vec![Vec::new(); m] }
    }

    pub fn base(&self) -> &FormalContext {
        &self.base
    }

    pub fn object_children(&self) -> &[Vec<usize>] {
        &self.object_children
    }

    pub fn attribute_children(&self) -> &[Vec<usize>] {
        &self.attribute_children
    }

    pub fn has_declared_order(&self) -> bool {
        self.object_children.iter().chain(&self.attribute_children).any(|c| !c.is_empty())
    }

    /// Least superset of the incidence that respects both declared orders.
    ///
    /// Every object receives the attributes of all its ancestors, then
    /// every row is closed under the attribute implications. Both steps
    /// are monotone, so one pass of each reaches the fixpoint.
    pub fn order_close_incidence(&self) -> FormalContext {
        let n = self.base.object_count();
        let mut rows: Vec<FixedBitSet> = self.base.rows().to_vec();

        // descendants inherit from ancestors: walk from each object down
        for g in 0..n {
            let inherited = self.base.row(g).clone();
            for d in reachable(&self.object_children, g) {
                rows[d].union_with(&inherited);
            }
        }

        let implied: Vec<FixedBitSet> = (0..self.base.attribute_count())
            .map(|a| {
                let mut set = FixedBitSet::with_capacity(self.base.attribute_count());
                set.extend(reachable(&self.attribute_children, a));
                set
            })
            .collect();
        for row in &mut rows {
            let mut closed = row.clone();
            for a in row.ones() {
                closed.union_with(&implied[a]);
            }
            *row = closed;
        }

        self.base.with_incidence(rows)
    }

    /// The order-closed incidence with the declared orders kept.
    pub fn closed(&self) -> OrderedContext {
        OrderedContext {
            base: self.order_close_incidence(),
            object_children: self.object_children.clone(),
            attribute_children: self.attribute_children.clone(),
        }
    }
}

fn pad(mut children: Vec<Vec<usize>>, len: usize, kind: &'static str) -> Result<Vec<Vec<usize>>> {
    if children.len() > len {
        return Err(Error::Index { kind, index: children.len() - 1, len });
    }
    children.resize(len, Vec::new());
    for list in &children {
        if let Some(&index) = list.iter().find(|&&c| c >= len) {
            return Err(Error::Index { kind, index, len });
        }
    }
    Ok(children)
}

/// Nodes strictly reachable from `start` by following child edges.
fn reachable(children: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut seen = vec![false; children.len()];
    let mut stack: Vec<usize> = children[start].clone();
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        if !seen[v] {
            seen[v] = true;
            out.push(v);
            stack.extend(&children[v]);
        }
    }
    out
}

pub(crate) fn find_cycle(children: &[Vec<usize>]) -> Option<usize> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut marks = vec![Mark::New; children.len()];
    for root in 0..children.len() {
        if marks[root] != Mark::New {
            continue;
        }
        // iterative DFS: (node, next child position)
        let mut stack = vec![(root, 0usize)];
        marks[root] = Mark::Active;
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            if let Some(&c) = children[v].get(*pos) {
                *pos += 1;
                match marks[c] {
                    Mark::Active => return Some(c),
                    Mark::New => {
                        marks[c] = Mark::Active;
                        stack.push((c, 0));
                    }
                    Mark::Done => {}
                }
            } else {
                marks[v] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::AttributeTerm;

    fn terms(names: &[&str]) -> Vec<AttributeTerm> {
        names.iter().map(|t| AttributeTerm::bare(*t).unwrap()).collect()
    }

    #[test]
    fn objects_inherit_from_ancestors() {
        // root { mid }, mid { leaf }
        let base = FormalContext::new(
            vec!["root".into(), "mid".into(), "leaf".into()],
            terms(&["a", "b", "c"]),
            [(0, 0), (1, 1), (2, 2)],
        )
        .unwrap();
        let octx = OrderedContext::new(base, vec![vec![1], vec![2], vec![]], vec![]).unwrap();
        let closed = octx.order_close_incidence();
        let leaf: Vec<_> = closed.row(2).ones().collect();
        assert_eq!(leaf, vec![0, 1, 2]);
        assert_eq!(closed.row(0).ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn attribute_implications_apply_transitively() {
        // a { b }, b { c }
        let base = FormalContext::new(vec!["g".into(), "h".into()], terms(&["a", "b", "c"]), [(0, 0), (1, 1)]).unwrap();
        let octx = OrderedContext::new(base, vec![], vec![vec![1], vec![2], vec![]]).unwrap();
        let closed = octx.order_close_incidence();
        assert_eq!(closed.row(0).ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(closed.row(1).ones().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn inherited_attributes_are_then_implied() {
        // parent has a; a implies b; child must get both
        let base = FormalContext::new(vec!["p".into(), "c".into()], terms(&["a", "b"]), [(0, 0)]).unwrap();
        let octx = OrderedContext::new(base, vec![vec![1], vec![]], vec![vec![1], vec![]]).unwrap();
        let closed = octx.order_close_incidence();
        assert_eq!(closed.incidence_count(), 4);
    }

    #[test]
    fn rejects_cycles() {
        let base = FormalContext::new(vec!["x".into(), "y".into()], terms(&["a"]), []).unwrap();
        let err = OrderedContext::new(base.clone(), vec![vec![1], vec![0]], vec![]).unwrap_err();
        assert!(matches!(err, Error::Cycle("object", _)));
        let err = OrderedContext::new(base.clone(), vec![vec![0], vec![]], vec![]).unwrap_err();
        assert!(matches!(err, Error::Cycle("object", _)));
        let err = OrderedContext::new(base, vec![], vec![vec![0]]).unwrap_err();
        assert!(matches!(err, Error::Cycle("attribute", _)));
    }

    #[test]
    fn discrete_order_changes_nothing() {
        let base = FormalContext::new(vec!["x".into()], terms(&["a", "b"]), [(0, 1)]).unwrap();
        let octx = OrderedContext::discrete(base.clone());
        assert_eq!(octx.order_close_incidence(), base);
    }

    #[test]
    fn rejects_out_of_range_children() {
        let base = FormalContext::new(vec!["x".into()], terms(&["a"]), []).unwrap();
        assert!(OrderedContext::new(base, vec![vec![3]], vec![]).is_err());
    }
}
