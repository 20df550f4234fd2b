//! Generators for random contexts and documents, shared by the property
//! tests and the acceptance suite.

use std::collections::BTreeSet;

use facet_lattice::formats::*;
use facet_lattice::{AttributeTerm, FormalContext, Op, OrderedContext};
use proptest::collection::{btree_set, vec};
use proptest::prelude::*;
use proptest::sample::subsequence;

pub fn name() -> impl Strategy<Value = String> {
    "[A-Za-z0-9][A-Za-z0-9:/._~%+-]{0,14}"
}

pub fn term() -> impl Strategy<Value = AttributeTerm> {
    (
        "[A-Za-z][A-Za-z0-9:_.-]{0,8}( [a-z]{1,3})?",
        prop_oneof![Just(Op::Equals), Just(Op::AtMost)],
        "[ -~\t\né≤{}]{0,12}",
    )
        .prop_map(|(tag, op, value)| AttributeTerm::new(tag, op, value).unwrap())
}

pub fn distinct_terms(max: usize) -> impl Strategy<Value = Vec<AttributeTerm>> {
    vec(term(), 0..=max).prop_map(|ts| {
        let mut seen = BTreeSet::new();
        ts.into_iter().filter(|t| seen.insert(t.clone())).collect()
    })
}

pub fn type_name() -> impl Strategy<Value = Option<String>> {
    proptest::option::of("[A-Z][A-Za-z0-9_-]{0,7}")
}

pub fn fcif_document() -> impl Strategy<Value = FcifDocument> {
    (type_name(), btree_set(name(), 0..6), distinct_terms(6))
        .prop_flat_map(|(ty, objects, terms)| {
            let objects: Vec<String> = objects.into_iter().collect();
            let no = objects.len();
            let nt = terms.len();
            (
                Just(ty),
                Just(objects.clone()),
                Just(terms.clone()),
                vec(subsequence(objects.clone(), 0..=no), no),
                vec(subsequence(terms.clone(), 0..=nt), nt),
                subsequence(objects, 0..=no),
                vec(subsequence(terms, 0..=nt), no),
            )
        })
        .prop_map(|(type_name, objects, terms, okids, tkids, rows, row_terms)| FcifDocument {
            type_name,
            objects: objects.into_iter().zip(okids).collect(),
            attributes: terms.into_iter().zip(tkids).collect(),
            incidence: rows.into_iter().zip(row_terms).collect(),
        })
}

pub fn clif_document() -> impl Strategy<Value = ClifDocument> {
    (1usize..7)
        .prop_flat_map(|p| {
            (
                Just(p),
                type_name(),
                vec(vec(0usize..p, 0..3), p),
                vec(0usize..p, p),
                btree_set(name(), 0..6),
                vec(0usize..p, 6),
                distinct_terms(6),
                vec(0usize..p, 6),
            )
        })
        .prop_map(|(p, type_name, extra, parent, objects, oclass, terms, tclass)| {
            let mut successors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); p];
            for k in 1..p {
                successors[parent[k] % k].insert(k);
                for &t in &extra[k] {
                    if t > k {
                        successors[k].insert(t);
                    }
                }
            }
            let mut object_generators: Vec<Vec<String>> = vec![Vec::new(); p];
            for (o, c) in objects.into_iter().zip(oclass) {
                object_generators[c].push(o);
            }
            let mut attribute_generators: Vec<Vec<AttributeTerm>> = vec![Vec::new(); p];
            for (t, c) in terms.into_iter().zip(tclass) {
                attribute_generators[c].push(t);
            }
            ClifDocument {
                type_name,
                object_generators: object_generators.into_iter().enumerate().map(|(k, v)| (k + 1, v)).collect(),
                attribute_generators: attribute_generators.into_iter().enumerate().map(|(k, v)| (k + 1, v)).collect(),
                successors: successors
                    .into_iter()
                    .enumerate()
                    .map(|(k, s)| (k + 1, s.into_iter().map(|x| x + 1).collect()))
                    .collect(),
            }
        })
}

pub fn soif_template() -> impl Strategy<Value = SoifTemplate> {
    ("[A-Z]{1,6}", "[a-z]{2,5}://[!-~]{1,20}", vec(("[A-Za-z][A-Za-z0-9-]{0,12}", vec(any::<u8>(), 0..40)), 0..5))
        .prop_map(|(ty, url, pairs)| SoifTemplate { template_type: ty, url, pairs })
}

pub fn soif_stream() -> impl Strategy<Value = SoifStream> {
    vec(
        prop_oneof![
            soif_template().prop_map(SoifItem::Template),
            ("[A-Z]{1,6}", vec(soif_template(), 0..3))
                .prop_map(|(group_type, members)| SoifItem::Group { group_type, members }),
        ],
        0..4,
    )
    .prop_map(|items| SoifStream { items })
}

pub fn urc_pair() -> impl Strategy<Value = (String, String)> {
    ("[A-Za-z][A-Za-z0-9-]{0,10}", "([!-~]([ -~]{0,15}[!-~])?)?")
        .prop_filter("reserved key", |(k, _)| !k.eq_ignore_ascii_case("url") && !k.eq_ignore_ascii_case("urn"))
}

pub fn urc_record() -> impl Strategy<Value = UrcRecord> {
    (
        proptest::option::of("URN:[!-~]{1,20}"),
        vec(urc_pair(), 0..4),
        vec(("[!-;=?-~]{1,20}", vec(urc_pair(), 0..4)), 0..4),
    )
        .prop_map(|(urn, global_pairs, locs)| UrcRecord {
            urn,
            global_pairs,
            locations: locs.into_iter().map(|(url, pairs)| UrcLocation { label: "URL".into(), url, pairs }).collect(),
        })
}

pub fn sgml_pair() -> impl Strategy<Value = (String, String)> {
    ("[a-z][A-Za-z0-9]{0,8}", "([!-~]([ -~]{0,15}[!-~])?)?")
        .prop_filter("structural element", |(k, _)| !urc::is_structural_element(k))
}

pub fn sgml_record() -> impl Strategy<Value = UrcRecord> {
    (
        proptest::option::of("urn:[!-~]{1,20}"),
        vec(sgml_pair(), 0..4),
        vec(("[!-~]{1,20}", vec(sgml_pair(), 0..4)), 0..4),
    )
        .prop_map(|(urn, global_pairs, locs)| UrcRecord {
            urn,
            global_pairs,
            locations: locs.into_iter().map(|(url, pairs)| UrcLocation { label: "url".into(), url, pairs }).collect(),
        })
}

pub fn table_context() -> impl Strategy<Value = FormalContext> {
    (btree_set("[!-~]([ -~]{0,10}[!-~])?", 0..6), distinct_terms(6))
        .prop_flat_map(|(objects, terms)| {
            let n = objects.len() * terms.len();
            (Just(objects), Just(terms), vec(any::<bool>(), n))
        })
        .prop_map(|(objects, terms, cells)| {
            let m = terms.len();
            let pairs: Vec<_> = (0..objects.len())
                .flat_map(|g| (0..m).map(move |a| (g, a)))
                .filter(|&(g, a)| cells[g * m + a])
                .collect();
            FormalContext::new(objects.into_iter().collect(), terms, pairs).unwrap()
        })
}

pub fn context_strategy(max: usize) -> impl Strategy<Value = FormalContext> {
    (0..=max, 0..=max)
        .prop_flat_map(|(n, m)| (Just(n), Just(m), proptest::collection::vec(any::<bool>(), n * m)))
        .prop_map(|(n, m, cells)| {
            let objects = (0..n).map(|g| format!("g{g}")).collect();
            let attributes = (0..m).map(|a| AttributeTerm::bare(format!("m{a}")).unwrap()).collect();
            let pairs = (0..n).flat_map(|g| (0..m).map(move |a| (g, a))).filter(|&(g, a)| cells[g * m + a]);
            FormalContext::new(objects, attributes, pairs).unwrap()
        })
}

/// Child lists pointing only at higher indices, so the order is acyclic.
pub fn forward_children(len: usize, picks: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut kids = vec![BTreeSet::new(); len];
    for &(a, b) in picks {
        if len > 1 {
            let (a, b) = (a % len, b % len);
            if a < b {
                kids[a].insert(b);
            }
        }
    }
    kids.into_iter().map(|s| s.into_iter().collect()).collect()
}

pub fn ordered_strategy() -> impl Strategy<Value = OrderedContext> {
    (
        context_strategy(7),
        proptest::collection::vec((0usize..8, 0usize..8), 0..6),
        proptest::collection::vec((0usize..8, 0usize..8), 0..6),
    )
        .prop_map(|(ctx, op, ap)| {
            let oc = forward_children(ctx.object_count(), &op);
            let ac = forward_children(ctx.attribute_count(), &ap);
            OrderedContext::new(ctx, oc, ac).unwrap()
        })
}
