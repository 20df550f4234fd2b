//! Checks shared by the property tests and the acceptance suite. Each
//! returns `Err` with a description of the first violated law.

use std::collections::{BTreeSet, HashSet};

use facet_lattice::formats::*;
use facet_lattice::{
    assign_layers, index_set, ConceptLattice, DiagramDoc, FormalContext, IndexSet, Layout, OrderedContext,
};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn subsets(len: usize) -> impl Iterator<Item = IndexSet> {
    (0u32..1 << len).map(move |bits| index_set(len, (0..len).filter(|i| bits >> i & 1 == 1)))
}

/// Extensivity, idempotence and antitony of both derivations, over every
/// subset of objects and of attributes.
pub fn derivation_laws(ctx: &FormalContext) -> Check {
    let (n, m) = (ctx.object_count(), ctx.attribute_count());
    let up = |a: &IndexSet| ctx.derive_intent(a).unwrap();
    let down = |b: &IndexSet| ctx.derive_extent(b).unwrap();
    for a in subsets(n) {
        let a1 = up(&a);
        let a2 = down(&a1);
        ensure!(a.is_subset(&a2), "A not in A'' for {a:?}");
        ensure!(up(&a2) == a1, "A''' != A' for {a:?}");
        ensure!(down(&up(&a2)) == a2, "closure not idempotent for {a:?}");
        for g in 0..n {
            let mut bigger = a.clone();
            bigger.insert(g);
            ensure!(up(&bigger).is_subset(&a1), "intent derivation not antitone at {a:?} + {g}");
        }
    }
    for b in subsets(m) {
        let b1 = down(&b);
        let b2 = up(&b1);
        ensure!(b.is_subset(&b2), "B not in B'' for {b:?}");
        ensure!(down(&b2) == b1, "B''' != B' for {b:?}");
        for a in 0..m {
            let mut bigger = b.clone();
            bigger.insert(a);
            ensure!(down(&bigger).is_subset(&b1), "extent derivation not antitone at {b:?} + {a}");
        }
    }
    Ok(())
}

/// Every closed extent, found by closing all object subsets.
pub fn brute_extents(ctx: &FormalContext) -> BTreeSet<Vec<usize>> {
    subsets(ctx.object_count())
        .map(|a| ctx.derive_extent(&ctx.derive_intent(&a).unwrap()).unwrap().ones().collect())
        .collect()
}

/// Cover pairs `(upper, lower)` computed from the order alone.
pub fn brute_covers(lat: &ConceptLattice) -> HashSet<(usize, usize)> {
    let k = lat.len();
    let below = |i: usize, j: usize| i != j && lat.leq(i, j).unwrap();
    let mut covers = HashSet::new();
    for lo in 0..k {
        for hi in 0..k {
            if below(lo, hi) && !(0..k).any(|mid| below(lo, mid) && below(mid, hi)) {
                covers.insert((hi, lo));
            }
        }
    }
    covers
}

pub fn lattice_edges(lat: &ConceptLattice) -> HashSet<(usize, usize)> {
    lat.lower_covers().iter().enumerate().flat_map(|(hi, los)| los.iter().map(move |&lo| (hi, lo))).collect()
}

/// Concepts, covers and generator maps agree with brute force.
pub fn lattice_matches_oracle(ctx: &FormalContext) -> Check {
    let lat = ConceptLattice::new(ctx.clone());
    let got: BTreeSet<Vec<usize>> = lat.concepts().iter().map(|c| c.extent.ones().collect()).collect();
    ensure!(got.len() == lat.len(), "duplicate concepts");
    ensure!(got == brute_extents(ctx), "concept extents differ from the oracle");
    for c in lat.concepts() {
        ensure!(ctx.derive_intent(&c.extent).unwrap() == c.intent, "intent is not the extent's derivation");
        ensure!(ctx.derive_extent(&c.intent).unwrap() == c.extent, "extent is not the intent's derivation");
    }
    let edges = lattice_edges(&lat);
    ensure!(edges.len() == lat.edge_count(), "edge count mismatch");
    ensure!(edges == brute_covers(&lat), "cover relation differs from the oracle");
    for (hi, lo) in &edges {
        ensure!(lat.upper_covers()[*lo].contains(hi), "upper covers not the inverse of lower covers");
    }
    ensure!(lat.concepts()[lat.top()].extent.count_ones(..) == ctx.object_count(), "top extent is not G");
    ensure!(lat.concepts()[lat.bottom()].intent.count_ones(..) == ctx.attribute_count(), "bottom intent is not M");
    for (g, &c) in lat.gamma().iter().enumerate() {
        let want = ctx.derive_extent(&ctx.derive_intent(&index_set(ctx.object_count(), [g])).unwrap()).unwrap();
        ensure!(lat.concepts()[c].extent == want, "gamma({g}) wrong");
    }
    for (a, &c) in lat.mu().iter().enumerate() {
        ensure!(&lat.concepts()[c].extent == ctx.column(a), "mu({a}) wrong");
    }
    Ok(())
}

/// Meet and join are commutative, associative, idempotent and absorptive,
/// and agree with the order.
pub fn lattice_laws(ctx: &FormalContext) -> Check {
    let lat = ConceptLattice::new(ctx.clone());
    let meet = |ids: &[usize]| lat.meet(ids).unwrap();
    let join = |ids: &[usize]| lat.join(ids).unwrap();
    ensure!(meet(&[]) == lat.top(), "empty meet is not the top");
    ensure!(join(&[]) == lat.bottom(), "empty join is not the bottom");
    let k = lat.len();
    for x in 0..k {
        ensure!(meet(&[x, x]) == x && join(&[x, x]) == x, "not idempotent at {x}");
        for y in 0..k {
            let (m, j) = (meet(&[x, y]), join(&[x, y]));
            ensure!(m == meet(&[y, x]) && j == join(&[y, x]), "not commutative at {x},{y}");
            ensure!(join(&[x, m]) == x && meet(&[x, j]) == x, "absorption fails at {x},{y}");
            let leq = lat.leq(x, y).unwrap();
            ensure!(leq == (m == x) && leq == (j == y), "order disagrees with meet/join at {x},{y}");
            for z in 0..k {
                ensure!(meet(&[m, z]) == meet(&[x, meet(&[y, z])]), "meet not associative");
                ensure!(join(&[j, z]) == join(&[x, join(&[y, z])]), "join not associative");
            }
        }
    }
    Ok(())
}

/// Order closure is extensive, idempotent, and respects both orders.
pub fn order_closure_laws(octx: &OrderedContext) -> Check {
    let closed = octx.order_close_incidence();
    ensure!(octx.closed().order_close_incidence() == closed, "order closure is not idempotent");
    for (g, m) in octx.base().incidence() {
        ensure!(closed.has(g, m), "closure dropped ({g},{m})");
    }
    for (parent, kids) in octx.object_children().iter().enumerate() {
        for &kid in kids {
            ensure!(closed.row(parent).is_subset(closed.row(kid)), "object {kid} does not inherit from {parent}");
        }
    }
    for (parent, kids) in octx.attribute_children().iter().enumerate() {
        for &kid in kids {
            ensure!(closed.column(parent).is_subset(closed.column(kid)), "attribute {parent} does not imply {kid}");
        }
    }
    Ok(())
}

fn named_pairs(c: &FormalContext) -> BTreeSet<(String, String)> {
    c.incidence().map(|(g, m)| (c.objects()[g].clone(), c.attributes()[m].to_string())).collect()
}

/// FCIF to CLIF and back yields the order-closed incidence.
pub fn clif_reconstruction(octx: &OrderedContext) -> Check {
    let doc = FcifDocument::from_ordered_context(octx, None).map_err(|e| e.to_string())?;
    let clif = fcif_to_clif(&doc).map_err(|e| e.to_string())?;
    let back = clif_to_fcif(&clif).map_err(|e| e.to_string())?;
    let back = back.to_ordered_context().map_err(|e| e.to_string())?;
    let closed = octx.order_close_incidence();
    ensure!(back.base().object_count() == closed.object_count(), "object count changed");
    ensure!(back.base().attribute_count() == closed.attribute_count(), "attribute count changed");
    ensure!(named_pairs(back.base()) == named_pairs(&closed), "incidence changed");
    Ok(())
}

/// Layers grow downward, positions are distinct, labels partition G and M,
/// and edges are exactly the covers.
pub fn diagram_invariants(ctx: &FormalContext) -> Check {
    let lat = ConceptLattice::new(ctx.clone());
    let layers = assign_layers(&lat);
    let layout = Layout::of(&lat);
    ensure!(layout.layers == layers, "layout layers differ");
    ensure!(layers[lat.top()] == 0, "top not on layer 0");
    for x in 0..lat.len() {
        for y in 0..lat.len() {
            if x != y && lat.leq(x, y).unwrap() {
                ensure!(layers[x] > layers[y], "layer not monotone for {x} < {y}");
                ensure!(layout.positions[x].1 < layout.positions[y].1, "y not monotone for {x} < {y}");
            }
        }
    }
    let distinct: HashSet<_> = layout.positions.iter().collect();
    ensure!(distinct.len() == lat.len(), "coincident positions");
    let doc = DiagramDoc::new(&lat, &layout, None);
    let mut objects: Vec<usize> = doc.concepts.iter().flat_map(|c| c.object_labels.clone()).collect();
    let mut attributes: Vec<usize> = doc.concepts.iter().flat_map(|c| c.attribute_labels.clone()).collect();
    objects.sort();
    attributes.sort();
    ensure!(objects == (0..ctx.object_count()).collect::<Vec<_>>(), "object labels do not partition G");
    ensure!(attributes == (0..ctx.attribute_count()).collect::<Vec<_>>(), "attribute labels do not partition M");
    let edges: HashSet<(usize, usize)> =
        doc.concepts.iter().flat_map(|c| c.lower_covers.iter().map(move |&l| (c.id, l))).collect();
    ensure!(edges == brute_covers(&lat), "diagram edges are not the covers");
    Ok(())
}

/// Both round-trip directions for a text codec.
pub fn text_roundtrip<D: PartialEq + std::fmt::Debug, E: std::fmt::Display>(
    doc: &D,
    serialize: impl Fn(&D) -> String,
    parse: impl Fn(&str) -> Result<D, E>,
) -> Check {
    let text = serialize(doc);
    let parsed = parse(&text).map_err(|e| format!("{e} while reparsing:\n{text}"))?;
    ensure!(&parsed == doc, "parse(serialize(d)) != d\n{parsed:?}\n{doc:?}");
    ensure!(serialize(&parsed) == text, "serialize(parse(s)) != s for\n{text}");
    Ok(())
}

pub fn soif_roundtrip(stream: &SoifStream) -> Check {
    let bytes = serialize_soif(stream);
    let parsed = parse_soif_stream(&bytes).map_err(|e| e.to_string())?;
    ensure!(&parsed == stream, "parse(serialize(s)) != s");
    ensure!(serialize_soif(&parsed) == bytes, "serialize(parse(b)) != b");
    Ok(())
}
