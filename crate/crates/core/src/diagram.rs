//! Layered line diagrams of concept lattices, emitted as DOT or JSON.
//!
//! Layers are longest cover paths from the top. Within a layer, nodes
//! start in canonical order and are reordered by four barycenter sweeps
//! (down, up, down, up). A layer of width `w` in a diagram of maximal
//! width `W` puts its node of rank `r` at `x = (W - w) + 2r`, which keeps
//! coordinates natural and layers centred.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::lattice::{ConceptId, ConceptLattice};
use crate::term::AttributeTerm;

const SWEEPS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    /// `(x, y)` per concept id.
    pub positions: Vec<(usize, usize)>,
    /// Layer per concept id, 0 at the top.
    pub layers: Vec<usize>,
}

impl Layout {
    pub fn of(lat: &ConceptLattice) -> Self {
        layout_coordinates(lat, &assign_layers(lat))
    }
}

/// Longest cover-path length from the top to each concept.
pub fn assign_layers(lat: &ConceptLattice) -> Vec<usize> {
    // canonical order lists every concept after its upper covers
    let mut layers = vec![0; lat.len()];
    for c in 0..lat.len() {
        layers[c] = lat.upper_covers()[c].iter().map(|&u| layers[u] + 1).max().unwrap_or(0);
    }
    layers
}

pub fn layout_coordinates(lat: &ConceptLattice, layers: &[usize]) -> Layout {
    let max_layer = layers.iter().copied().max().unwrap_or(0);
    let mut rows: Vec<Vec<ConceptId>> = vec![Vec::new(); max_layer + 1];
    for (c, &l) in layers.iter().enumerate() {
        rows[l].push(c);
    }
    let max_width = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut x = vec![0usize; layers.len()];
    let place = |row: &[ConceptId], x: &mut [usize]| {
        for (rank, &c) in row.iter().enumerate() {
            x[c] = (max_width - row.len()) + 2 * rank;
        }
    };
    for row in &rows {
        place(row, &mut x);
    }

    for sweep in 0..SWEEPS {
        let downward = sweep % 2 == 0;
        let order: Vec<usize> = if downward { (1..=max_layer).collect() } else { (0..max_layer).rev().collect() };
        for l in order {
            let neighbours = |c: ConceptId| {
                if downward {
                    &lat.upper_covers()[c]
                } else {
                    &lat.lower_covers()[c]
                }
            };
            let key = |c: ConceptId| {
                let ns = neighbours(c);
                if ns.is_empty() {
                    x[c] as f64
                } else {
                    ns.iter().map(|&n| x[n] as f64).sum::<f64>() / ns.len() as f64
                }
            };
            let mut keyed: Vec<(f64, ConceptId)> = rows[l].iter().map(|&c| (key(c), c)).collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
            rows[l] = keyed.into_iter().map(|(_, c)| c).collect();
            place(&rows[l], &mut x);
        }
    }

    Layout {
        positions: layers.iter().enumerate().map(|(c, &l)| (x[c], max_layer - l)).collect(),
        layers: layers.to_vec(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagramNode {
    pub id: ConceptId,
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
    pub object_labels: Vec<usize>,
    pub attribute_labels: Vec<usize>,
    pub x: usize,
    pub y: usize,
    pub lower_covers: Vec<ConceptId>,
    pub upper_covers: Vec<ConceptId>,
}

/// The JSON document served to diagram clients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDoc {
    #[serde(rename = "type")]
    pub type_name: Option<String>,
    pub objects: Vec<String>,
    pub attributes: Vec<AttributeTerm>,
    pub concepts: Vec<DiagramNode>,
    pub top: ConceptId,
    pub bottom: ConceptId,
}

impl DiagramDoc {
    pub fn new(lat: &ConceptLattice, layout: &Layout, type_name: Option<String>) -> Self {
        let ctx = lat.context();
        let concepts = lat
            .concepts()
            .iter()
            .enumerate()
            .map(|(id, c)| DiagramNode {
                id,
                extent: c.extent.ones().collect(),
                intent: c.intent.ones().collect(),
                object_labels: lat.object_labels(id),
                attribute_labels: lat.attribute_labels(id),
                x: layout.positions[id].0,
                y: layout.positions[id].1,
                lower_covers: lat.lower_covers()[id].clone(),
                upper_covers: lat.upper_covers()[id].clone(),
            })
            .collect();
        DiagramDoc {
            type_name,
            objects: ctx.objects().to_vec(),
            attributes: ctx.attributes().to_vec(),
            concepts,
            top: lat.top(),
            bottom: lat.bottom(),
        }
    }
}

pub fn emit_json(lat: &ConceptLattice, layout: &Layout, type_name: Option<String>) -> String {
    serde_json::to_string_pretty(&DiagramDoc::new(lat, layout, type_name)).expect("diagram serializes")
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph: one `rank=same` group per layer, edges from upper to lower
/// cover, attribute labels above object labels in each node.
pub fn emit_dot(lat: &ConceptLattice, layout: &Layout) -> String {
    let ctx = lat.context();
    let mut out = String::from("digraph lattice {\n    rankdir=TB;\n    node [shape=box, style=rounded];\n");
    let max_layer = layout.layers.iter().copied().max().unwrap_or(0);
    for l in 0..=max_layer {
        let ids: Vec<String> = (0..lat.len()).filter(|&c| layout.layers[c] == l).map(|c| format!("c{c}")).collect();
        let _ = writeln!(out, "    {{ rank=same; {}; }}", ids.join("; "));
    }
    for c in 0..lat.len() {
        let attrs: Vec<String> = lat.attribute_labels(c).iter().map(|&m| ctx.attributes()[m].to_string()).collect();
        let objs: Vec<&str> = lat.object_labels(c).iter().map(|&g| ctx.objects()[g].as_str()).collect();
        let label = format!("{}\n{}", attrs.join("\n"), objs.join("\n"));
        let (x, y) = layout.positions[c];
        let _ = writeln!(out, "    c{c} [label=\"{}\", pos=\"{x},{y}!\"];", dot_escape(&label).replace('\n', "\\n"));
    }
    for (upper, lowers) in lat.lower_covers().iter().enumerate() {
        for lower in lowers {
            let _ = writeln!(out, "    c{upper} -> c{lower};");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::FormalContext;

    fn lattice(objects: &[&str], attributes: &[&str], pairs: &[(usize, usize)]) -> ConceptLattice {
        let ctx = FormalContext::new(
            objects.iter().map(|s| s.to_string()).collect(),
            attributes.iter().map(|a| AttributeTerm::bare(*a).unwrap()).collect(),
            pairs.iter().copied(),
        )
        .unwrap();
        ConceptLattice::new(ctx)
    }

    #[test]
    fn single_concept() {
        let lat = lattice(&[], &[], &[]);
        let layout = Layout::of(&lat);
        assert_eq!(layout.layers, vec![0]);
        assert_eq!(layout.positions, vec![(0, 0)]);
    }

    #[test]
    fn two_atoms_share_y() {
        let lat = lattice(&["g", "h"], &["a", "b"], &[(0, 0), (1, 1)]);
        let layout = Layout::of(&lat);
        assert_eq!(lat.len(), 4);
        let (p1, p2) = (layout.positions[1], layout.positions[2]);
        assert_eq!(p1.1, p2.1);
        assert_ne!(p1.0, p2.0);
        assert_eq!(layout.positions[0].1, 2);
        assert_eq!(layout.positions[3].1, 0);
    }

    #[test]
    fn chain_is_vertical() {
        let lat = lattice(&["g", "h", "i"], &["a", "b"], &[(0, 0), (0, 1), (1, 0)]);
        let layout = Layout::of(&lat);
        assert!(layout.positions.iter().all(|p| p.0 == layout.positions[0].0));
    }

    #[test]
    fn dot_quotes_labels() {
        let lat = lattice(&["g"], &["a"], &[(0, 0)]);
        let dot = emit_dot(&lat, &Layout::of(&lat));
        assert!(dot.starts_with("digraph lattice {"));
        assert!(dot.contains("c0 [label=\"a\\ng\""));
    }
}
