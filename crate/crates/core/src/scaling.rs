//! Conceptual scaling: turning raw `(tag, value)` records into a formal
//! context of single-valued attribute terms.
//!
//! Tags without a scale are scaled nominally (`tag = value`). Scale sets are
//! written in TOML:
//!
//! ```toml
//! attribute-order = "scale"     # or "first-seen" (default)
//!
//! [[scale]]
//! tag = "Title"                 # source tag, ASCII case-insensitive; "@name" is the record name
//! kind = "nominal"              # nominal | ordinal | mapped
//! as = "title"                  # output tag (defaults to the source tag)
//! placement = "record"          # record | parent | declare
//! strip-whitespace = false
//!
//! [[scale]]
//! tag = "size"
//! kind = "ordinal"
//! thresholds = [{ label = "600K", bound = "600K" }, { label = "1MB", bound = 1000000 }]
//!
//! [[scale]]
//! tag = "@name"
//! kind = "mapped"
//! map = [{ pattern = '://[^/]*\.edu(/|$)', term = "location:country = us" }]
//!
//! [[implication]]
//! from = "title"                # output tags; within one record,
//! to = "author"                 # every `from` term implies the `to` terms
//! ```
//!
//! A mapped pattern is a regular expression matched against the value, or
//! a magnitude comparison such as `>500000` or `<=1MB`.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use regex::Regex;
use serde::Deserialize;

use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::ordered::OrderedContext;
use crate::term::{parse_term, AttributeTerm};

/// The reserved tag under which a scale reads the record name.
pub const NAME_TAG: &str = "@name";

/// Raw meta-information for one resource, before scaling.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawRecord {
    pub name: String,
    pub pairs: Vec<(String, String)>,
    pub children: Vec<String>,
}

impl RawRecord {
    pub fn new(name: impl Into<String>) -> Self {
        RawRecord { name: name.into(), ..Default::default() }
    }

    pub fn with_pair(mut self, tag: impl Into<String>, value: impl Into<String>) -> Self {
        self.pairs.push((tag.into(), value.into()));
        self
    }

    pub fn with_children(mut self, children: impl IntoIterator<Item = impl Into<String>>) -> Self {
        self.children.extend(children.into_iter().map(Into::into));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleKind {
    #[default]
    Nominal,
    Ordinal,
    Mapped,
}

/// Where the terms produced by a scale are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// On the record that carries the value.
    #[default]
    Record,
    /// On every record listing this one as a child; on the record itself
    /// when it has no parent.
    Parent,
    /// Declared as attributes without any incidence.
    Declare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AttributeOrder {
    /// Attributes in the order they are first produced.
    #[default]
    FirstSeen,
    /// Grouped by the scale that produced them (unscaled tags last), first
    /// produced within a group.
    Scale,
}

#[derive(Debug, Clone)]
pub enum Pattern {
    Regex(Regex),
    Compare(Comparison, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    LessEq,
    Greater,
    GreaterEq,
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::ScaleConfig("empty pattern".into()));
        }
        let comparison = [
            (">=", Comparison::GreaterEq),
            ("<=", Comparison::LessEq),
            (">", Comparison::Greater),
            ("<", Comparison::Less),
        ]
        .into_iter()
        .find(|(prefix, _)| text.starts_with(prefix));
        match comparison {
            Some((prefix, cmp)) => Ok(Pattern::Compare(cmp, parse_magnitude(&text[prefix.len()..])?)),
            None => Regex::new(text)
                .map(Pattern::Regex)
                .map_err(|e| Error::ScaleConfig(format!("bad pattern `{text}`: {e}"))),
        }
    }

    fn matches(&self, value: &str) -> std::result::Result<bool, Error> {
        match self {
            Pattern::Regex(re) => Ok(re.is_match(value)),
            Pattern::Compare(cmp, bound) => {
                let v = parse_magnitude(value)?;
                Ok(match cmp {
                    Comparison::Less => v < *bound,
                    Comparison::LessEq => v <= *bound,
                    Comparison::Greater => v > *bound,
                    Comparison::GreaterEq => v >= *bound,
                })
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scale {
    pub kind: ScaleKind,
    /// Source tag, compared ASCII case-insensitively.
    pub tag: String,
    /// Output tag for nominal and ordinal terms.
    pub output: String,
    pub placement: Placement,
    pub strip_whitespace: bool,
    /// Ordinal thresholds, strictly increasing in bound.
    pub thresholds: Vec<(String, u64)>,
    /// Mapped patterns; every matching entry contributes its term.
    pub value_map: Vec<(Pattern, AttributeTerm)>,
}

impl Scale {
    pub fn nominal(tag: impl Into<String>) -> Self {
        let tag = tag.into();
        Scale {
            kind: ScaleKind::Nominal,
            output: tag.clone(),
            tag,
            placement: Placement::Record,
            strip_whitespace: false,
            thresholds: Vec::new(),
            value_map: Vec::new(),
        }
    }

    pub fn ordinal(tag: impl Into<String>, thresholds: Vec<(String, u64)>) -> Result<Self> {
        let scale = Scale { kind: ScaleKind::Ordinal, thresholds, ..Scale::nominal(tag) };
        scale.validate()?;
        Ok(scale)
    }

    pub fn mapped(tag: impl Into<String>, value_map: Vec<(Pattern, AttributeTerm)>) -> Result<Self> {
        let scale = Scale { kind: ScaleKind::Mapped, value_map, ..Scale::nominal(tag) };
        scale.validate()?;
        Ok(scale)
    }

    pub fn renamed(mut self, output: impl Into<String>) -> Self {
        self.output = output.into();
        self
    }

    pub fn placed(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.tag.is_empty() {
            return Err(Error::ScaleConfig("scale with empty tag".into()));
        }
        AttributeTerm::bare(self.output.clone())
            .map_err(|e| Error::ScaleConfig(format!("bad output tag `{}`: {e}", self.output)))?;
        match self.kind {
            ScaleKind::Ordinal => {
                if self.thresholds.is_empty() {
                    return Err(Error::ScaleConfig(format!("ordinal scale `{}` has no thresholds", self.tag)));
                }
                if self.thresholds.windows(2).any(|w| w[0].1 >= w[1].1) {
                    return Err(Error::ScaleConfig(format!(
                        "ordinal scale `{}` thresholds are not strictly increasing",
                        self.tag
                    )));
                }
            }
            ScaleKind::Mapped if self.value_map.is_empty() => {
                return Err(Error::ScaleConfig(format!("mapped scale `{}` has no entries", self.tag)));
            }
            _ => {}
        }
        Ok(())
    }

    fn applies_to(&self, tag: &str) -> bool {
        self.tag.eq_ignore_ascii_case(tag)
    }

    /// Terms produced for one raw value.
    pub fn terms(&self, raw: &str) -> Result<Vec<AttributeTerm>> {
        let value: String = if self.strip_whitespace {
            raw.chars().filter(|c| !c.is_whitespace()).collect()
        } else {
            raw.trim().to_string()
        };
        match self.kind {
            ScaleKind::Nominal => Ok(vec![AttributeTerm::equals(self.output.clone(), value)?]),
            ScaleKind::Ordinal => ordinal_terms(self, &value),
            ScaleKind::Mapped => {
                let mut out = Vec::new();
                for (pattern, term) in &self.value_map {
                    if pattern.matches(&value)? && !out.contains(term) {
                        out.push(term.clone());
                    }
                }
                Ok(out)
            }
        }
    }
}

/// `tag <= label` for every threshold whose bound is at least the value's
/// magnitude.
pub fn ordinal_terms(scale: &Scale, raw: &str) -> Result<Vec<AttributeTerm>> {
    if scale.kind != ScaleKind::Ordinal {
        return Err(Error::ScaleConfig(format!("scale `{}` is not ordinal", scale.tag)));
    }
    let magnitude = parse_magnitude(raw)?;
    scale
        .thresholds
        .iter()
        .filter(|(_, bound)| *bound >= magnitude)
        .map(|(label, _)| AttributeTerm::at_most(scale.output.clone(), label.clone()))
        .collect()
}

/// Parses sizes such as `600K`, `1MB`, `24567 bytes`, or `12543bytes`.
///
/// `K`/`KB` multiply by 1000, `M`/`MB` by 10^6, `G`/`GB` by 10^9; a trailing
/// `bytes` word is accepted and ignored.
pub fn parse_magnitude(raw: &str) -> Result<u64> {
    let bad = || Error::Magnitude(raw.to_string());
    let text = raw.trim();
    let digits_end = text.find(|c: char| !c.is_ascii_digit()).unwrap_or(text.len());
    if digits_end == 0 {
        return Err(bad());
    }
    let number: u64 = text[..digits_end].parse().map_err(|_| bad())?;
    let mut unit = text[digits_end..].trim().to_ascii_lowercase();
    for word in ["bytes", "byte"] {
        if let Some(stripped) = unit.strip_suffix(word) {
            unit = stripped.trim_end().to_string();
            break;
        }
    }
    let factor: u64 = match unit.as_str() {
        "" | "b" => 1,
        "k" | "kb" => 1_000,
        "m" | "mb" => 1_000_000,
        "g" | "gb" => 1_000_000_000,
        _ => return Err(bad()),
    };
    number.checked_mul(factor).ok_or_else(bad)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Implication {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Default)]
pub struct ScaleSet {
    scales: Vec<Scale>,
    implications: Vec<Implication>,
    order: AttributeOrder,
}

const URC_DEMO: &str = include_str!("../scales/urc-demo.toml");
const TEI_DEMO: &str = include_str!("../scales/tei-demo.toml");

/// Names of the scale sets compiled into the library.
pub const BUNDLED_SCALE_SETS: &[&str] = &["urc-demo", "tei-demo"];

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ScaleSetFile {
    #[serde(default)]
    attribute_order: AttributeOrder,
    #[serde(default)]
    scale: Vec<ScaleEntry>,
    #[serde(default)]
    implication: Vec<ImplicationEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct ScaleEntry {
    tag: String,
    #[serde(default)]
    kind: ScaleKind,
    #[serde(rename = "as")]
    output: Option<String>,
    #[serde(default)]
    placement: Placement,
    #[serde(default)]
    strip_whitespace: bool,
    #[serde(default)]
    thresholds: Vec<ThresholdEntry>,
    #[serde(default)]
    map: Vec<MapEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdEntry {
    label: String,
    bound: Bound,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Bound {
    Number(u64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapEntry {
    pattern: String,
    term: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ImplicationEntry {
    from: String,
    to: String,
}

impl ScaleSet {
    pub fn new(scales: Vec<Scale>) -> Result<Self> {
        let mut set = ScaleSet::default();
        for scale in scales {
            set.push(scale)?;
        }
        Ok(set)
    }

    /// Adds a scale. A source tag may carry several scales only if they
    /// record their terms in different placements.
    pub fn push(&mut self, scale: Scale) -> Result<()> {
        scale.validate()?;
        if self.scales.iter().any(|s| s.applies_to(&scale.tag) && s.placement == scale.placement) {
            return Err(Error::ScaleConfig(format!("tag `{}` already has a {:?} scale", scale.tag, scale.placement)));
        }
        self.scales.push(scale);
        Ok(())
    }

    pub fn with_implication(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.implications.push(Implication { from: from.into(), to: to.into() });
        self
    }

    pub fn with_order(mut self, order: AttributeOrder) -> Self {
        self.order = order;
        self
    }

    pub fn scales(&self) -> &[Scale] {
        &self.scales
    }

    pub fn implications(&self) -> &[Implication] {
        &self.implications
    }

    pub fn attribute_order(&self) -> AttributeOrder {
        self.order
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ScaleSetFile = toml::from_str(text).map_err(|e| Error::ScaleConfig(e.to_string()))?;
        let mut set = ScaleSet { order: file.attribute_order, ..Default::default() };
        for entry in file.scale {
            let thresholds = entry
                .thresholds
                .into_iter()
                .map(|t| {
                    let bound = match t.bound {
                        Bound::Number(n) => n,
                        Bound::Text(s) => parse_magnitude(&s)?,
                    };
                    Ok((t.label, bound))
                })
                .collect::<Result<Vec<_>>>()?;
            let value_map = entry
                .map
                .into_iter()
                .map(|m| Ok((Pattern::parse(&m.pattern)?, parse_term(&m.term)?)))
                .collect::<Result<Vec<_>>>()?;
            set.push(Scale {
                kind: entry.kind,
                output: entry.output.unwrap_or_else(|| entry.tag.clone()),
                tag: entry.tag,
                placement: entry.placement,
                strip_whitespace: entry.strip_whitespace,
                thresholds,
                value_map,
            })?;
        }
        set.implications = file.implication.into_iter().map(|i| Implication { from: i.from, to: i.to }).collect();
        Ok(set)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml_str(&text)
    }

    /// One of the scale sets shipped with the library.
    pub fn bundled(name: &str) -> Option<Self> {
        let text = match name {
            "urc-demo" => URC_DEMO,
            "tei-demo" => TEI_DEMO,
            _ => return None,
        };
        Some(Self::from_toml_str(text).expect("bundled scale sets are valid"))
    }

    /// A bundled set by name, otherwise a file path.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        match Self::bundled(name_or_path) {
            Some(set) => Ok(set),
            None => Self::load(name_or_path),
        }
    }

    fn scales_for<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = (usize, &'a Scale)> + 'a {
        self.scales.iter().enumerate().filter(move |(_, s)| s.applies_to(tag))
    }
}

/// Scales a batch of records into an ordered formal context.
///
/// One object per record, in record order; record children become object
/// order rows verbatim. Attribute implications from the scale set become
/// attribute order rows.
pub fn apply_scales(records: &[RawRecord], scales: &ScaleSet) -> Result<OrderedContext> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, r) in records.iter().enumerate() {
        if r.name.is_empty() {
            return Err(Error::Validation("record with empty name".into()));
        }
        if index.insert(r.name.as_str(), i).is_some() {
            return Err(Error::DuplicateObject(r.name.clone()));
        }
    }
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); records.len()];
    let mut object_children = Vec::with_capacity(records.len());
    for (p, r) in records.iter().enumerate() {
        let mut kids = Vec::new();
        for child in &r.children {
            let &c = index
                .get(child.as_str())
                .ok_or_else(|| Error::Validation(format!("record `{}` lists unknown child `{child}`", r.name)))?;
            parents[c].push(p);
            kids.push(c);
        }
        object_children.push(kids);
    }

    let default_rank = scales.scales.len();
    // term -> (rank, first-seen sequence)
    let mut declared: HashMap<AttributeTerm, (usize, usize)> = HashMap::new();
    let mut sequence: Vec<AttributeTerm> = Vec::new();
    let mut incidence: Vec<(usize, AttributeTerm)> = Vec::new();

    let mut declare = |term: &AttributeTerm, rank: usize| {
        if !declared.contains_key(term) {
            declared.insert(term.clone(), (rank, sequence.len()));
            sequence.push(term.clone());
        }
    };

    for (r, record) in records.iter().enumerate() {
        let name_pair = (NAME_TAG.to_string(), record.name.clone());
        let pairs =
            record.pairs.iter().map(|(t, v)| (t, v, false)).chain(std::iter::once((&name_pair.0, &name_pair.1, true)));
        for (tag, raw, is_name) in pairs {
            let mut matched = scales.scales_for(tag).peekable();
            if matched.peek().is_none() {
                if is_name {
                    continue;
                }
                let term = AttributeTerm::equals(tag.trim(), raw.trim()).map_err(|e| Error::Scaling {
                    record: record.name.clone(),
                    tag: tag.clone(),
                    value: raw.clone(),
                    reason: e.to_string(),
                })?;
                declare(&term, default_rank);
                incidence.push((r, term));
                continue;
            }
            for (rank, scale) in matched {
                let terms = scale.terms(raw).map_err(|e| Error::Scaling {
                    record: record.name.clone(),
                    tag: tag.clone(),
                    value: raw.clone(),
                    reason: e.to_string(),
                })?;
                for term in terms {
                    declare(&term, rank);
                    match scale.placement {
                        Placement::Record => incidence.push((r, term)),
                        Placement::Parent if parents[r].is_empty() => incidence.push((r, term)),
                        Placement::Parent => incidence.extend(parents[r].iter().map(|&p| (p, term.clone()))),
                        Placement::Declare => {}
                    }
                }
            }
        }
    }

    let mut attributes = sequence;
    if scales.order == AttributeOrder::Scale {
        attributes.sort_by_key(|t| declared[t]);
    }
    let position: HashMap<&AttributeTerm, usize> = attributes.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let pairs: Vec<(usize, usize)> = incidence.iter().map(|(g, t)| (*g, position[t])).collect();

    // implications are evaluated per record on its own (unclosed) terms
    let mut attribute_children: Vec<Vec<usize>> = vec![Vec::new(); attributes.len()];
    let mut rows: Vec<HashSet<usize>> = vec![HashSet::new(); records.len()];
    for &(g, m) in &pairs {
        rows[g].insert(m);
    }
    for imp in &scales.implications {
        for row in &rows {
            let mut row: Vec<usize> = row.iter().copied().collect();
            row.sort_unstable();
            let tagged =
                |tag: &str| -> Vec<usize> { row.iter().copied().filter(|&m| attributes[m].tag == tag).collect() };
            let targets = tagged(&imp.to);
            for from in tagged(&imp.from) {
                for &to in &targets {
                    if to != from && !attribute_children[from].contains(&to) {
                        attribute_children[from].push(to);
                    }
                }
            }
        }
    }
    for kids in &mut attribute_children {
        kids.sort_unstable();
    }

    let objects = records.iter().map(|r| r.name.clone()).collect();
    let base = FormalContext::new(objects, attributes, pairs)?;
    OrderedContext::new(base, object_children, attribute_children)
}
