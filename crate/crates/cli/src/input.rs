use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use facet_lattice::formats::{
    clif_to_context, parse_clif, parse_context_table, parse_fcif, parse_soif_stream, parse_urc, parse_urc_sgml,
    soif_common_type, soif_to_records, urc_to_records, ClifDocument, FcifDocument, SoifStream, UrcRecord,
};
use facet_lattice::{apply_scales, OrderedContext, RawRecord, ScaleSet};

/// Environment variable naming the default scale set (bundled name or path).
pub const SCALES_ENV: &str = "FACET_SCALES";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Soif,
    Urc,
    UrcSgml,
    Fcif,
    Clif,
    Table,
}

impl Format {
    pub fn detect(path: &Path) -> Option<Format> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        Some(match ext.as_str() {
            "soif" => Format::Soif,
            "urc" => Format::Urc,
            "sgml" | "sgm" => Format::UrcSgml,
            "fcif" => Format::Fcif,
            "clif" => Format::Clif,
            "cxt" | "csv" | "tsv" => Format::Table,
            _ => return None,
        })
    }

    pub fn resolve(path: &Path, explicit: Option<Format>) -> Result<Format> {
        match explicit.or_else(|| Format::detect(path)) {
            Some(f) => Ok(f),
            None => bail!("cannot tell the format of {}; pass --from", path.display()),
        }
    }

    /// The scale set raw records of this format use when none is given.
    fn default_scales(self) -> ScaleSet {
        match self {
            Format::Urc => ScaleSet::bundled("urc-demo"),
            Format::UrcSgml => ScaleSet::bundled("tei-demo"),
            _ => None,
        }
        .unwrap_or_default()
    }
}

/// A parsed input file before it is turned into a context.
#[derive(Debug)]
pub enum Document {
    Soif(SoifStream),
    Urc(UrcRecord),
    Fcif(FcifDocument),
    Clif(ClifDocument),
    Table(facet_lattice::FormalContext),
}

pub fn read_document(path: &Path, format: Format) -> Result<Document> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = || facet_lattice::formats::decode_text(&bytes);
    let doc = match format {
        Format::Soif => Document::Soif(parse_soif_stream(&bytes)?),
        Format::Urc => Document::Urc(parse_urc(&text())?),
        Format::UrcSgml => Document::Urc(parse_urc_sgml(&text())?),
        Format::Fcif => Document::Fcif(parse_fcif(&text())?),
        Format::Clif => Document::Clif(parse_clif(&text())?),
        Format::Table => Document::Table(parse_context_table(&text())?),
    };
    Ok(doc)
}

/// Picks the scale set: the explicit one, else the format's default.
pub fn scale_set(spec: Option<&str>, format: Format) -> Result<ScaleSet> {
    match spec {
        Some(s) => ScaleSet::resolve(s).with_context(|| format!("loading scale set `{s}`")),
        None => Ok(format.default_scales()),
    }
}

/// An ordered context with its type name.
pub struct Loaded {
    pub context: OrderedContext,
    pub type_name: Option<String>,
}

pub fn to_context(doc: &Document, scales: &ScaleSet) -> Result<Loaded> {
    let scaled = |records: &[RawRecord], type_name| -> Result<Loaded> {
        Ok(Loaded { context: apply_scales(records, scales)?, type_name })
    };
    match doc {
        Document::Soif(stream) => {
            let templates = stream.clone().into_templates();
            scaled(&soif_to_records(&templates)?, soif_common_type(&templates))
        }
        Document::Urc(record) => scaled(&urc_to_records(record), None),
        Document::Fcif(fcif) => Ok(Loaded { context: fcif.to_ordered_context()?, type_name: fcif.type_name.clone() }),
        Document::Clif(clif) => {
            Ok(Loaded { context: OrderedContext::discrete(clif_to_context(clif)?), type_name: clif.type_name.clone() })
        }
        Document::Table(ctx) => Ok(Loaded { context: OrderedContext::discrete(ctx.clone()), type_name: None }),
    }
}
