//! Command-line front end and JSON navigation service.

pub mod input;
pub mod server;
pub mod session;

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use facet_lattice::formats::{
    fcif_to_clif, serialize_clif, serialize_fcif, serialize_soif, serialize_urc, serialize_urc_sgml,
    write_context_table, ClifDocument, FcifDocument,
};
use facet_lattice::{emit_dot, emit_json, parse_term, Error};

use input::{read_document, scale_set, to_context, Document, Format, SCALES_ENV};
use session::Session;

#[derive(Debug, Parser)]
#[command(name = "facet", version, about = "Concept lattices for resource meta-information")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Input file.
    pub input: PathBuf,
    /// Input format; guessed from the file extension when omitted.
    #[arg(long, value_enum)]
    pub from: Option<Format>,
    /// Scale set for raw records: a bundled name (urc-demo, tei-demo) or a TOML path.
    #[arg(long, env = SCALES_ENV)]
    pub scales: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Fcif,
    Clif,
    Table,
    Soif,
    Urc,
    UrcSgml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagramFormat {
    Dot,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert between formats, scaling raw records on the way.
    Convert {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        to: Target,
        /// Write here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print concept and cover-edge counts.
    Lattice {
        #[command(flatten)]
        source: Source,
    },
    /// Report the concept generated by attribute terms (`tag`, `tag=value`, `tag<=value`).
    Query {
        #[command(flatten)]
        source: Source,
        terms: Vec<String>,
    },
    /// Emit the line diagram.
    Diagram {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "dot")]
        out: DiagramFormat,
    },
    /// Parse and check an input file.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Serve the JSON navigation API.
    Serve {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

fn session(source: &Source) -> Result<Session> {
    Session::load(&source.input, source.from, source.scales.as_deref())
}

/// Runs every command except `serve`, returning what it prints.
pub fn run(command: &Command) -> Result<Vec<u8>> {
    match command {
        Command::Convert { source, to, .. } => convert(source, *to),
        Command::Lattice { source } => {
            let s = session(source)?;
            let ctx = s.lattice.context();
            Ok(format!(
                "objects: {}\nattributes: {}\nincidences: {}\nconcepts: {}\nedges: {}\n",
                ctx.object_count(),
                ctx.attribute_count(),
                ctx.incidence_count(),
                s.lattice.len(),
                s.lattice.edge_count()
            )
            .into_bytes())
        }
        Command::Query { source, terms } => query(&session(source)?, terms).map(String::into_bytes),
        Command::Diagram { source, out } => {
            let s = session(source)?;
            Ok(match out {
                DiagramFormat::Dot => emit_dot(&s.lattice, &s.layout),
                DiagramFormat::Json => emit_json(&s.lattice, &s.layout, s.type_name.clone()) + "\n",
            }
            .into_bytes())
        }
        Command::Validate { source } => {
            let s = session(source)?;
            let ctx = s.context.base();
            Ok(format!(
                "ok: {} objects, {} attributes, {} incidences\n",
                ctx.object_count(),
                ctx.attribute_count(),
                ctx.incidence_count()
            )
            .into_bytes())
        }
        Command::Serve { .. } => bail!("serve runs a server; use serve()"),
    }
}

fn convert(source: &Source, to: Target) -> Result<Vec<u8>> {
    let format = Format::resolve(&source.input, source.from)?;
    let doc = read_document(&source.input, format)?;
    let out = match (to, &doc) {
        (Target::Soif, Document::Soif(stream)) => return Ok(serialize_soif(stream)),
        (Target::Urc, Document::Urc(record)) => serialize_urc(record),
        (Target::UrcSgml, Document::Urc(record)) => serialize_urc_sgml(record),
        (Target::Fcif, Document::Fcif(fcif)) => serialize_fcif(fcif),
        (Target::Clif, Document::Fcif(fcif)) => serialize_clif(&fcif_to_clif(fcif)?),
        (Target::Clif, Document::Clif(clif)) => serialize_clif(clif),
        (Target::Soif | Target::Urc | Target::UrcSgml, _) => {
            bail!("cannot convert {format:?} input to {to:?}")
        }
        (Target::Fcif | Target::Clif | Target::Table, _) => {
            let loaded = to_context(&doc, &scale_set(source.scales.as_deref(), format)?)?;
            match to {
                Target::Fcif => serialize_fcif(&FcifDocument::from_ordered_context(&loaded.context, loaded.type_name)?),
                Target::Clif => {
                    let s = Session::new(String::new(), loaded.context, loaded.type_name);
                    serialize_clif(&ClifDocument::from_lattice(&s.lattice, s.type_name))
                }
                _ => write_context_table(&loaded.context.order_close_incidence()),
            }
        }
    };
    Ok(out.into_bytes())
}

fn query(s: &Session, raw_terms: &[String]) -> Result<String> {
    let terms = raw_terms.iter().map(|t| parse_term(t)).collect::<Result<Vec<_>, _>>()?;
    let ctx = s.lattice.context();
    let id = s.query(&terms).map_err(|e| match e {
        Error::UnknownAttribute(_) | Error::AmbiguousAttribute(_) => {
            let known: Vec<String> = ctx.attributes().iter().map(ToString::to_string).collect();
            anyhow::anyhow!("{e}\nknown attributes:\n  {}", known.join("\n  "))
        }
        other => other.into(),
    })?;
    let view = s.view(id)?;
    let ids = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "concept {id}");
    let _ = writeln!(out, "extent ({}): {}", view.objects.len(), view.objects.join(" "));
    let intent: Vec<String> = view.attributes.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "intent ({}): {}", intent.len(), intent.join(", "));
    let _ = writeln!(out, "upper covers: {}", ids(&view.upper_covers));
    let _ = writeln!(out, "lower covers: {}", ids(&view.lower_covers));
    Ok(out)
}

/// Loads the source and serves it until the process is stopped.
pub async fn serve(source: &Source, host: &str, port: u16) -> Result<()> {
    server::serve(session(source)?, host, port).await
}
