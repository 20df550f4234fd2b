//! Readers and writers for the interchange formats.

pub mod clif;
pub mod convert;
pub mod fcif;
mod lex;
pub mod soif;
pub mod table;
pub mod urc;

pub use clif::{parse_clif, serialize_clif, ClifDocument};
pub use convert::{clif_to_context, clif_to_fcif, fcif_to_clif, records_to_fcif, soif_common_type, soif_to_records};
pub use fcif::{parse_fcif, serialize_fcif, FcifDocument};
pub use soif::{
    parse_soif, parse_soif_stream, serialize_soif, serialize_templates, SoifItem, SoifStream, SoifTemplate,
};
pub use table::{parse_context_table, write_context_table};
pub use urc::{parse_urc, parse_urc_sgml, serialize_urc, serialize_urc_sgml, urc_to_records, UrcLocation, UrcRecord};

/// Decodes 8-bit text: UTF-8 when valid, Latin-1 otherwise.
pub fn decode_text(bytes: &[u8]) -> String {
    match std::str::from_utf8(bytes) {
        Ok(s) => s.to_string(),
        Err(_) => bytes.iter().map(|&b| b as char).collect(),
    }
}
