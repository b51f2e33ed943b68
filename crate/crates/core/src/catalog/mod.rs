//! Machine-readable catalog of superintegrable systems, the expression
//! parser for its potentials, and the verification driver.

mod entry;
mod gauge;
mod parse;
mod verify;

use thiserror::Error;

pub use entry::{BracketSpec, Catalog, CatalogEntry, EntryId, ARBITRARY, CATALOG_DIR_VAR};
pub use gauge::{gauge_checks, GaugeCheck};
pub use parse::{parse_gaussian, parse_radial, ParseError, ParseErrorKind};
pub use verify::{
    hermiticity, parse_vector_combo, summarize, verify_all, verify_entry, EntryReport, EpsChoice, Hermiticity, Mode,
    Report, Summary, Verdict, VerifyOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("entry {id}: field {field}: {source}")]
    Parse { id: String, field: String, source: ParseError },
    #[error("entry {id}: {msg}")]
    Invalid { id: String, msg: String },
    #[error("malformed catalog file: {0}")]
    Format(String),
    #[error("{0}")]
    Io(String),
}
