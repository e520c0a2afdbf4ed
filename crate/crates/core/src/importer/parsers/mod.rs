//! Per-datasource record parsers.

mod biblio;
mod cran;
mod dlmf;
pub mod wikidata;

pub use biblio::{BiblioParser, AUTHOR_PROPERTY, DATE_PROPERTY, JOURNAL_PROPERTY};
pub use cran::{CranParser, CRAN_ID_TYPE, DEPENDS_PROPERTY, VERSION_PROPERTY, WEBSITE_PROPERTY};
pub use dlmf::{DlmfParser, DLMF_ID_TYPE, FORMULA_PROPERTY, USES_PROPERTY};

use super::record::{Category, UpstreamRecord};

/// Parsed records plus the per-record failures that were skipped over.
#[derive(Debug, Default)]
pub struct ParseOutput {
    pub records: Vec<(Category, UpstreamRecord)>,
    pub errors: Vec<String>,
}

/// A datasource record parser: raw file bytes in, categorized upstream
/// records out. Parse failures are collected per record, not fatal.
pub trait RecordParser {
    fn source(&self) -> &str;
    fn parse(&self, raw: &[u8]) -> ParseOutput;
}
