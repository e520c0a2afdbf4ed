//! Parser for DLMF formula fixtures.
//!
//! TSV columns: `dlmf_id<TAB>texvc<TAB>uses_concepts(comma list)` plus
//! an optional fourth `label` column. Rows carrying a label double as
//! concept definitions: their label is the concept key other rows (and
//! the semantic-macro table) refer to.

use crate::kg::Datatype;

use super::super::record::{
    Category, PropRef, RefKey, UpstreamRecord, UpstreamStatement, UpstreamValue,
};
use super::{ParseOutput, RecordParser};

pub const USES_PROPERTY: &str = "uses symbol concept";
pub const FORMULA_PROPERTY: &str = "defining formula";
pub const DLMF_ID_TYPE: &str = "DLMF ID";

#[derive(Debug, Default)]
pub struct DlmfParser;

impl RecordParser for DlmfParser {
    fn source(&self) -> &str {
        "dlmf"
    }

    fn parse(&self, raw: &[u8]) -> ParseOutput {
        let mut out = ParseOutput::default();
        let text = match std::str::from_utf8(raw) {
            Ok(t) => t,
            Err(e) => {
                out.errors.push(format!("dlmf: not UTF-8: {e}"));
                return out;
            }
        };
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 2 {
                out.errors
                    .push(format!("dlmf line {}: expected at least 2 fields", idx + 1));
                continue;
            }
            let dlmf_id = fields[0].trim();
            let texvc = fields[1];
            if dlmf_id.is_empty() || texvc.is_empty() {
                out.errors
                    .push(format!("dlmf line {}: empty id or formula", idx + 1));
                continue;
            }
            let uses: Vec<&str> = fields
                .get(2)
                .copied()
                .unwrap_or("")
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            let label = fields
                .get(3)
                .copied()
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .unwrap_or_else(|| format!("DLMF {dlmf_id}"));

            let mut record = UpstreamRecord::new_item("dlmf", dlmf_id)
                .with_label("en", &label)
                .with_description("en", "formula from the Digital Library of Mathematical Functions")
                .with_statement(UpstreamStatement::new(
                    PropRef::ByLabel {
                        label: DLMF_ID_TYPE.to_string(),
                        datatype: Datatype::ExternalId,
                    },
                    UpstreamValue::External {
                        id_type: DLMF_ID_TYPE.to_string(),
                        value: dlmf_id.to_string(),
                    },
                ))
                .with_statement(UpstreamStatement::new(
                    PropRef::ByLabel {
                        label: FORMULA_PROPERTY.to_string(),
                        datatype: Datatype::Math,
                    },
                    UpstreamValue::Math(texvc.to_string()),
                ));
            for concept in uses {
                record = record.with_statement(UpstreamStatement::new(
                    PropRef::ByLabel {
                        label: USES_PROPERTY.to_string(),
                        datatype: Datatype::Item,
                    },
                    UpstreamValue::ItemRef(RefKey::ByLabel(concept.to_string())),
                ));
            }
            out.records.push((Category::Formula, record));
        }
        out
    }
}
