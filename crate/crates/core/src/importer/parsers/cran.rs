//! Parser for CRAN package metadata in DESCRIPTION/DCF form.
//!
//! Blocks of `Key: value` fields separated by blank lines (the shape of
//! CRAN's PACKAGES index); continuation lines are indented. The package
//! name is its identifier (the `CRAN Project` intrinsic-name type).

use std::collections::BTreeMap;

use crate::kg::Datatype;

use super::super::record::{
    Category, PropRef, RefKey, UpstreamRecord, UpstreamStatement, UpstreamValue,
};
use super::{ParseOutput, RecordParser};

pub const CRAN_ID_TYPE: &str = "CRAN Project";
pub const DEPENDS_PROPERTY: &str = "depends on software";
pub const VERSION_PROPERTY: &str = "software version identifier";
pub const WEBSITE_PROPERTY: &str = "official website";

#[derive(Debug, Default)]
pub struct CranParser;

impl RecordParser for CranParser {
    fn source(&self) -> &str {
        "cran"
    }

    fn parse(&self, raw: &[u8]) -> ParseOutput {
        let mut out = ParseOutput::default();
        let text = match std::str::from_utf8(raw) {
            Ok(t) => t,
            Err(e) => {
                out.errors.push(format!("cran: not UTF-8: {e}"));
                return out;
            }
        };
        for (block_no, block) in split_blocks(text).into_iter().enumerate() {
            match parse_block(&block) {
                Ok(Some(record)) => out.records.push((Category::Package, record)),
                Ok(None) => {}
                Err(e) => out.errors.push(format!("cran block {}: {e}", block_no + 1)),
            }
        }
        out
    }
}

fn split_blocks(text: &str) -> Vec<Vec<(String, String)>> {
    let mut blocks = Vec::new();
    let mut current: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        if line.trim().is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
            continue;
        }
        if line.starts_with(' ') || line.starts_with('\t') {
            // Continuation of the previous field.
            if let Some((_, v)) = current.last_mut() {
                v.push(' ');
                v.push_str(line.trim());
            }
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            current.push((key.trim().to_string(), value.trim().to_string()));
        }
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    blocks
}

fn parse_block(fields: &[(String, String)]) -> Result<Option<UpstreamRecord>, String> {
    let map: BTreeMap<&str, &str> = fields
        .iter()
        .map(|(k, v)| (k.as_str(), v.as_str()))
        .collect();
    let Some(name) = map.get("Package") else {
        return Err("missing Package field".to_string());
    };
    if name.is_empty() {
        return Err("empty Package field".to_string());
    }
    let mut record = UpstreamRecord::new_item("cran", *name).with_label("en", name);
    if let Some(title) = map.get("Title") {
        record = record.with_description("en", title);
    }
    record = record.with_statement(UpstreamStatement::new(
        PropRef::ByLabel {
            label: CRAN_ID_TYPE.to_string(),
            datatype: Datatype::ExternalId,
        },
        UpstreamValue::External {
            id_type: CRAN_ID_TYPE.to_string(),
            value: name.to_string(),
        },
    ));
    if let Some(version) = map.get("Version") {
        record = record.with_statement(UpstreamStatement::new(
            PropRef::ByLabel {
                label: VERSION_PROPERTY.to_string(),
                datatype: Datatype::String,
            },
            UpstreamValue::Str(version.to_string()),
        ));
    }
    if let Some(url) = map.get("URL") {
        if let Some(first) = url.split(',').next() {
            record = record.with_statement(UpstreamStatement::new(
                PropRef::ByLabel {
                    label: WEBSITE_PROPERTY.to_string(),
                    datatype: Datatype::Url,
                },
                UpstreamValue::Url(first.trim().to_string()),
            ));
        }
    }
    for field in ["Depends", "Imports"] {
        let Some(deps) = map.get(field) else { continue };
        for dep in deps.split(',') {
            // Strip version constraints: `glue (>= 1.3.0)` -> `glue`.
            let dep = dep.split('(').next().unwrap_or("").trim();
            if dep.is_empty() || dep == "R" {
                continue;
            }
            record = record.with_statement(UpstreamStatement::new(
                PropRef::ByLabel {
                    label: DEPENDS_PROPERTY.to_string(),
                    datatype: Datatype::Item,
                },
                UpstreamValue::ItemRef(RefKey::ByExternalId {
                    id_type: CRAN_ID_TYPE.to_string(),
                    value: dep.to_string(),
                    label: dep.to_string(),
                }),
            ));
        }
    }
    Ok(Some(record))
}
