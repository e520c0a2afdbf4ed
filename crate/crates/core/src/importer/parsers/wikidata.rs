//! Reader for Wikidata-style JSON entity fixtures.
//!
//! One JSON object per entity (a `.json` file or one line of a
//! `.jsonl` file):
//!
//! ```json
//! {"id":"Q1799","kind":"item","labels":{"en":"error function"},
//!  "descriptions":{"en":"special function"},"aliases":{"en":["erf"]},
//!  "claims":[{"property":"P31","value":{"type":"item","id":"Q11348"}}]}
//! ```
//!
//! Claim values use the same tagged shape as local statement values, but
//! ids inside them are upstream ids. This reader backs the fixture
//! connector used by the depth-controlled entity importer.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::kg::{Datatype, EntityKind};

use super::super::record::{PropRef, RefKey, UpstreamRecord, UpstreamStatement, UpstreamValue};
use super::super::ImportError;

#[derive(Debug, Deserialize)]
struct WdEntity {
    id: String,
    kind: EntityKind,
    #[serde(default)]
    datatype: Option<Datatype>,
    #[serde(default)]
    labels: BTreeMap<String, String>,
    #[serde(default)]
    descriptions: BTreeMap<String, String>,
    #[serde(default)]
    aliases: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    claims: Vec<WdClaim>,
}

#[derive(Debug, Deserialize)]
struct WdClaim {
    property: String,
    value: WdValue,
    #[serde(default)]
    qualifiers: Vec<WdQualifier>,
}

#[derive(Debug, Deserialize)]
struct WdQualifier {
    property: String,
    value: WdValue,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum WdValue {
    Item { id: String },
    String { value: String },
    ExternalId { id_type: String, value: String },
    Math { value: String },
    Url { value: String },
    Time { value: String },
}

impl WdValue {
    fn into_upstream(self) -> UpstreamValue {
        match self {
            WdValue::Item { id } => UpstreamValue::ItemRef(RefKey::SameSource(id)),
            WdValue::String { value } => UpstreamValue::Str(value),
            WdValue::ExternalId { id_type, value } => UpstreamValue::External { id_type, value },
            WdValue::Math { value } => UpstreamValue::Math(value),
            WdValue::Url { value } => UpstreamValue::Url(value),
            WdValue::Time { value } => UpstreamValue::Time(value),
        }
    }
}

/// Parses a fixture file holding one JSON entity or JSON-lines of them.
pub fn parse_fixture(source: &str, raw: &str) -> Result<Vec<UpstreamRecord>, ImportError> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    // A whole-file JSON object first, JSON-lines otherwise.
    if let Ok(entity) = serde_json::from_str::<WdEntity>(raw.trim()) {
        return Ok(vec![convert(source, entity)]);
    }
    let mut out = Vec::new();
    for (idx, line) in raw.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let entity: WdEntity =
            serde_json::from_str(line).map_err(|e| ImportError::RecordParse {
                source_name: source.to_string(),
                detail: format!("record {}: {e}", idx + 1),
            })?;
        out.push(convert(source, entity));
    }
    Ok(out)
}

fn convert(source: &str, entity: WdEntity) -> UpstreamRecord {
    let statements = entity
        .claims
        .into_iter()
        .map(|claim| UpstreamStatement {
            property: PropRef::SameSource(claim.property),
            value: claim.value.into_upstream(),
            qualifiers: claim
                .qualifiers
                .into_iter()
                .map(|q| (PropRef::SameSource(q.property), q.value.into_upstream()))
                .collect(),
        })
        .collect();
    UpstreamRecord {
        source: source.to_string(),
        upstream_id: entity.id,
        kind: entity.kind,
        datatype: entity.datatype,
        labels: entity.labels,
        descriptions: entity.descriptions,
        aliases: entity.aliases,
        statements,
    }
}
