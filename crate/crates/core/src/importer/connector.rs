//! Source connectors: where upstream records are fetched from.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::kg::{EntityKind, ExternalIdType, IdKind};

use super::parsers::wikidata;
use super::record::UpstreamRecord;
use super::ImportError;

/// Names the external-id statement recorded on every imported entity.
#[derive(Debug, Clone)]
pub struct IdSpec {
    /// English label of the local property holding the upstream id.
    pub property_label: String,
    /// External-id type name (registered via `external_types`).
    pub type_name: String,
}

/// A source entities can be fetched from, either a live API client or a
/// local fixture set. Fetches must be deterministic per fixture set.
pub trait SourceConnector {
    fn source(&self) -> &str;

    fn fetch(&self, upstream_id: &str) -> Result<UpstreamRecord, ImportError>;

    /// How to record upstream ids for entities of this kind.
    fn id_spec(&self, kind: EntityKind) -> IdSpec;

    /// External-id types this connector needs registered.
    fn external_types(&self) -> Vec<ExternalIdType>;
}

/// Connector over a directory of Wikidata-style JSON fixtures. Every
/// `.json`/`.jsonl` file in the directory is loaded eagerly; `fetch`
/// then serves from memory.
pub struct FixtureConnector {
    source: String,
    records: BTreeMap<String, UpstreamRecord>,
}

impl FixtureConnector {
    pub fn from_dir(source: &str, dir: &Path) -> Result<FixtureConnector, ImportError> {
        let mut records = BTreeMap::new();
        let mut paths: Vec<_> = fs::read_dir(dir)
            .map_err(|e| ImportError::Fixture {
                path: dir.display().to_string(),
                detail: e.to_string(),
            })?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| {
                matches!(
                    p.extension().and_then(|e| e.to_str()),
                    Some("json" | "jsonl")
                )
            })
            .collect();
        paths.sort();
        for path in paths {
            let raw = fs::read_to_string(&path).map_err(|e| ImportError::Fixture {
                path: path.display().to_string(),
                detail: e.to_string(),
            })?;
            for record in wikidata::parse_fixture(source, &raw)? {
                if records.contains_key(&record.upstream_id) {
                    return Err(ImportError::Fixture {
                        path: path.display().to_string(),
                        detail: format!("duplicate fixture entity {}", record.upstream_id),
                    });
                }
                records.insert(record.upstream_id.clone(), record);
            }
        }
        Ok(FixtureConnector { source: source.to_string(), records })
    }

    pub fn from_records(source: &str, list: Vec<UpstreamRecord>) -> FixtureConnector {
        let records = list
            .into_iter()
            .map(|r| (r.upstream_id.clone(), r))
            .collect();
        FixtureConnector { source: source.to_string(), records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

impl SourceConnector for FixtureConnector {
    fn source(&self) -> &str {
        &self.source
    }

    fn fetch(&self, upstream_id: &str) -> Result<UpstreamRecord, ImportError> {
        self.records
            .get(upstream_id)
            .cloned()
            .ok_or_else(|| ImportError::Fetch {
                source_name: self.source.clone(),
                upstream_id: upstream_id.to_string(),
                detail: "not in fixture set".to_string(),
            })
    }

    fn id_spec(&self, kind: EntityKind) -> IdSpec {
        let suffix = match kind {
            EntityKind::Item => "QID",
            EntityKind::Property => "PID",
        };
        IdSpec {
            property_label: format!("{} {suffix}", self.source),
            type_name: format!("{} {suffix}", self.source),
        }
    }

    fn external_types(&self) -> Vec<ExternalIdType> {
        let site = match self.source.as_str() {
            "wikidata" => "https://www.wikidata.org/wiki/".to_string(),
            other => format!("https://{other}.invalid/"),
        };
        [("QID", "Q", ""), ("PID", "P", "Property:")]
            .into_iter()
            .map(|(suffix, prefix, path)| {
                ExternalIdType::new(
                    format!("{} {suffix}", self.source),
                    IdKind::Extrinsic,
                    format!(r"{prefix}\d+"),
                    format!("{site}{path}$1"),
                )
                .expect("connector id patterns are valid")
            })
            .collect()
    }
}
