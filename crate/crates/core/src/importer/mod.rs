//! Entity import: fetch → parse/categorize → upload, with depth
//! control, per-datasource parsers, and external-id deduplication.

mod connector;
mod engine;
pub mod parsers;
mod propmap;
mod record;

pub use connector::{FixtureConnector, IdSpec, SourceConnector};
pub use engine::{import_entity, import_entity_with_report, run_datasource, seed_dir};
pub use propmap::{PropertyMap, PropertyMapError};
pub use record::{
    Category, PropRef, RefKey, UpstreamRecord, UpstreamStatement, UpstreamValue,
};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::kg::StoreError;

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("store: {0}")]
    Store(StoreError),
    #[error("while importing {upstream_id}: {inner}")]
    StoreAt {
        upstream_id: String,
        inner: StoreError,
    },
    #[error("{source_name}: cannot fetch {upstream_id}: {detail}")]
    Fetch {
        source_name: String,
        upstream_id: String,
        detail: String,
    },
    #[error("{source_name}: {detail}")]
    RecordParse {
        source_name: String,
        detail: String,
    },
    #[error("{source_name}: reference to {upstream_id} was not imported")]
    UnresolvedReference {
        source_name: String,
        upstream_id: String,
    },
    #[error("fixture {path}: {detail}")]
    Fixture { path: String, detail: String },
}

/// Outcome counts for an import run. `created` counts entities newly
/// created for records, `updated` counts records that changed an
/// existing entity, `deduplicated` counts records that matched an
/// existing entity without changing anything. Side entities created to
/// satisfy references are tallied in `stubs_created`.
#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct ImportReport {
    pub created: u32,
    pub updated: u32,
    pub deduplicated: u32,
    pub stubs_created: u32,
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
    pub by_category: BTreeMap<String, u32>,
}

impl ImportReport {
    pub fn merge(&mut self, other: ImportReport) {
        self.created += other.created;
        self.updated += other.updated;
        self.deduplicated += other.deduplicated;
        self.stubs_created += other.stubs_created;
        self.errors.extend(other.errors);
        self.warnings.extend(other.warnings);
        for (k, v) in other.by_category {
            *self.by_category.entry(k).or_default() += v;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
