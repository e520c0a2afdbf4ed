//! Upstream record representation shared by connectors and parsers.
//!
//! Upstream statements reference properties and items by source-side
//! keys; the import engine rewrites them to local IDs at upload time.

use std::collections::BTreeMap;

use crate::kg::{Datatype, EntityKind};

/// How an upstream statement names its property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropRef {
    /// Property id within the same source (e.g. a Wikidata `P31`),
    /// resolved through the property mapping table.
    SameSource(String),
    /// A local property by English label, created on demand.
    ByLabel { label: String, datatype: Datatype },
}

/// How an upstream item reference names its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefKey {
    /// Entity id within the same source, resolved through the mapping
    /// table (the target must have been imported alongside).
    SameSource(String),
    /// An entity by English label, created as a minimal item if absent.
    ByLabel(String),
    /// An entity identified by an external id, deduplicated through the
    /// registry and created as a labeled stub if absent.
    ByExternalId {
        id_type: String,
        value: String,
        label: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpstreamValue {
    ItemRef(RefKey),
    Str(String),
    External { id_type: String, value: String },
    Math(String),
    Url(String),
    Time(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpstreamStatement {
    pub property: PropRef,
    pub value: UpstreamValue,
    pub qualifiers: Vec<(PropRef, UpstreamValue)>,
}

impl UpstreamStatement {
    pub fn new(property: PropRef, value: UpstreamValue) -> UpstreamStatement {
        UpstreamStatement { property, value, qualifiers: Vec::new() }
    }
}

/// One entity as presented by its source, before ID rewriting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpstreamRecord {
    pub source: String,
    pub upstream_id: String,
    pub kind: EntityKind,
    /// Required when `kind` is a property.
    pub datatype: Option<Datatype>,
    pub labels: BTreeMap<String, String>,
    pub descriptions: BTreeMap<String, String>,
    pub aliases: BTreeMap<String, Vec<String>>,
    pub statements: Vec<UpstreamStatement>,
}

impl UpstreamRecord {
    pub fn new_item(source: impl Into<String>, upstream_id: impl Into<String>) -> UpstreamRecord {
        UpstreamRecord {
            source: source.into(),
            upstream_id: upstream_id.into(),
            kind: EntityKind::Item,
            datatype: None,
            labels: BTreeMap::new(),
            descriptions: BTreeMap::new(),
            aliases: BTreeMap::new(),
            statements: Vec::new(),
        }
    }

    /// Same-source ids this record's statements refer to.
    pub fn same_source_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for st in &self.statements {
            if let UpstreamValue::ItemRef(RefKey::SameSource(id)) = &st.value {
                out.push(id.as_str());
            }
            for (_, qv) in &st.qualifiers {
                if let UpstreamValue::ItemRef(RefKey::SameSource(id)) = qv {
                    out.push(id.as_str());
                }
            }
        }
        out
    }

    pub fn with_label(mut self, lang: &str, label: &str) -> UpstreamRecord {
        self.labels.insert(lang.to_string(), label.to_string());
        self
    }

    pub fn with_description(mut self, lang: &str, description: &str) -> UpstreamRecord {
        self.descriptions
            .insert(lang.to_string(), description.to_string());
        self
    }

    pub fn with_statement(mut self, st: UpstreamStatement) -> UpstreamRecord {
        self.statements.push(st);
        self
    }
}

/// Categories records are segregated into by the datasource parsers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Category {
    Publication,
    Author,
    Journal,
    Software,
    Dataset,
    Formula,
    Package,
    Collection,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::Publication => "publication",
            Category::Author => "author",
            Category::Journal => "journal",
            Category::Software => "software",
            Category::Dataset => "dataset",
            Category::Formula => "formula",
            Category::Package => "package",
            Category::Collection => "collection",
        }
    }
}
