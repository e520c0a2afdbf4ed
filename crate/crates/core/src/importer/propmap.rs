//! Upstream-property → local-property mapping table.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use thiserror::Error;

use crate::kg::Datatype;

const BUILTIN_TSV: &str = include_str!("../../data/property_map.tsv");

#[derive(Debug, Error)]
pub enum PropertyMapError {
    #[error("line {line}: expected 4 tab-separated fields")]
    MissingFields { line: usize },
    #[error("line {line}: unknown datatype {value:?}")]
    BadDatatype { line: usize, value: String },
    #[error("line {line}: duplicate mapping for {source_name} {property}")]
    Duplicate { line: usize, source_name: String, property: String },
}

/// Maps (source, upstream property id) to a local property label and
/// datatype. New local properties are defined only when needed, so the
/// local schema mirrors the upstream one lazily.
#[derive(Debug, Clone, Default)]
pub struct PropertyMap {
    entries: BTreeMap<(String, String), (String, Datatype)>,
}

impl PropertyMap {
    pub fn builtin() -> &'static PropertyMap {
        static BUILTIN: LazyLock<PropertyMap> = LazyLock::new(|| {
            PropertyMap::parse_tsv(BUILTIN_TSV).expect("built-in property map is valid")
        });
        &BUILTIN
    }

    pub fn parse_tsv(src: &str) -> Result<PropertyMap, PropertyMapError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if fields.len() < 4 {
                return Err(PropertyMapError::MissingFields { line });
            }
            let datatype = match fields[3] {
                "item" => Datatype::Item,
                "string" => Datatype::String,
                "external-id" => Datatype::ExternalId,
                "math" => Datatype::Math,
                "url" => Datatype::Url,
                "time" => Datatype::Time,
                other => {
                    return Err(PropertyMapError::BadDatatype { line, value: other.into() })
                }
            };
            let key = (fields[0].to_string(), fields[1].to_string());
            if entries.contains_key(&key) {
                return Err(PropertyMapError::Duplicate {
                    line,
                    source_name: key.0,
                    property: key.1,
                });
            }
            entries.insert(key, (fields[2].to_string(), datatype));
        }
        Ok(PropertyMap { entries })
    }

    pub fn get(&self, source: &str, upstream_property: &str) -> Option<(&str, Datatype)> {
        self.entries
            .get(&(source.to_string(), upstream_property.to_string()))
            .map(|(label, dt)| (label.as_str(), *dt))
    }
}
