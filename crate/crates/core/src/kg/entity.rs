//! Wikidata-model entity types.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Item,
    Property,
}

/// An entity identifier: `Q<number>` for items, `P<number>` for
/// properties. Numbers are unique per kind and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId {
    pub kind: EntityKind,
    pub number: u64,
}

impl EntityId {
    pub fn item(number: u64) -> EntityId {
        EntityId { kind: EntityKind::Item, number }
    }

    pub fn property(number: u64) -> EntityId {
        EntityId { kind: EntityKind::Property, number }
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            EntityKind::Item => 'Q',
            EntityKind::Property => 'P',
        };
        write!(f, "{prefix}{}", self.number)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid entity id {0:?}: expected Q<number> or P<number>")]
pub struct ParseEntityIdError(pub String);

impl FromStr for EntityId {
    type Err = ParseEntityIdError;

    fn from_str(s: &str) -> Result<EntityId, ParseEntityIdError> {
        let err = || ParseEntityIdError(s.to_string());
        let (head, rest) = s.split_at(1.min(s.len()));
        let kind = match head {
            "Q" => EntityKind::Item,
            "P" => EntityKind::Property,
            _ => return Err(err()),
        };
        let number: u64 = rest.parse().map_err(|_| err())?;
        if number == 0 {
            return Err(err());
        }
        Ok(EntityId { kind, number })
    }
}

impl Serialize for EntityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EntityId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<EntityId, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Property value datatypes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Datatype {
    Item,
    String,
    ExternalId,
    Math,
    Url,
    Time,
}

/// A statement value; the variant must match the property's datatype.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum StatementValue {
    Item { id: EntityId },
    String { value: String },
    ExternalId { id_type: String, value: String },
    Math { value: String },
    Url { value: String },
    Time { value: String },
}

impl StatementValue {
    pub fn item(id: EntityId) -> StatementValue {
        StatementValue::Item { id }
    }

    pub fn string(value: impl Into<String>) -> StatementValue {
        StatementValue::String { value: value.into() }
    }

    pub fn external(id_type: impl Into<String>, value: impl Into<String>) -> StatementValue {
        StatementValue::ExternalId { id_type: id_type.into(), value: value.into() }
    }

    pub fn math(value: impl Into<String>) -> StatementValue {
        StatementValue::Math { value: value.into() }
    }

    pub fn datatype(&self) -> Datatype {
        match self {
            StatementValue::Item { .. } => Datatype::Item,
            StatementValue::String { .. } => Datatype::String,
            StatementValue::ExternalId { .. } => Datatype::ExternalId,
            StatementValue::Math { .. } => Datatype::Math,
            StatementValue::Url { .. } => Datatype::Url,
            StatementValue::Time { .. } => Datatype::Time,
        }
    }

    /// Stable rendering for TSV output and deterministic sorting.
    pub fn render(&self) -> String {
        match self {
            StatementValue::Item { id } => id.to_string(),
            StatementValue::String { value }
            | StatementValue::Math { value }
            | StatementValue::Url { value }
            | StatementValue::Time { value } => value.clone(),
            StatementValue::ExternalId { id_type, value } => format!("{id_type}:{value}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qualifier {
    pub property: EntityId,
    pub value: StatementValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement {
    pub property: EntityId,
    pub value: StatementValue,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub qualifiers: Vec<Qualifier>,
}

impl Statement {
    pub fn new(property: EntityId, value: StatementValue) -> Statement {
        Statement { property, value, qualifiers: Vec::new() }
    }
}

/// An item or property with its terms and statements. Handed out by the
/// store as an immutable snapshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub id: EntityId,
    pub kind: EntityKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datatype: Option<Datatype>,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
    #[serde(default)]
    pub descriptions: BTreeMap<String, String>,
    #[serde(default)]
    pub aliases: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub statements: Vec<Statement>,
}

impl Entity {
    pub fn label(&self, lang: &str) -> Option<&str> {
        self.labels.get(lang).map(String::as_str)
    }

    /// The first math-valued statement, if any.
    pub fn first_math(&self) -> Option<&str> {
        self.statements.iter().find_map(|s| match &s.value {
            StatementValue::Math { value } => Some(value.as_str()),
            _ => None,
        })
    }

    pub fn external_ids(&self) -> impl Iterator<Item = (&str, &str)> {
        self.statements.iter().filter_map(|s| match &s.value {
            StatementValue::ExternalId { id_type, value } => {
                Some((id_type.as_str(), value.as_str()))
            }
            _ => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    /// All statements were imported.
    Full,
    /// Only label, description and aliases were imported.
    Stub,
}

/// One row of the local↔upstream identifier mapping table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdMapping {
    pub local: EntityId,
    pub source: String,
    pub upstream: String,
    pub completeness: Completeness,
}
