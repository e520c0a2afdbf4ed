//! The entity store: creation, statements, external-id deduplication,
//! ID mappings, and JSON-lines persistence.
//!
//! Single-writer, multiple-reader: mutation requires `&mut self`, reads
//! work on `&self`, and entities handed out are immutable snapshots.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use thiserror::Error;

use crate::mathml::{expand_semantics, MacroTable};
use crate::texvc::Diagnostic;

use super::entity::{
    Completeness, Datatype, Entity, EntityId, EntityKind, IdMapping, Statement, StatementValue,
};
use super::external::{builtin_types, ExternalIdType};

pub const ENTITIES_FILE: &str = "entities.jsonl";
pub const MAPPINGS_FILE: &str = "mappings.jsonl";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("label {label:?} ({lang}) already used by {existing}")]
    LabelCollision {
        lang: String,
        label: String,
        existing: EntityId,
    },
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
    #[error("{0} is not a property")]
    NotAProperty(EntityId),
    #[error("a property needs a datatype")]
    MissingDatatype,
    #[error("items do not carry a datatype")]
    DatatypeOnItem,
    #[error("property {property} expects {expected:?}, got {got:?}")]
    DatatypeMismatch {
        property: EntityId,
        expected: Datatype,
        got: Datatype,
    },
    #[error("math value does not parse: {0}")]
    InvalidMath(Diagnostic),
    #[error("time value {0:?} is not an ISO-8601 date or datetime")]
    InvalidTime(String),
    #[error("external id type {0:?} is not registered")]
    UnregisteredExternalType(String),
    #[error("value {value:?} does not match the pattern of {id_type}")]
    PatternMismatch { id_type: String, value: String },
    #[error("external id {id_type}:{value} already identifies {existing}")]
    DuplicateExternalId {
        id_type: String,
        value: String,
        existing: EntityId,
    },
    #[error("({upstream_source}, {upstream}) is already mapped to {existing}, not {requested}")]
    MappingConflict {
        upstream_source: String,
        upstream: String,
        existing: EntityId,
        requested: EntityId,
    },
    #[error("{local} is already mapped to {upstream_source}:{existing} within this source")]
    LocalAlreadyMapped {
        local: EntityId,
        upstream_source: String,
        existing: String,
    },
    #[error("conflicting registration for external id type {0:?}")]
    ExternalTypeConflict(String),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("{file} line {line}: {detail}")]
    Corrupt {
        file: String,
        line: usize,
        detail: String,
    },
}

/// Position of a statement after insertion. `inserted` is false when an
/// identical property+value pair was already present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatementHandle {
    pub subject: EntityId,
    pub index: usize,
    pub inserted: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct StoreStats {
    pub items: u64,
    pub properties: u64,
    pub statements: u64,
    /// Labels + descriptions + aliases + statements + qualifiers.
    pub triples: u64,
    pub mappings: u64,
}

#[derive(Debug)]
pub struct KgStore {
    entities: BTreeMap<EntityId, Entity>,
    next_item: u64,
    next_property: u64,
    // (source, upstream) -> row
    mappings: BTreeMap<(String, String), IdMapping>,
    // (source, local) -> upstream, to keep locals unique per source
    local_index: BTreeMap<(String, EntityId), String>,
    ext_types: BTreeMap<String, ExternalIdType>,
    // (type name, value) -> carrier entity
    ext_index: BTreeMap<(String, String), EntityId>,
    // (lang, kind, label) -> entity
    label_index: BTreeMap<(String, EntityKind, String), EntityId>,
    macros: MacroTable,
}

impl Default for KgStore {
    fn default() -> Self {
        Self::new()
    }
}

impl KgStore {
    /// Empty store with the built-in external-id registry and semantic
    /// macro table.
    pub fn new() -> KgStore {
        KgStore::with_macros(MacroTable::builtin().clone())
    }

    /// Empty store validating math statements against a specific macro
    /// table.
    pub fn with_macros(macros: MacroTable) -> KgStore {
        KgStore {
            entities: BTreeMap::new(),
            next_item: 1,
            next_property: 1,
            mappings: BTreeMap::new(),
            local_index: BTreeMap::new(),
            ext_types: builtin_types().clone(),
            ext_index: BTreeMap::new(),
            label_index: BTreeMap::new(),
            macros,
        }
    }

    pub fn macros(&self) -> &MacroTable {
        &self.macros
    }

    // ----- entity creation ------------------------------------------------

    pub fn create_entity(
        &mut self,
        kind: EntityKind,
        labels: BTreeMap<String, String>,
        descriptions: BTreeMap<String, String>,
        aliases: BTreeMap<String, Vec<String>>,
        datatype: Option<Datatype>,
    ) -> Result<EntityId, StoreError> {
        match (kind, datatype) {
            (EntityKind::Property, None) => return Err(StoreError::MissingDatatype),
            (EntityKind::Item, Some(_)) => return Err(StoreError::DatatypeOnItem),
            _ => {}
        }
        for (lang, label) in &labels {
            if let Some(existing) = self.label_index.get(&(lang.clone(), kind, label.clone())) {
                return Err(StoreError::LabelCollision {
                    lang: lang.clone(),
                    label: label.clone(),
                    existing: *existing,
                });
            }
        }
        let id = match kind {
            EntityKind::Item => {
                let id = EntityId::item(self.next_item);
                self.next_item += 1;
                id
            }
            EntityKind::Property => {
                let id = EntityId::property(self.next_property);
                self.next_property += 1;
                id
            }
        };
        for (lang, label) in &labels {
            self.label_index
                .insert((lang.clone(), kind, label.clone()), id);
        }
        self.entities.insert(
            id,
            Entity {
                id,
                kind,
                datatype,
                labels,
                descriptions,
                aliases,
                statements: Vec::new(),
            },
        );
        Ok(id)
    }

    pub fn create_item(&mut self, label_en: &str, description_en: &str) -> Result<EntityId, StoreError> {
        self.create_entity(
            EntityKind::Item,
            BTreeMap::from([("en".to_string(), label_en.to_string())]),
            if description_en.is_empty() {
                BTreeMap::new()
            } else {
                BTreeMap::from([("en".to_string(), description_en.to_string())])
            },
            BTreeMap::new(),
            None,
        )
    }

    pub fn create_property(&mut self, label_en: &str, datatype: Datatype) -> Result<EntityId, StoreError> {
        self.create_entity(
            EntityKind::Property,
            BTreeMap::from([("en".to_string(), label_en.to_string())]),
            BTreeMap::new(),
            BTreeMap::new(),
            Some(datatype),
        )
    }

    /// The property labeled `label_en`, created with `datatype` if absent.
    pub fn ensure_property(&mut self, label_en: &str, datatype: Datatype) -> Result<EntityId, StoreError> {
        if let Some(id) = self
            .label_index
            .get(&("en".to_string(), EntityKind::Property, label_en.to_string()))
        {
            return Ok(*id);
        }
        self.create_property(label_en, datatype)
    }

    // ----- statements -----------------------------------------------------

    /// Appends a statement. Idempotent on exact property+value
    /// duplicates: the existing handle is returned with `inserted: false`.
    pub fn add_statement(&mut self, subject: EntityId, st: Statement) -> Result<StatementHandle, StoreError> {
        if !self.entities.contains_key(&subject) {
            return Err(StoreError::UnknownEntity(subject));
        }
        let property = self
            .entities
            .get(&st.property)
            .ok_or(StoreError::UnknownEntity(st.property))?;
        let expected = property
            .datatype
            .ok_or(StoreError::NotAProperty(st.property))?;
        let got = st.value.datatype();
        if expected != got {
            return Err(StoreError::DatatypeMismatch {
                property: st.property,
                expected,
                got,
            });
        }
        self.validate_value(&st.value)?;
        for q in &st.qualifiers {
            let qprop = self
                .entities
                .get(&q.property)
                .ok_or(StoreError::UnknownEntity(q.property))?;
            let qexpected = qprop.datatype.ok_or(StoreError::NotAProperty(q.property))?;
            if qexpected != q.value.datatype() {
                return Err(StoreError::DatatypeMismatch {
                    property: q.property,
                    expected: qexpected,
                    got: q.value.datatype(),
                });
            }
            self.validate_value(&q.value)?;
        }
        // External ids are unique across the store; that uniqueness is
        // what makes resolve_external a dedup primitive.
        if let StatementValue::ExternalId { id_type, value } = &st.value {
            if let Some(existing) = self.ext_index.get(&(id_type.clone(), value.clone())) {
                if *existing != subject {
                    return Err(StoreError::DuplicateExternalId {
                        id_type: id_type.clone(),
                        value: value.clone(),
                        existing: *existing,
                    });
                }
            }
        }

        let entity = self.entities.get_mut(&subject).expect("subject checked");
        if let Some(index) = entity
            .statements
            .iter()
            .position(|s| s.property == st.property && s.value == st.value)
        {
            return Ok(StatementHandle { subject, index, inserted: false });
        }
        if let StatementValue::ExternalId { id_type, value } = &st.value {
            self.ext_index
                .insert((id_type.clone(), value.clone()), subject);
        }
        let entity = self.entities.get_mut(&subject).expect("subject checked");
        entity.statements.push(st);
        Ok(StatementHandle {
            subject,
            index: self.entities[&subject].statements.len() - 1,
            inserted: true,
        })
    }

    fn validate_value(&self, value: &StatementValue) -> Result<(), StoreError> {
        match value {
            StatementValue::Item { id } => {
                if !self.entities.contains_key(id) {
                    return Err(StoreError::UnknownEntity(*id));
                }
            }
            StatementValue::Math { value } => {
                expand_semantics(value, &self.macros).map_err(StoreError::InvalidMath)?;
            }
            StatementValue::ExternalId { id_type, value } => {
                let ty = self
                    .ext_types
                    .get(id_type)
                    .ok_or_else(|| StoreError::UnregisteredExternalType(id_type.clone()))?;
                if !ty.matches(value) {
                    return Err(StoreError::PatternMismatch {
                        id_type: id_type.clone(),
                        value: value.clone(),
                    });
                }
            }
            StatementValue::Time { value } => {
                if !is_iso_8601ish(value) {
                    return Err(StoreError::InvalidTime(value.clone()));
                }
            }
            StatementValue::String { .. } | StatementValue::Url { .. } => {}
        }
        Ok(())
    }

    // ----- external identifiers --------------------------------------------

    pub fn register_external_type(&mut self, ty: ExternalIdType) -> Result<(), StoreError> {
        if let Some(existing) = self.ext_types.get(&ty.name) {
            if *existing != ty {
                return Err(StoreError::ExternalTypeConflict(ty.name.clone()));
            }
            return Ok(());
        }
        self.ext_types.insert(ty.name.clone(), ty);
        Ok(())
    }

    pub fn external_type(&self, name: &str) -> Option<&ExternalIdType> {
        self.ext_types.get(name)
    }

    /// The unique entity carrying this external id, if any.
    pub fn resolve_external(&self, type_name: &str, value: &str) -> Result<Option<EntityId>, StoreError> {
        let ty = self
            .ext_types
            .get(type_name)
            .ok_or_else(|| StoreError::UnregisteredExternalType(type_name.to_string()))?;
        if !ty.matches(value) {
            return Err(StoreError::PatternMismatch {
                id_type: type_name.to_string(),
                value: value.to_string(),
            });
        }
        Ok(self
            .ext_index
            .get(&(type_name.to_string(), value.to_string()))
            .copied())
    }

    // ----- mappings ---------------------------------------------------------

    /// Upsert of a mapping row. Re-recording with `full` upgrades a stub;
    /// a `full` row never downgrades back to `stub`.
    pub fn record_mapping(
        &mut self,
        local: EntityId,
        source: &str,
        upstream: &str,
        completeness: Completeness,
    ) -> Result<(), StoreError> {
        if !self.entities.contains_key(&local) {
            return Err(StoreError::UnknownEntity(local));
        }
        let key = (source.to_string(), upstream.to_string());
        if let Some(row) = self.mappings.get_mut(&key) {
            if row.local != local {
                return Err(StoreError::MappingConflict {
                    upstream_source: source.to_string(),
                    upstream: upstream.to_string(),
                    existing: row.local,
                    requested: local,
                });
            }
            if completeness == Completeness::Full {
                row.completeness = Completeness::Full;
            }
            return Ok(());
        }
        let local_key = (source.to_string(), local);
        if let Some(existing) = self.local_index.get(&local_key) {
            if existing != upstream {
                return Err(StoreError::LocalAlreadyMapped {
                    local,
                    upstream_source: source.to_string(),
                    existing: existing.clone(),
                });
            }
        }
        self.local_index.insert(local_key, upstream.to_string());
        self.mappings.insert(
            key,
            IdMapping {
                local,
                source: source.to_string(),
                upstream: upstream.to_string(),
                completeness,
            },
        );
        Ok(())
    }

    pub fn get_mapping(&self, source: &str, upstream: &str) -> Option<(EntityId, Completeness)> {
        self.mappings
            .get(&(source.to_string(), upstream.to_string()))
            .map(|row| (row.local, row.completeness))
    }

    pub fn mappings(&self) -> impl Iterator<Item = &IdMapping> {
        self.mappings.values()
    }

    // ----- reads -------------------------------------------------------------

    pub fn entity(&self, id: EntityId) -> Option<&Entity> {
        self.entities.get(&id)
    }

    pub fn contains(&self, id: EntityId) -> bool {
        self.entities.contains_key(&id)
    }

    /// All entities in (kind, number) order.
    pub fn entities(&self) -> impl Iterator<Item = &Entity> {
        self.entities.values()
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    /// Entities (of any kind) whose label in `lang` equals `label`.
    pub fn find_by_label(&self, lang: &str, label: &str) -> Vec<EntityId> {
        [EntityKind::Item, EntityKind::Property]
            .into_iter()
            .filter_map(|kind| {
                self.label_index
                    .get(&(lang.to_string(), kind, label.to_string()))
                    .copied()
            })
            .collect()
    }

    pub fn item_by_label(&self, lang: &str, label: &str) -> Option<EntityId> {
        self.label_index
            .get(&(lang.to_string(), EntityKind::Item, label.to_string()))
            .copied()
    }

    pub fn property_by_label(&self, lang: &str, label: &str) -> Option<EntityId> {
        self.label_index
            .get(&(lang.to_string(), EntityKind::Property, label.to_string()))
            .copied()
    }

    pub fn stats(&self) -> StoreStats {
        let mut stats = StoreStats::default();
        for e in self.entities.values() {
            match e.kind {
                EntityKind::Item => stats.items += 1,
                EntityKind::Property => stats.properties += 1,
            }
            stats.statements += e.statements.len() as u64;
            let qualifiers: u64 = e.statements.iter().map(|s| s.qualifiers.len() as u64).sum();
            let terms = e.labels.len() as u64
                + e.descriptions.len() as u64
                + e.aliases.values().map(|a| a.len() as u64).sum::<u64>();
            stats.triples += terms + e.statements.len() as u64 + qualifiers;
        }
        stats.mappings = self.mappings.len() as u64;
        stats
    }

    // ----- persistence ---------------------------------------------------------

    /// Writes `entities.jsonl` and `mappings.jsonl` into `dir`,
    /// creating it if needed. Output is canonical: properties before
    /// items, both in numeric order; mappings sorted by (source,
    /// upstream). Exporting twice yields byte-identical files.
    pub fn save(&self, dir: &Path) -> Result<(), StoreError> {
        fs::create_dir_all(dir)?;
        let mut entities = fs::File::create(dir.join(ENTITIES_FILE))?;
        let mut sorted: Vec<&Entity> = self.entities.values().collect();
        sorted.sort_by_key(|e| (e.kind == EntityKind::Item, e.id.number));
        for e in sorted {
            let line = serde_json::to_string(e).expect("entity serialization cannot fail");
            writeln!(entities, "{line}")?;
        }
        let mut mappings = fs::File::create(dir.join(MAPPINGS_FILE))?;
        for row in self.mappings.values() {
            let line = serde_json::to_string(row).expect("mapping serialization cannot fail");
            writeln!(mappings, "{line}")?;
        }
        Ok(())
    }

    /// Loads a store previously written by [`KgStore::save`]. IDs are
    /// preserved byte-exactly; indexes are rebuilt.
    pub fn load(dir: &Path) -> Result<KgStore, StoreError> {
        let mut store = KgStore::new();
        let entities_path = dir.join(ENTITIES_FILE);
        let file = fs::File::open(&entities_path)?;
        for (idx, line) in io::BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let entity: Entity = serde_json::from_str(&line).map_err(|e| StoreError::Corrupt {
                file: ENTITIES_FILE.to_string(),
                line: idx + 1,
                detail: e.to_string(),
            })?;
            store.insert_loaded(entity, idx + 1)?;
        }
        // Referential integrity: every item reference must resolve.
        for entity in store.entities.values() {
            let refs = entity
                .statements
                .iter()
                .flat_map(|st| {
                    std::iter::once(&st.value).chain(st.qualifiers.iter().map(|q| &q.value))
                })
                .filter_map(|v| match v {
                    StatementValue::Item { id } => Some(*id),
                    _ => None,
                });
            for id in refs {
                if !store.entities.contains_key(&id) {
                    return Err(StoreError::Corrupt {
                        file: ENTITIES_FILE.to_string(),
                        line: 0,
                        detail: format!("{} references missing entity {id}", entity.id),
                    });
                }
            }
        }
        let mappings_path = dir.join(MAPPINGS_FILE);
        if mappings_path.exists() {
            let file = fs::File::open(&mappings_path)?;
            for (idx, line) in io::BufReader::new(file).lines().enumerate() {
                let line = line?;
                if line.is_empty() {
                    continue;
                }
                let row: IdMapping = serde_json::from_str(&line).map_err(|e| StoreError::Corrupt {
                    file: MAPPINGS_FILE.to_string(),
                    line: idx + 1,
                    detail: e.to_string(),
                })?;
                store
                    .local_index
                    .insert((row.source.clone(), row.local), row.upstream.clone());
                store
                    .mappings
                    .insert((row.source.clone(), row.upstream.clone()), row);
            }
        }
        Ok(store)
    }

    fn insert_loaded(&mut self, entity: Entity, line: usize) -> Result<(), StoreError> {
        let corrupt = |detail: String| StoreError::Corrupt {
            file: ENTITIES_FILE.to_string(),
            line,
            detail,
        };
        if self.entities.contains_key(&entity.id) {
            return Err(corrupt(format!("duplicate entity id {}", entity.id)));
        }
        for (lang, label) in &entity.labels {
            let key = (lang.clone(), entity.kind, label.clone());
            if let Some(other) = self.label_index.get(&key) {
                return Err(corrupt(format!(
                    "label {label:?} ({lang}) duplicated by {other} and {}",
                    entity.id
                )));
            }
            self.label_index.insert(key, entity.id);
        }
        for (id_type, value) in entity.external_ids() {
            let key = (id_type.to_string(), value.to_string());
            if let Some(other) = self.ext_index.get(&key) {
                if *other != entity.id {
                    return Err(corrupt(format!(
                        "external id {id_type}:{value} carried by both {other} and {}",
                        entity.id
                    )));
                }
            }
            self.ext_index.insert(key, entity.id);
        }
        match entity.kind {
            EntityKind::Item => self.next_item = self.next_item.max(entity.id.number + 1),
            EntityKind::Property => {
                self.next_property = self.next_property.max(entity.id.number + 1)
            }
        }
        self.entities.insert(entity.id, entity);
        Ok(())
    }
}

/// Date (`2023-05-01`) or datetime (`2023-05-01T12:00:00Z`) shapes.
fn is_iso_8601ish(value: &str) -> bool {
    let bytes = value.as_bytes();
    let date_ok = |b: &[u8]| {
        b.len() == 10
            && b[0..4].iter().all(u8::is_ascii_digit)
            && b[4] == b'-'
            && b[5..7].iter().all(u8::is_ascii_digit)
            && b[7] == b'-'
            && b[8..10].iter().all(u8::is_ascii_digit)
    };
    if date_ok(bytes) {
        return true;
    }
    if bytes.len() >= 20 && date_ok(&bytes[..10]) && bytes[10] == b'T' {
        let time = &bytes[11..19];
        return time[0..2].iter().all(u8::is_ascii_digit)
            && time[2] == b':'
            && time[3..5].iter().all(u8::is_ascii_digit)
            && time[5] == b':'
            && time[6..8].iter().all(u8::is_ascii_digit)
            && bytes[19] == b'Z';
    }
    false
}
