//! Wikidata-model entity store: items and properties with statements,
//! an extrinsic-identifier registry with deduplication, and the
//! local↔upstream ID mapping table.

mod entity;
mod external;
mod store;

pub use entity::{
    Completeness, Datatype, Entity, EntityId, EntityKind, IdMapping, ParseEntityIdError,
    Qualifier, Statement, StatementValue,
};
pub use external::{builtin_types, parse_registry_tsv, ExternalIdError, ExternalIdType, IdKind};
pub use store::{KgStore, StatementHandle, StoreError, StoreStats, ENTITIES_FILE, MAPPINGS_FILE};
