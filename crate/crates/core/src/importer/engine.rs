//! The import pipeline: fetch → parse/categorize → upload.
//!
//! All store mutations happen in deterministic order (records sorted by
//! upstream id within each breadth-first level), so identical inputs
//! produce identical stores, and re-running any import is a no-op.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::kg::{
    Completeness, Datatype, EntityId, EntityKind, KgStore, Qualifier, Statement, StatementValue,
    StoreError,
};

use super::connector::SourceConnector;
use super::parsers::{BiblioParser, CranParser, DlmfParser, RecordParser};
use super::propmap::PropertyMap;
use super::record::{PropRef, RefKey, UpstreamRecord, UpstreamStatement, UpstreamValue};
use super::{ImportError, ImportReport};

/// Imports one entity (and, per the depth rule, its neighborhood).
///
/// Depth `0` imports the target as a stub: labels, descriptions and
/// aliases only. Depth `k ≥ 1` imports the target's statements in full
/// and every referenced entity at depth `k − 1`. Every imported entity
/// receives an external-id statement recording its upstream id plus a
/// mapping row. Re-importing an already-full entity is a no-op
/// returning the existing id; re-importing at higher depth upgrades
/// stubs. Cycles terminate.
pub fn import_entity(
    store: &mut KgStore,
    connector: &dyn SourceConnector,
    upstream_id: &str,
    depth: u32,
) -> Result<EntityId, ImportError> {
    import_entity_with_report(store, connector, PropertyMap::builtin(), upstream_id, depth)
        .map(|(id, _)| id)
}

pub fn import_entity_with_report(
    store: &mut KgStore,
    connector: &dyn SourceConnector,
    propmap: &PropertyMap,
    upstream_id: &str,
    depth: u32,
) -> Result<(EntityId, ImportReport), ImportError> {
    let mut report = ImportReport::default();
    let source = connector.source().to_string();
    for ty in connector.external_types() {
        store.register_external_type(ty).map_err(ImportError::from)?;
    }

    // Phase A: discover the import set and the effective depth of each
    // node (the maximum over all paths, i.e. depth − BFS distance).
    let mut records: BTreeMap<String, UpstreamRecord> = BTreeMap::new();
    let mut depth_of: BTreeMap<String, u32> = BTreeMap::new();
    let mut frontier: Vec<(String, u32)> = vec![(upstream_id.to_string(), depth)];
    while !frontier.is_empty() {
        frontier.sort();
        frontier.dedup();
        let mut next = Vec::new();
        for (uid, d) in frontier {
            match depth_of.get(&uid) {
                Some(&seen) if seen >= d => continue,
                _ => {}
            }
            depth_of.insert(uid.clone(), d);
            if !records.contains_key(&uid) {
                let record = connector.fetch(&uid)?;
                records.insert(uid.clone(), record);
            }
            if d >= 1 {
                let record = &records[&uid];
                for referenced in record.same_source_refs() {
                    next.push((referenced.to_string(), d - 1));
                }
            }
        }
        frontier = next;
    }

    // Phase B: create any missing entities (terms + upstream id only),
    // in sorted upstream-id order.
    for (uid, record) in &records {
        ensure_local_entity(store, connector, &source, record, &mut report)
            .map_err(|e| annotate(e, uid))?;
    }

    // Phase C: fill statements for every node imported at depth ≥ 1.
    for (uid, record) in &records {
        if depth_of[uid] == 0 {
            continue;
        }
        let (local, completeness) = store
            .get_mapping(&source, uid)
            .expect("phase B recorded a mapping");
        if completeness == Completeness::Full {
            continue;
        }
        for st in &record.statements {
            upload_statement(store, propmap, &source, local, st, &mut report)
                .map_err(|e| annotate(e, uid))?;
        }
        store
            .record_mapping(local, &source, uid, Completeness::Full)
            .map_err(ImportError::from)?;
        report.updated += 1;
    }

    let root = store
        .get_mapping(&source, upstream_id)
        .expect("root was imported")
        .0;
    Ok((root, report))
}

/// Creates the local entity for `record` if it is not mapped yet:
/// terms, the upstream-id statement, and a stub mapping row.
fn ensure_local_entity(
    store: &mut KgStore,
    connector: &dyn SourceConnector,
    source: &str,
    record: &UpstreamRecord,
    report: &mut ImportReport,
) -> Result<EntityId, ImportError> {
    if let Some((local, _)) = store.get_mapping(source, &record.upstream_id) {
        return Ok(local);
    }
    let datatype = match record.kind {
        EntityKind::Property => Some(record.datatype.ok_or_else(|| ImportError::RecordParse {
            source_name: source.to_string(),
            detail: format!("property record {} lacks a datatype", record.upstream_id),
        })?),
        EntityKind::Item => None,
    };
    let local = store
        .create_entity(
            record.kind,
            record.labels.clone(),
            record.descriptions.clone(),
            record.aliases.clone(),
            datatype,
        )
        .map_err(ImportError::from)?;
    report.created += 1;
    let id_spec = connector.id_spec(record.kind);
    let id_property = store
        .ensure_property(&id_spec.property_label, Datatype::ExternalId)
        .map_err(ImportError::from)?;
    store
        .add_statement(
            local,
            Statement::new(
                id_property,
                StatementValue::external(&id_spec.type_name, &record.upstream_id),
            ),
        )
        .map_err(ImportError::from)?;
    store
        .record_mapping(local, source, &record.upstream_id, Completeness::Stub)
        .map_err(ImportError::from)?;
    Ok(local)
}

fn upload_statement(
    store: &mut KgStore,
    propmap: &PropertyMap,
    source: &str,
    subject: EntityId,
    st: &UpstreamStatement,
    report: &mut ImportReport,
) -> Result<(), ImportError> {
    let Some(property) = resolve_property(store, propmap, source, &st.property, report)? else {
        return Ok(());
    };
    let value = resolve_value(store, source, &st.value, report)?;
    let mut qualifiers = Vec::new();
    for (qprop, qvalue) in &st.qualifiers {
        let Some(qp) = resolve_property(store, propmap, source, qprop, report)? else {
            continue;
        };
        qualifiers.push(Qualifier {
            property: qp,
            value: resolve_value(store, source, qvalue, report)?,
        });
    }
    store
        .add_statement(subject, Statement { property, value, qualifiers })
        .map_err(ImportError::from)?;
    Ok(())
}

/// Maps an upstream property reference to a local property id, creating
/// the local property when first needed. Unmapped same-source
/// properties are skipped with a warning.
fn resolve_property(
    store: &mut KgStore,
    propmap: &PropertyMap,
    source: &str,
    prop: &PropRef,
    report: &mut ImportReport,
) -> Result<Option<EntityId>, ImportError> {
    match prop {
        PropRef::SameSource(pid) => match propmap.get(source, pid) {
            Some((label, datatype)) => {
                let label = label.to_string();
                Ok(Some(
                    store
                        .ensure_property(&label, datatype)
                        .map_err(ImportError::from)?,
                ))
            }
            None => {
                report
                    .warnings
                    .push(format!("{source}: property {pid} is unmapped; statement skipped"));
                Ok(None)
            }
        },
        PropRef::ByLabel { label, datatype } => Ok(Some(
            store
                .ensure_property(label, *datatype)
                .map_err(ImportError::from)?,
        )),
    }
}

fn resolve_value(
    store: &mut KgStore,
    source: &str,
    value: &UpstreamValue,
    report: &mut ImportReport,
) -> Result<StatementValue, ImportError> {
    Ok(match value {
        UpstreamValue::ItemRef(key) => StatementValue::item(resolve_ref(store, source, key, report)?),
        UpstreamValue::Str(s) => StatementValue::string(s.clone()),
        UpstreamValue::External { id_type, value } => {
            StatementValue::external(id_type.clone(), value.clone())
        }
        UpstreamValue::Math(m) => StatementValue::math(m.clone()),
        UpstreamValue::Url(u) => StatementValue::Url { value: u.clone() },
        UpstreamValue::Time(t) => StatementValue::Time { value: t.clone() },
    })
}

fn resolve_ref(
    store: &mut KgStore,
    source: &str,
    key: &RefKey,
    report: &mut ImportReport,
) -> Result<EntityId, ImportError> {
    match key {
        RefKey::SameSource(uid) => store
            .get_mapping(source, uid)
            .map(|(id, _)| id)
            .ok_or_else(|| ImportError::UnresolvedReference {
                source_name: source.to_string(),
                upstream_id: uid.clone(),
            }),
        RefKey::ByLabel(label) => {
            if let Some(id) = store.item_by_label("en", label) {
                return Ok(id);
            }
            let id = store.create_item(label, "").map_err(ImportError::from)?;
            report.stubs_created += 1;
            Ok(id)
        }
        RefKey::ByExternalId { id_type, value, label } => {
            if let Some(id) = store
                .resolve_external(id_type, value)
                .map_err(ImportError::from)?
            {
                return Ok(id);
            }
            // A labeled entity may already exist (e.g. created earlier
            // by label); attach the identifier to it rather than create
            // a colliding twin.
            let id = match store.item_by_label("en", label) {
                Some(id) => id,
                None => {
                    let id = store.create_item(label, "").map_err(ImportError::from)?;
                    report.stubs_created += 1;
                    id
                }
            };
            let property = store
                .ensure_property(id_type, Datatype::ExternalId)
                .map_err(ImportError::from)?;
            store
                .add_statement(id, Statement::new(property, StatementValue::external(id_type, value)))
                .map_err(ImportError::from)?;
            store
                .record_mapping(id, source, value, Completeness::Stub)
                .map_err(ImportError::from)?;
            Ok(id)
        }
    }
}

/// Runs one datasource file through its parser and uploads the records.
///
/// Records are deduplicated against the store via their external ids
/// before creation. Failures are collected per record, never fatal.
pub fn run_datasource(
    store: &mut KgStore,
    parser: &dyn RecordParser,
    input_path: &Path,
) -> Result<ImportReport, ImportError> {
    let raw = fs::read(input_path).map_err(|e| ImportError::Fixture {
        path: input_path.display().to_string(),
        detail: e.to_string(),
    })?;
    let parsed = parser.parse(&raw);
    let mut report = ImportReport::default();
    report.errors.extend(parsed.errors);

    // Pass 1: find or create every record's entity, so later references
    // resolve regardless of record order within the file.
    let mut targets: Vec<Option<(EntityId, bool)>> = Vec::with_capacity(parsed.records.len());
    for (category, record) in &parsed.records {
        match find_or_create(store, record) {
            Ok(target) => {
                if target.1 {
                    report.created += 1;
                    *report
                        .by_category
                        .entry(category.as_str().to_string())
                        .or_default() += 1;
                }
                targets.push(Some(target));
            }
            Err(e) => {
                report
                    .errors
                    .push(format!("{}: {e}", record.upstream_id));
                targets.push(None);
            }
        }
    }

    // Pass 2: statements and mapping rows.
    for ((_, record), target) in parsed.records.iter().zip(&targets) {
        let Some((local, is_new)) = target else { continue };
        let before = statement_count(store, *local);
        let mut failed = false;
        for st in &record.statements {
            if let Err(e) = upload_statement(store, PropertyMap::builtin(), &record.source, *local, st, &mut report) {
                report.errors.push(format!("{}: {e}", record.upstream_id));
                failed = true;
                break;
            }
        }
        if failed {
            continue;
        }
        if let Err(e) = store.record_mapping(*local, &record.source, &record.upstream_id, Completeness::Full)
        {
            report.errors.push(format!("{}: {e}", record.upstream_id));
            continue;
        }
        if !is_new {
            if statement_count(store, *local) > before {
                report.updated += 1;
            } else {
                report.deduplicated += 1;
            }
        }
    }
    Ok(report)
}

fn statement_count(store: &KgStore, id: EntityId) -> usize {
    store.entity(id).map_or(0, |e| e.statements.len())
}

/// Finds the record's entity via its external ids (then by label), or
/// creates it. Returns (id, created).
fn find_or_create(store: &mut KgStore, record: &UpstreamRecord) -> Result<(EntityId, bool), ImportError> {
    for st in &record.statements {
        if let UpstreamValue::External { id_type, value } = &st.value {
            if let Some(id) = store
                .resolve_external(id_type, value)
                .map_err(ImportError::from)?
            {
                return Ok((id, false));
            }
        }
    }
    if let Some(label) = record.labels.get("en") {
        if let Some(id) = store.item_by_label("en", label) {
            return Ok((id, false));
        }
    }
    let id = store
        .create_entity(
            record.kind,
            record.labels.clone(),
            record.descriptions.clone(),
            record.aliases.clone(),
            record.datatype,
        )
        .map_err(ImportError::from)?;
    Ok((id, true))
}

/// Seeds a store from a fixture directory. Files are recognized by
/// name: `dlmf*.tsv` / `*.dlmf.tsv`, `cran*` / `*.dcf` / `PACKAGES`,
/// and `bib*.json` / `*.bib.json`; anything else is skipped with a
/// warning. Files run in sorted name order.
pub fn seed_dir(store: &mut KgStore, dir: &Path) -> Result<ImportReport, ImportError> {
    let mut report = ImportReport::default();
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| ImportError::Fixture {
            path: dir.display().to_string(),
            detail: e.to_string(),
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    for path in paths {
        let name = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default()
            .to_ascii_lowercase();
        let parser: Option<Box<dyn RecordParser>> = if name.ends_with(".dlmf.tsv")
            || (name.starts_with("dlmf") && name.ends_with(".tsv"))
        {
            Some(Box::new(DlmfParser))
        } else if name == "packages" || name.ends_with(".dcf") || name.starts_with("cran") {
            Some(Box::new(CranParser))
        } else if name.ends_with(".bib.json") || (name.starts_with("bib") && name.ends_with(".json"))
        {
            Some(Box::new(BiblioParser))
        } else {
            None
        };
        match parser {
            Some(parser) => {
                let file_report = run_datasource(store, parser.as_ref(), &path)?;
                report.merge(file_report);
            }
            None => report
                .warnings
                .push(format!("{name}: unrecognized fixture file, skipped")),
        }
    }
    Ok(report)
}

fn annotate(e: ImportError, uid: &str) -> ImportError {
    match e {
        ImportError::Store(inner) => ImportError::StoreAt {
            upstream_id: uid.to_string(),
            inner,
        },
        other => other,
    }
}

impl From<StoreError> for ImportError {
    fn from(e: StoreError) -> ImportError {
        ImportError::Store(e)
    }
}
