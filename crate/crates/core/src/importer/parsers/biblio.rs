//! Parser for generic bibliographic JSON records, standing in for the
//! zbMATH/arXiv/crossref/Zenodo shapes: a JSON array of publications
//! with DOI/zbMATH/arXiv identifiers and author/journal references.
//! Authors carrying an ORCID are emitted as records of their own.

use std::collections::BTreeSet;

use serde::Deserialize;

use crate::kg::Datatype;

use super::super::record::{
    Category, PropRef, RefKey, UpstreamRecord, UpstreamStatement, UpstreamValue,
};
use super::{ParseOutput, RecordParser};

pub const AUTHOR_PROPERTY: &str = "author";
pub const JOURNAL_PROPERTY: &str = "published in";
pub const DATE_PROPERTY: &str = "publication date";

#[derive(Debug, Deserialize)]
struct BibEntry {
    #[serde(default)]
    doi: Option<String>,
    #[serde(default)]
    zbmath: Option<String>,
    #[serde(default)]
    arxiv: Option<String>,
    title: String,
    #[serde(default)]
    authors: Vec<BibAuthor>,
    #[serde(default)]
    journal: Option<String>,
    #[serde(default)]
    published: Option<String>,
}

#[derive(Debug, Deserialize)]
struct BibAuthor {
    name: String,
    #[serde(default)]
    orcid: Option<String>,
}

#[derive(Debug, Default)]
pub struct BiblioParser;

impl RecordParser for BiblioParser {
    fn source(&self) -> &str {
        "biblio"
    }

    fn parse(&self, raw: &[u8]) -> ParseOutput {
        let mut out = ParseOutput::default();
        let entries: Vec<serde_json::Value> = match serde_json::from_slice(raw) {
            Ok(v) => v,
            Err(e) => {
                out.errors.push(format!("biblio: invalid JSON: {e}"));
                return out;
            }
        };
        let mut seen_authors: BTreeSet<String> = BTreeSet::new();
        let mut author_records: Vec<UpstreamRecord> = Vec::new();
        for (idx, value) in entries.into_iter().enumerate() {
            let entry: BibEntry = match serde_json::from_value(value) {
                Ok(e) => e,
                Err(e) => {
                    out.errors.push(format!("biblio record {}: {e}", idx + 1));
                    continue;
                }
            };
            let externals: Vec<(&str, &String)> = [
                ("DOI", entry.doi.as_ref()),
                ("zbMATH document ID", entry.zbmath.as_ref()),
                ("arXiv ID", entry.arxiv.as_ref()),
            ]
            .into_iter()
            .filter_map(|(t, v)| v.map(|v| (t, v)))
            .collect();
            if externals.is_empty() {
                out.errors.push(format!(
                    "biblio record {}: no identifier (doi, zbmath or arxiv)",
                    idx + 1
                ));
                continue;
            }
            let upstream_id = externals[0].1.clone();
            let mut record = UpstreamRecord::new_item("biblio", &upstream_id)
                .with_label("en", &entry.title)
                .with_description("en", "scholarly publication");
            for (id_type, value) in &externals {
                record = record.with_statement(UpstreamStatement::new(
                    PropRef::ByLabel {
                        label: id_type.to_string(),
                        datatype: Datatype::ExternalId,
                    },
                    UpstreamValue::External {
                        id_type: id_type.to_string(),
                        value: (*value).clone(),
                    },
                ));
            }
            for author in &entry.authors {
                let target = match &author.orcid {
                    Some(orcid) => {
                        if seen_authors.insert(orcid.clone()) {
                            author_records.push(
                                UpstreamRecord::new_item("biblio", orcid)
                                    .with_label("en", &author.name)
                                    .with_statement(UpstreamStatement::new(
                                        PropRef::ByLabel {
                                            label: "ORCID iD".to_string(),
                                            datatype: Datatype::ExternalId,
                                        },
                                        UpstreamValue::External {
                                            id_type: "ORCID iD".to_string(),
                                            value: orcid.clone(),
                                        },
                                    )),
                            );
                        }
                        RefKey::ByExternalId {
                            id_type: "ORCID iD".to_string(),
                            value: orcid.clone(),
                            label: author.name.clone(),
                        }
                    }
                    None => RefKey::ByLabel(author.name.clone()),
                };
                record = record.with_statement(UpstreamStatement::new(
                    PropRef::ByLabel {
                        label: AUTHOR_PROPERTY.to_string(),
                        datatype: Datatype::Item,
                    },
                    UpstreamValue::ItemRef(target),
                ));
            }
            if let Some(journal) = &entry.journal {
                record = record.with_statement(UpstreamStatement::new(
                    PropRef::ByLabel {
                        label: JOURNAL_PROPERTY.to_string(),
                        datatype: Datatype::Item,
                    },
                    UpstreamValue::ItemRef(RefKey::ByLabel(journal.clone())),
                ));
            }
            if let Some(published) = &entry.published {
                record = record.with_statement(UpstreamStatement::new(
                    PropRef::ByLabel {
                        label: DATE_PROPERTY.to_string(),
                        datatype: Datatype::Time,
                    },
                    UpstreamValue::Time(published.clone()),
                ));
            }
            out.records.push((Category::Publication, record));
        }
        out.records
            .extend(author_records.into_iter().map(|r| (Category::Author, r)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &[u8] = br#"[
        {"doi":"10.1000/182","title":"On Things","authors":[{"name":"A. One","orcid":"0000-0002-1825-0097"},{"name":"B. Two"}],"journal":"J. Thing","published":"1999-01-01"},
        {"zbmath":"0277.65002","title":"More Things","authors":[{"name":"A. One","orcid":"0000-0002-1825-0097"}]}
    ]"#;

    #[test]
    fn publications_and_orcid_authors_become_records() {
        let out = BiblioParser.parse(SAMPLE);
        assert!(out.errors.is_empty(), "{:?}", out.errors);
        let cats: Vec<Category> = out.records.iter().map(|(c, _)| *c).collect();
        // Two publications, one deduplicated ORCID author.
        assert_eq!(
            cats,
            vec![Category::Publication, Category::Publication, Category::Author]
        );
        let (_, pub1) = &out.records[0];
        assert_eq!(pub1.upstream_id, "10.1000/182");
        assert!(pub1.statements.iter().any(|s| matches!(
            &s.value,
            UpstreamValue::ItemRef(RefKey::ByLabel(l)) if l == "J. Thing"
        )));
    }

    #[test]
    fn identifierless_records_are_errors() {
        let out = BiblioParser.parse(br#"[{"title":"No Ids"}]"#);
        assert!(out.records.is_empty());
        assert_eq!(out.errors.len(), 1);
    }

    #[test]
    fn invalid_json_is_a_file_level_error() {
        let out = BiblioParser.parse(b"not json");
        assert!(out.records.is_empty());
        assert_eq!(out.errors.len(), 1);
    }
}
