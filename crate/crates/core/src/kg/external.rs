//! Extrinsic-identifier type registry.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use regex::Regex;
use thiserror::Error;

const BUILTIN_TSV: &str = include_str!("../../data/external_id_types.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdKind {
    /// Linked to the resource through an external register (DOI, ORCID).
    Extrinsic,
    /// The resource's own name serves as the identifier (CRAN package).
    IntrinsicName,
}

#[derive(Debug, Clone)]
pub struct ExternalIdType {
    pub name: String,
    pub kind: IdKind,
    pub value_pattern: String,
    pub url_template: String,
    regex: Regex,
}

impl PartialEq for ExternalIdType {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.kind == other.kind
            && self.value_pattern == other.value_pattern
            && self.url_template == other.url_template
    }
}

impl ExternalIdType {
    pub fn new(
        name: impl Into<String>,
        kind: IdKind,
        value_pattern: impl Into<String>,
        url_template: impl Into<String>,
    ) -> Result<ExternalIdType, ExternalIdError> {
        let name = name.into();
        let value_pattern = value_pattern.into();
        let regex = Regex::new(&format!("^(?:{value_pattern})$")).map_err(|e| {
            ExternalIdError::BadPattern { name: name.clone(), detail: e.to_string() }
        })?;
        Ok(ExternalIdType {
            name,
            kind,
            value_pattern,
            url_template: url_template.into(),
            regex,
        })
    }

    pub fn matches(&self, value: &str) -> bool {
        self.regex.is_match(value)
    }

    /// Substitutes the value into the `$1` placeholder.
    pub fn url_for(&self, value: &str) -> String {
        self.url_template.replace("$1", value)
    }
}

#[derive(Debug, Error)]
pub enum ExternalIdError {
    #[error("external id type {name:?}: invalid pattern: {detail}")]
    BadPattern { name: String, detail: String },
    #[error("line {line}: expected 4 tab-separated fields")]
    MissingFields { line: usize },
    #[error("line {line}: unknown id kind {value:?}")]
    BadKind { line: usize, value: String },
    #[error("line {line}: duplicate type name {name:?}")]
    Duplicate { line: usize, name: String },
}

/// Parses `name<TAB>kind<TAB>pattern<TAB>url_template` lines.
pub fn parse_registry_tsv(src: &str) -> Result<BTreeMap<String, ExternalIdType>, ExternalIdError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() < 4 {
            return Err(ExternalIdError::MissingFields { line });
        }
        let kind = match fields[1] {
            "extrinsic" => IdKind::Extrinsic,
            "intrinsic-name" => IdKind::IntrinsicName,
            other => return Err(ExternalIdError::BadKind { line, value: other.into() }),
        };
        let ty = ExternalIdType::new(fields[0], kind, fields[2], fields[3])?;
        if out.contains_key(&ty.name) {
            return Err(ExternalIdError::Duplicate { line, name: ty.name });
        }
        out.insert(ty.name.clone(), ty);
    }
    Ok(out)
}

/// The twelve built-in identifier types.
pub fn builtin_types() -> &'static BTreeMap<String, ExternalIdType> {
    static BUILTIN: LazyLock<BTreeMap<String, ExternalIdType>> = LazyLock::new(|| {
        parse_registry_tsv(BUILTIN_TSV).expect("built-in external id registry is valid")
    });
    &BUILTIN
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_registry_has_exactly_the_specified_types() {
        let names: Vec<&str> = builtin_types().keys().map(String::as_str).collect();
        assert_eq!(
            names,
            vec![
                "CRAN Project",
                "DLMF ID",
                "DOI",
                "MSC ID",
                "ORCID iD",
                "PolyDB ID",
                "Zenodo ID",
                "arXiv ID",
                "arXiv author ID",
                "swMATH work ID",
                "zbMATH author ID",
                "zbMATH document ID",
            ]
        );
        let intrinsic: Vec<&str> = builtin_types()
            .values()
            .filter(|t| t.kind == IdKind::IntrinsicName)
            .map(|t| t.name.as_str())
            .collect();
        assert_eq!(intrinsic, vec!["CRAN Project", "PolyDB ID"]);
    }

    #[test]
    fn patterns_are_anchored() {
        let doi = &builtin_types()["DOI"];
        assert!(doi.matches("10.1000/182"));
        assert!(!doi.matches("not a doi"));
        assert!(!doi.matches("see 10.1000/182"));
        let orcid = &builtin_types()["ORCID iD"];
        assert!(orcid.matches("0000-0001-2345-678X"));
        assert!(!orcid.matches("0000-0001"));
    }

    #[test]
    fn url_templates_substitute() {
        let cran = &builtin_types()["CRAN Project"];
        assert!(cran.matches("ggplot2"));
        assert_eq!(
            cran.url_for("ggplot2"),
            "https://cran.r-project.org/package=ggplot2"
        );
        let dlmf = &builtin_types()["DLMF ID"];
        assert!(dlmf.matches("7.2.E1"));
        assert_eq!(dlmf.url_for("7.2.E1"), "https://dlmf.nist.gov/7.2.E1");
    }
}
