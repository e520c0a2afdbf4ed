//! Semantic-macro table: LaTeX commands that render like their plain
//! counterparts but carry a machine-readable concept link.

use std::collections::btree_map::{BTreeMap, Values};
use std::collections::BTreeSet;
use std::sync::LazyLock;

use thiserror::Error;

use crate::texvc::{
    parse_texvc, parse_with, CommandRegistry, Diagnostic, MacroExpansion, MathNode,
};

const BUILTIN_TSV: &str = include_str!("../../data/semantic_macros.tsv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacroEntry {
    pub name: String,
    pub rendered_texvc: String,
    /// Pre-parsed rendering; guaranteed free of nested semantic macros.
    pub rendered: MathNode,
    pub concept_key: String,
    pub fallback_url: Option<String>,
}

#[derive(Debug, Error)]
pub enum MacroTableError {
    #[error("line {line}: expected at least 3 tab-separated fields")]
    MissingFields { line: usize },
    #[error("line {line}: macro {name:?} collides with a base registry command")]
    RegistryCollision { line: usize, name: String },
    #[error("line {line}: duplicate macro {name:?}")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: empty concept key for macro {name:?}")]
    EmptyConcept { line: usize, name: String },
    #[error("line {line}: rendering of {name:?} does not parse: {diagnostic}")]
    BadRendering {
        line: usize,
        name: String,
        diagnostic: Diagnostic,
    },
}

/// Immutable macro-name → entry table, loaded from TSV.
#[derive(Debug, Clone, Default)]
pub struct MacroTable {
    entries: BTreeMap<String, MacroEntry>,
}

impl MacroTable {
    /// The compiled-in default table.
    pub fn builtin() -> &'static MacroTable {
        static BUILTIN: LazyLock<MacroTable> = LazyLock::new(|| {
            MacroTable::parse_tsv(BUILTIN_TSV).expect("built-in macro table is valid")
        });
        &BUILTIN
    }

    pub fn empty() -> MacroTable {
        MacroTable::default()
    }

    /// Parses `macro<TAB>rendered_texvc<TAB>concept_key<TAB>fallback_url`
    /// lines; `#` starts a comment. Each rendering must parse under the
    /// base registry and macro names must not shadow registry commands.
    pub fn parse_tsv(src: &str) -> Result<MacroTable, MacroTableError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if fields.len() < 3 {
                return Err(MacroTableError::MissingFields { line });
            }
            let name = fields[0].to_string();
            let rendered_texvc = fields[1].to_string();
            let concept_key = fields[2].to_string();
            let fallback_url = match fields.get(3).copied().unwrap_or("") {
                "" => None,
                url => Some(url.to_string()),
            };
            if CommandRegistry::builtin().contains(&name) {
                return Err(MacroTableError::RegistryCollision { line, name });
            }
            if concept_key.is_empty() {
                return Err(MacroTableError::EmptyConcept { line, name });
            }
            let rendered = parse_texvc(&rendered_texvc)
                .map_err(|diagnostic| MacroTableError::BadRendering {
                    line,
                    name: name.clone(),
                    diagnostic,
                })?;
            if entries.contains_key(&name) {
                return Err(MacroTableError::Duplicate { line, name });
            }
            entries.insert(
                name.clone(),
                MacroEntry {
                    name,
                    rendered_texvc,
                    rendered,
                    concept_key,
                    fallback_url,
                },
            );
        }
        Ok(MacroTable { entries })
    }

    pub fn get(&self, name: &str) -> Option<&MacroEntry> {
        self.entries.get(name)
    }

    pub fn entries(&self) -> Values<'_, String, MacroEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Fallback URL for a concept key, if any entry carries one.
    pub fn fallback_for_concept(&self, concept_key: &str) -> Option<&str> {
        self.entries
            .values()
            .find(|e| e.concept_key == concept_key)
            .and_then(|e| e.fallback_url.as_deref())
    }
}

/// Parses input that may contain semantic macros alongside plain texvc.
/// Macro-free input parses exactly like [`parse_texvc`].
pub fn expand_semantics(input: &str, table: &MacroTable) -> Result<MathNode, Diagnostic> {
    let resolver = |name: &str| {
        table.get(name).map(|e| MacroExpansion {
            rendered: e.rendered.clone(),
            concept_key: e.concept_key.clone(),
        })
    };
    parse_with(input, CommandRegistry::builtin(), Some(&resolver)).result
}

/// The set of concept keys of all semantic macros in the tree.
pub fn extract_concepts(ast: &MathNode) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    ast.for_each(&mut |n| {
        if let MathNode::SemanticMacro { concept_key, .. } = n {
            out.insert(concept_key.clone());
        }
    });
    out
}
