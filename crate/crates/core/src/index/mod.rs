//! Formula search index: exact and subexpression match over all stored
//! formulas, via subtree hashing of normalized trees with structural
//! verification of candidates (so hash collisions can never surface).

mod hash;

pub use hash::{canonical_bytes, contains_subtree, fnv1a64, subtree_hashes, tree_hash};

use std::collections::btree_map::Values;
use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kg::{EntityId, KgStore};
use crate::mathml::{expand_semantics, MacroTable};
use crate::texvc::{normalize, Diagnostic, MathNode};

pub const INDEX_FILE: &str = "index.jsonl";

/// Index postings for one stored formula. The original texvc source is
/// retained so candidate matches can be re-verified structurally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaIndexEntry {
    pub item: EntityId,
    pub texvc: String,
    pub tree_size: u32,
    pub normalized_hash: u64,
    pub subtree_hashes: BTreeSet<u64>,
    /// Multiset of leaf tokens of the normalized tree.
    pub token_bag: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Subexpression,
}

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("formula does not parse: {0}")]
    Parse(Diagnostic),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
    #[error("{file} line {line}: {detail}")]
    Corrupt {
        file: String,
        line: usize,
        detail: String,
    },
}

/// The search index. Mutations go through the single writer; searches
/// take `&self` and may run concurrently on a snapshot.
#[derive(Debug, Clone)]
pub struct FormulaIndex {
    entries: BTreeMap<EntityId, FormulaIndexEntry>,
    macros: MacroTable,
}

impl Default for FormulaIndex {
    fn default() -> Self {
        Self::new()
    }
}

impl FormulaIndex {
    pub fn new() -> FormulaIndex {
        FormulaIndex::with_macros(MacroTable::builtin().clone())
    }

    pub fn with_macros(macros: MacroTable) -> FormulaIndex {
        FormulaIndex { entries: BTreeMap::new(), macros }
    }

    fn parse(&self, texvc: &str) -> Result<MathNode, IndexError> {
        expand_semantics(texvc, &self.macros).map_err(IndexError::Parse)
    }

    /// Inserts or replaces the postings for `item`. Rebuilding from the
    /// same formulas yields an identical index; indexing an invalid
    /// formula fails without touching existing postings.
    pub fn index_formula(&mut self, item: EntityId, texvc: &str) -> Result<(), IndexError> {
        let tree = normalize(&self.parse(texvc)?);
        let entry = FormulaIndexEntry {
            item,
            texvc: texvc.to_string(),
            tree_size: tree.node_count() as u32,
            normalized_hash: tree_hash(&tree),
            subtree_hashes: subtree_hashes(&tree),
            token_bag: token_bag(&tree),
        };
        self.entries.insert(item, entry);
        Ok(())
    }

    pub fn remove(&mut self, item: EntityId) -> bool {
        self.entries.remove(&item).is_some()
    }

    pub fn entry(&self, item: EntityId) -> Option<&FormulaIndexEntry> {
        self.entries.get(&item)
    }

    pub fn entries(&self) -> Values<'_, EntityId, FormulaIndexEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Searches the index.
    ///
    /// Exact mode returns items whose normalized tree equals the
    /// query's, scored 1.0. Subexpression mode returns items whose tree
    /// contains the query's tree, scored by query size over document
    /// size, descending; ties break by ascending item number. Hash
    /// candidates are verified structurally before being returned.
    pub fn search(
        &self,
        query_texvc: &str,
        mode: SearchMode,
        limit: usize,
    ) -> Result<Vec<(EntityId, f64)>, IndexError> {
        let query = normalize(&self.parse(query_texvc)?);
        let query_hash = tree_hash(&query);
        let query_size = query.node_count() as f64;
        let mut hits: Vec<(EntityId, f64)> = Vec::new();
        for entry in self.entries.values() {
            match mode {
                SearchMode::Exact => {
                    if entry.normalized_hash != query_hash {
                        continue;
                    }
                }
                SearchMode::Subexpression => {
                    if !entry.subtree_hashes.contains(&query_hash) {
                        continue;
                    }
                }
            }
            // Structural verification of the hash candidate.
            let doc = normalize(&self.parse(&entry.texvc)?);
            let verified = match mode {
                SearchMode::Exact => doc == query,
                SearchMode::Subexpression => contains_subtree(&doc, &query),
            };
            if !verified {
                continue;
            }
            let score = match mode {
                SearchMode::Exact => 1.0,
                SearchMode::Subexpression => query_size / entry.tree_size as f64,
            };
            hits.push((entry.item, score));
        }
        hits.sort_by(|(a_id, a_score), (b_id, b_score)| {
            b_score
                .total_cmp(a_score)
                .then_with(|| a_id.number.cmp(&b_id.number))
        });
        hits.truncate(limit);
        Ok(hits)
    }

    /// Builds a fresh index over every item in the store carrying a
    /// math statement (the first math statement of each item).
    pub fn rebuild_from_store(store: &KgStore) -> Result<FormulaIndex, IndexError> {
        let mut index = FormulaIndex::with_macros(store.macros().clone());
        for entity in store.entities() {
            if let Some(texvc) = entity.first_math() {
                index.index_formula(entity.id, texvc)?;
            }
        }
        Ok(index)
    }

    /// Search results as TSV: `item<TAB>score`, four decimal places.
    pub fn render_tsv(results: &[(EntityId, f64)]) -> String {
        let mut out = String::new();
        for (id, score) in results {
            out.push_str(&format!("{id}\t{score:.4}\n"));
        }
        out
    }

    // ----- persistence -----------------------------------------------------

    pub fn save(&self, path: &Path) -> Result<(), IndexError> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut file = fs::File::create(path)?;
        for entry in self.entries.values() {
            let line = serde_json::to_string(entry).expect("entry serialization cannot fail");
            writeln!(file, "{line}")?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<FormulaIndex, IndexError> {
        let mut index = FormulaIndex::new();
        let file = fs::File::open(path)?;
        for (idx, line) in io::BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let entry: FormulaIndexEntry =
                serde_json::from_str(&line).map_err(|e| IndexError::Corrupt {
                    file: INDEX_FILE.to_string(),
                    line: idx + 1,
                    detail: e.to_string(),
                })?;
            index.entries.insert(entry.item, entry);
        }
        Ok(index)
    }
}

/// Leaf-token multiset of a tree.
pub fn token_bag(tree: &MathNode) -> BTreeMap<String, u32> {
    let mut bag = BTreeMap::new();
    tree.for_each(&mut |n| {
        let token = match n {
            MathNode::Identifier { name, .. } => Some(name.clone()),
            MathNode::Number { literal } => Some(literal.clone()),
            MathNode::Operator { symbol } => Some(symbol.clone()),
            _ => None,
        };
        if let Some(t) = token {
            *bag.entry(t).or_default() += 1;
        }
    });
    bag
}
