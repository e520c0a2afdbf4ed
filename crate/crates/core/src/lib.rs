//! mathkg-core
//!
//! A self-contained mathematical knowledge-graph toolkit:
//!
//! - parse texvc-subset LaTeX math (and mhchem chemical notation) into a
//!   language-independent parse tree ([`texvc`], [`chem`]),
//! - emit presentation MathML with semantic concept links ([`mathml`]),
//! - keep a Wikibase-style entity store with external-identifier
//!   deduplication and local/upstream ID mappings ([`kg`]),
//! - import records from upstream sources with depth control
//!   ([`importer`]),
//! - answer triple-pattern and transitive-dependency queries and render
//!   formula homepages ([`query`]),
//! - search stored formulas by exact form or subexpression ([`index`]).

pub mod chem;
pub mod importer;
pub mod index;
pub mod kg;
pub mod mathml;
pub mod query;
pub mod texvc;

pub use texvc::{normalize, parse_texvc, validate, Diagnostic, MathNode};
