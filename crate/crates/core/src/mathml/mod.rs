//! Presentation-MathML emission with semantic concept links.

mod emit;
mod macros;
pub mod xml;

pub use emit::{emit_mathml, DisplayMode, EmitError, EmitOptions, ALLOWED_ELEMENTS};
pub use macros::{expand_semantics, extract_concepts, MacroEntry, MacroTable, MacroTableError};
