//! texvc parsing: AST, supported-command registry, parser, canonical
//! printer and normal form.
//!
//! Everything here is a pure function over immutable data; values are
//! safe to share and send between threads.

mod ast;
mod diagnostic;
pub mod parser;
mod printer;
pub mod registry;

pub use ast::{normalize, MathNode};
pub use diagnostic::{Diagnostic, Severity};
pub use parser::{
    parse_full, parse_texvc, parse_with, validate, MacroExpansion, ParseOutcome, MAX_INPUT_LEN,
};
pub use printer::to_texvc;
pub use registry::{supported_commands, CommandClass, CommandInfo, CommandRegistry};

/// Characters the lexer accepts as bare operators.
pub(crate) fn parser_operator_char(c: char) -> bool {
    "+-*/=<>()[]|,;:!?.".contains(c)
}
