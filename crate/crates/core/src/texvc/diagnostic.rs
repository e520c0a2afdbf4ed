//! Author-facing syntax diagnostics.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A parse error or warning, positioned by byte offset into the UTF-8
/// input. `byte_offset + length` never exceeds the input length.
///
/// Serializes as `{"severity":…,"offset":…,"length":…,"expected":[…],"message":…}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    #[serde(rename = "offset")]
    pub byte_offset: usize,
    pub length: usize,
    /// Descriptions of the tokens that would have been accepted here.
    pub expected: Vec<String>,
    pub message: String,
}

impl Diagnostic {
    pub fn error(byte_offset: usize, length: usize, expected: Vec<String>, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            byte_offset,
            length,
            expected,
            message,
        }
    }

    pub fn warning(byte_offset: usize, length: usize, message: String) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            byte_offset,
            length,
            expected: Vec::new(),
            message,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostic serialization cannot fail")
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{kind} at {}..{}: {}", self.byte_offset, self.byte_offset + self.length, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}
