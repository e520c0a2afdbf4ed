//! The supported-command registry.
//!
//! The registry is data-driven: the built-in table is compiled in from
//! `data/texvc_commands.tsv`, and alternative tables can be loaded from a
//! file of the same format, so coverage can grow without grammar changes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::LazyLock;

use thiserror::Error;

const BUILTIN_TSV: &str = include_str!("../../data/texvc_commands.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CommandClass {
    Identifier,
    Operator,
    Layout,
    Accent,
    Text,
    Space,
}

impl CommandClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandClass::Identifier => "identifier",
            CommandClass::Operator => "operator",
            CommandClass::Layout => "layout",
            CommandClass::Accent => "accent",
            CommandClass::Text => "text",
            CommandClass::Space => "space",
        }
    }
}

impl fmt::Display for CommandClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CommandClass {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "identifier" => CommandClass::Identifier,
            "operator" => CommandClass::Operator,
            "layout" => CommandClass::Layout,
            "accent" => CommandClass::Accent,
            "text" => CommandClass::Text,
            "space" => CommandClass::Space,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandInfo {
    pub name: String,
    pub arity: u8,
    pub class: CommandClass,
    pub unicode: Option<char>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("line {line}: expected at least 3 tab-separated fields")]
    MissingFields { line: usize },
    #[error("line {line}: invalid arity {value:?}")]
    BadArity { line: usize, value: String },
    #[error("line {line}: unknown class {value:?}")]
    BadClass { line: usize, value: String },
    #[error("line {line}: invalid unicode hex {value:?}")]
    BadUnicode { line: usize, value: String },
    #[error("line {line}: duplicate command name {name:?}")]
    DuplicateName { line: usize, name: String },
}

/// Maps command names to arity, output class and optional Unicode form.
#[derive(Debug, Clone)]
pub struct CommandRegistry {
    entries: BTreeMap<String, CommandInfo>,
    // Reverse lookup for the pretty-printer: rendered symbol -> command
    // name. First registry-file occurrence wins.
    by_symbol: BTreeMap<String, String>,
}

impl CommandRegistry {
    /// The compiled-in registry.
    pub fn builtin() -> &'static CommandRegistry {
        static BUILTIN: LazyLock<CommandRegistry> = LazyLock::new(|| {
            CommandRegistry::parse_tsv(BUILTIN_TSV).expect("built-in command registry is valid")
        });
        &BUILTIN
    }

    /// Parses a registry from TSV: `name<TAB>arity<TAB>class<TAB>unicode_hex?`,
    /// `#` starts a comment line.
    pub fn parse_tsv(src: &str) -> Result<CommandRegistry, RegistryError> {
        let mut entries = BTreeMap::new();
        let mut by_symbol = BTreeMap::new();
        for (idx, raw) in src.lines().enumerate() {
            let line = idx + 1;
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if fields.len() < 3 {
                return Err(RegistryError::MissingFields { line });
            }
            let name = fields[0].to_string();
            let arity: u8 = fields[1]
                .parse()
                .map_err(|_| RegistryError::BadArity { line, value: fields[1].into() })?;
            let class: CommandClass = fields[2]
                .parse()
                .map_err(|_| RegistryError::BadClass { line, value: fields[2].into() })?;
            let unicode = match fields.get(3).copied().unwrap_or("") {
                "" => None,
                hex => {
                    let cp = u32::from_str_radix(hex, 16)
                        .ok()
                        .and_then(char::from_u32)
                        .ok_or_else(|| RegistryError::BadUnicode { line, value: hex.into() })?;
                    Some(cp)
                }
            };
            if entries.contains_key(&name) {
                return Err(RegistryError::DuplicateName { line, name });
            }
            if class == CommandClass::Operator {
                if let Some(u) = unicode {
                    by_symbol.entry(u.to_string()).or_insert_with(|| name.clone());
                }
            }
            entries.insert(
                name.clone(),
                CommandInfo { name, arity, class, unicode },
            );
        }
        Ok(CommandRegistry { entries, by_symbol })
    }

    pub fn get(&self, name: &str) -> Option<&CommandInfo> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// Printer support: the command name that renders as `symbol`, if any.
    pub fn command_for_symbol(&self, symbol: &str) -> Option<&str> {
        self.by_symbol.get(symbol).map(String::as_str)
    }

    /// All commands in sorted name order.
    pub fn commands(&self) -> impl Iterator<Item = &CommandInfo> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Stable, sorted listing of the built-in registry.
pub fn supported_commands() -> Vec<(String, u8, CommandClass)> {
    CommandRegistry::builtin()
        .commands()
        .map(|c| (c.name.clone(), c.arity, c.class))
        .collect()
}
