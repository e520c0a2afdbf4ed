//! Recursive-descent parser for the supported texvc subset.
//!
//! The grammar is a parsing expression grammar: choices are ordered and
//! dispatch on the next character, so every input has at most one parse.
//! On failure the parser reports the failure whose span reaches furthest
//! into the input, together with the token descriptions expected there.

use std::collections::BTreeSet;

use super::ast::MathNode;
use super::diagnostic::Diagnostic;
use super::registry::{CommandClass, CommandRegistry};

/// Maximum accepted input size in bytes (64 KiB).
pub const MAX_INPUT_LEN: usize = 64 * 1024;

// Nesting bound so that deep `{{{…}}}` inputs produce a diagnostic
// instead of exhausting the stack.
const MAX_DEPTH: u32 = 200;

const OPERATOR_CHARS: &str = "+-*/=<>()[]|,;:!?.";

/// Expansion returned by a macro resolver for names outside the base
/// registry; produces a `SemanticMacro` node.
#[derive(Debug, Clone)]
pub struct MacroExpansion {
    pub rendered: MathNode,
    pub concept_key: String,
}

pub type MacroResolver<'a> = dyn Fn(&str) -> Option<MacroExpansion> + 'a;

/// Result of a parse together with any warnings produced on the way.
/// Parse success implies zero error diagnostics; warnings may accompany
/// either outcome.
#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub result: Result<MathNode, Diagnostic>,
    pub warnings: Vec<Diagnostic>,
}

/// Parses a texvc expression with the built-in registry.
pub fn parse_texvc(input: &str) -> Result<MathNode, Diagnostic> {
    parse_full(input).result
}

/// Parses with the built-in registry, returning warnings as well.
pub fn parse_full(input: &str) -> ParseOutcome {
    parse_with(input, CommandRegistry::builtin(), None)
}

/// Parses with an explicit registry and an optional semantic-macro
/// resolver consulted for command names missing from the registry.
pub fn parse_with(
    input: &str,
    registry: &CommandRegistry,
    macros: Option<&MacroResolver<'_>>,
) -> ParseOutcome {
    if input.len() > MAX_INPUT_LEN {
        return ParseOutcome {
            result: Err(Diagnostic::error(
                MAX_INPUT_LEN,
                input.len() - MAX_INPUT_LEN,
                vec![],
                format!("input is {} bytes, limit is {} bytes", input.len(), MAX_INPUT_LEN),
            )),
            warnings: Vec::new(),
        };
    }
    let mut p = Parser {
        src: input,
        pos: 0,
        depth: 0,
        registry,
        macros,
        warnings: Vec::new(),
        fail: None,
    };
    let result = match p.document() {
        Ok(node) => Ok(node),
        Err(()) => Err(p.take_diagnostic()),
    };
    ParseOutcome { result, warnings: p.warnings }
}

/// Syntax check: empty iff the input parses; otherwise the parse error
/// followed by any warnings.
pub fn validate(input: &str) -> Vec<Diagnostic> {
    let outcome = parse_full(input);
    let mut out = Vec::new();
    if let Err(d) = outcome.result {
        out.push(d);
    }
    out.extend(outcome.warnings);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    /// Stop at end of input (and at a stray `}` for the caller to report).
    End,
    /// Inside `{…}`.
    Brace,
    /// Inside the `[…]` index of `\sqrt`.
    Bracket,
    /// Inside `\left…\right`.
    Right,
}

#[derive(Debug)]
struct Failure {
    start: usize,
    end: usize,
    expected: BTreeSet<String>,
    message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    depth: u32,
    registry: &'a CommandRegistry,
    macros: Option<&'a MacroResolver<'a>>,
    warnings: Vec<Diagnostic>,
    fail: Option<Failure>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\n' | '\r')) {
            self.bump();
        }
    }

    /// True when the input at the cursor is `\name` followed by a
    /// non-letter (so `\right` does not match inside `\rightarrow`).
    fn at_command(&self, name: &str) -> bool {
        let rest = &self.src[self.pos..];
        if let Some(tail) = rest.strip_prefix('\\').and_then(|r| r.strip_prefix(name)) {
            !tail.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        } else {
            false
        }
    }

    fn fail_span(&mut self, start: usize, len: usize, expected: &[&str], message: &str) -> Result<MathNode, ()> {
        let end = start + len;
        let replace = match &self.fail {
            None => true,
            Some(f) => end > f.end,
        };
        if replace {
            self.fail = Some(Failure {
                start,
                end,
                expected: expected.iter().map(|s| s.to_string()).collect(),
                message: message.to_string(),
            });
        } else if let Some(f) = &mut self.fail {
            if end == f.end {
                f.expected.extend(expected.iter().map(|s| s.to_string()));
                f.start = f.start.min(start);
            }
        }
        Err(())
    }

    fn fail_here(&mut self, expected: &[&str], message: &str) -> Result<MathNode, ()> {
        let len = self.peek().map_or(0, char::len_utf8);
        self.fail_span(self.pos, len, expected, message)
    }

    fn take_diagnostic(&mut self) -> Diagnostic {
        match self.fail.take() {
            Some(f) => Diagnostic::error(
                f.start,
                f.end - f.start,
                f.expected.into_iter().collect(),
                f.message,
            ),
            // Unreachable in practice: every Err(()) records a failure.
            None => Diagnostic::error(0, 0, vec![], "parse failed".into()),
        }
    }

    fn document(&mut self) -> Result<MathNode, ()> {
        let mut items = self.items(Stop::End)?;
        self.ws();
        if !self.at_end() {
            // items() only stops early at a stray closing brace.
            return self.fail_here(&["end of input"], "unbalanced closing brace");
        }
        Ok(match items.len() {
            1 => items.pop().expect("len checked"),
            _ => MathNode::Row { children: items },
        })
    }

    fn items(&mut self, stop: Stop) -> Result<Vec<MathNode>, ()> {
        let mut items = Vec::new();
        loop {
            self.ws();
            let Some(c) = self.peek() else { break };
            if c == '}' {
                break;
            }
            if stop == Stop::Bracket && c == ']' {
                break;
            }
            if stop == Stop::Right && self.at_command("right") {
                break;
            }
            items.push(self.item()?);
        }
        Ok(items)
    }

    /// One item: a base with optional `^`/`_` suffixes. A script with no
    /// base is tolerated with a warning, matching permissive LaTeX.
    fn item(&mut self) -> Result<MathNode, ()> {
        let mut node = if matches!(self.peek(), Some('^' | '_')) {
            self.warnings.push(Diagnostic::warning(
                self.pos,
                1,
                "script with no base".into(),
            ));
            MathNode::Row { children: Vec::new() }
        } else {
            self.base()?
        };
        let mut sub: Option<MathNode> = None;
        let mut sup: Option<MathNode> = None;
        loop {
            self.ws();
            match self.peek() {
                Some('^') => {
                    let caret = self.pos;
                    self.bump();
                    if sup.is_some() {
                        return self.fail_span(caret, 1, &[], "double superscript");
                    }
                    sup = Some(self.single_token("superscript argument")?);
                }
                Some('_') => {
                    let us = self.pos;
                    self.bump();
                    if sub.is_some() {
                        return self.fail_span(us, 1, &[], "double subscript");
                    }
                    sub = Some(self.single_token("subscript argument")?);
                }
                _ => break,
            }
        }
        if sub.is_some() || sup.is_some() {
            node = MathNode::script(node, sub, sup);
        }
        Ok(node)
    }

    fn base(&mut self) -> Result<MathNode, ()> {
        if self.depth >= MAX_DEPTH {
            return self.fail_here(&[], "nesting too deep");
        }
        self.depth += 1;
        let out = self.base_inner();
        self.depth -= 1;
        out
    }

    fn base_inner(&mut self) -> Result<MathNode, ()> {
        self.ws();
        let Some(c) = self.peek() else {
            return self.fail_here(&["a token"], "unexpected end of input");
        };
        match c {
            '\\' => self.command(),
            '{' => {
                let children = self.group()?;
                Ok(MathNode::Row { children })
            }
            'a'..='z' | 'A'..='Z' => {
                self.bump();
                Ok(MathNode::ident(c.to_string()))
            }
            '0'..='9' => Ok(self.number()),
            '\'' => {
                self.bump();
                Ok(MathNode::operator("\u{2032}"))
            }
            _ if OPERATOR_CHARS.contains(c) => {
                self.bump();
                Ok(MathNode::operator(c.to_string()))
            }
            _ => self.fail_here(&["a token"], &format!("unsupported character {c:?}")),
        }
    }

    fn number(&mut self) -> MathNode {
        let start = self.pos;
        while matches!(self.peek(), Some('0'..='9')) {
            self.bump();
        }
        // A decimal part only when a digit actually follows the dot;
        // otherwise the dot stays behind as an operator.
        if self.peek() == Some('.') {
            let dot = self.pos;
            self.bump();
            if matches!(self.peek(), Some('0'..='9')) {
                while matches!(self.peek(), Some('0'..='9')) {
                    self.bump();
                }
            } else {
                self.pos = dot;
            }
        }
        MathNode::number(self.src[start..self.pos].to_string())
    }

    /// `{…}` group body; the braces themselves are consumed here.
    fn group(&mut self) -> Result<Vec<MathNode>, ()> {
        let start = self.pos;
        self.bump(); // '{'
        let children = self.items(Stop::Brace)?;
        if self.peek() == Some('}') {
            self.bump();
            Ok(children)
        } else {
            self.fail_span(start, self.pos - start, &["}"], "unbalanced brace")
                .map(|_| Vec::new())
        }
    }

    /// A single argument token: a group (unwrapped when it holds exactly
    /// one item), a command, a letter, one digit, or an operator
    /// character — mirroring how TeX consumes undelimited arguments.
    fn single_token(&mut self, what: &str) -> Result<MathNode, ()> {
        if self.depth >= MAX_DEPTH {
            return self.fail_here(&[], "nesting too deep");
        }
        self.depth += 1;
        let out = self.single_token_inner(what);
        self.depth -= 1;
        out
    }

    fn single_token_inner(&mut self, what: &str) -> Result<MathNode, ()> {
        self.ws();
        let Some(c) = self.peek() else {
            return self.fail_here(&[what], "missing argument");
        };
        match c {
            '{' => {
                let mut children = self.group()?;
                Ok(match children.len() {
                    1 => children.pop().expect("len checked"),
                    _ => MathNode::Row { children },
                })
            }
            '\\' => self.command(),
            'a'..='z' | 'A'..='Z' => {
                self.bump();
                Ok(MathNode::ident(c.to_string()))
            }
            '0'..='9' => {
                self.bump();
                Ok(MathNode::number(c.to_string()))
            }
            '\'' => {
                self.bump();
                Ok(MathNode::operator("\u{2032}"))
            }
            _ if OPERATOR_CHARS.contains(c) => {
                self.bump();
                Ok(MathNode::operator(c.to_string()))
            }
            _ => self.fail_here(&[what], &format!("unsupported character {c:?}")),
        }
    }

    fn command(&mut self) -> Result<MathNode, ()> {
        let start = self.pos;
        self.bump(); // '\\'
        let name = match self.peek() {
            None => return self.fail_here(&["command name"], "lone backslash at end of input"),
            Some(c) if c.is_ascii_alphabetic() => {
                let ns = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.bump();
                }
                self.src[ns..self.pos].to_string()
            }
            Some(c) => {
                self.bump();
                c.to_string()
            }
        };
        let token_len = self.pos - start;

        if name == "left" {
            return self.left_right(start);
        }
        if name == "right" {
            return self.fail_span(start, token_len, &["\\left"], "\\right without matching \\left");
        }

        let Some(info) = self.registry.get(&name).cloned() else {
            if let Some(expansion) = self.macros.and_then(|m| m(&name)) {
                return Ok(MathNode::SemanticMacro {
                    macro_name: name,
                    rendered: Box::new(expansion.rendered),
                    concept_key: expansion.concept_key,
                });
            }
            return self.fail_span(
                start,
                token_len,
                &["supported command"],
                &format!("unknown command \\{name}"),
            );
        };

        match info.class {
            CommandClass::Identifier => Ok(MathNode::Identifier {
                name,
                unicode_hint: info.unicode,
            }),
            CommandClass::Operator => {
                let symbol = info
                    .unicode
                    .expect("operator entries always carry a symbol")
                    .to_string();
                Ok(MathNode::operator(symbol))
            }
            CommandClass::Space => Ok(MathNode::command(name, Vec::new())),
            CommandClass::Text => {
                let raw = self.text_group(start)?;
                Ok(MathNode::command(name, vec![MathNode::ident(raw)]))
            }
            CommandClass::Layout | CommandClass::Accent => {
                let mut args = Vec::new();
                if name == "sqrt" {
                    self.ws();
                    if self.peek() == Some('[') {
                        let bstart = self.pos;
                        self.bump();
                        let mut index = self.items(Stop::Bracket)?;
                        if self.peek() == Some(']') {
                            self.bump();
                        } else {
                            return self.fail_span(
                                bstart,
                                self.pos - bstart,
                                &["]"],
                                "unbalanced root index bracket",
                            );
                        }
                        args.push(match index.len() {
                            1 => index.pop().expect("len checked"),
                            _ => MathNode::Row { children: index },
                        });
                    }
                }
                for _ in 0..info.arity {
                    args.push(self.single_token("argument")?);
                }
                Ok(MathNode::command(name, args))
            }
        }
    }

    /// Verbatim `{…}` body for `\text`-class commands; whitespace is
    /// significant, inner braces must balance.
    fn text_group(&mut self, cmd_start: usize) -> Result<String, ()> {
        self.ws();
        if self.peek() != Some('{') {
            self.fail_here(&["{"], "missing text argument")?;
            unreachable!("fail_here always errors");
        }
        let open = self.pos;
        self.bump();
        let body_start = self.pos;
        let mut depth = 1u32;
        while let Some(c) = self.peek() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        let body = self.src[body_start..self.pos].to_string();
                        self.bump();
                        return Ok(body);
                    }
                }
                _ => {}
            }
            self.bump();
        }
        self.fail_span(cmd_start, self.pos - open, &["}"], "unterminated text argument")?;
        unreachable!("fail_span always errors");
    }

    fn left_right(&mut self, start: usize) -> Result<MathNode, ()> {
        let open = self.delimiter()?;
        let body = self.items(Stop::Right)?;
        self.ws();
        if !self.at_command("right") {
            return self.fail_span(start, self.pos - start, &["\\right"], "missing \\right");
        }
        self.bump(); // '\\'
        for _ in 0.."right".len() {
            self.bump();
        }
        let close = self.delimiter()?;
        let mut children = Vec::new();
        children.extend(open);
        children.extend(body);
        children.extend(close);
        Ok(MathNode::Row { children })
    }

    /// A `\left`/`\right` delimiter. `.` is the invisible delimiter and
    /// produces no node.
    fn delimiter(&mut self) -> Result<Option<MathNode>, ()> {
        self.ws();
        let Some(c) = self.peek() else {
            self.fail_here(&["delimiter"], "missing delimiter")?;
            unreachable!("fail_here always errors");
        };
        match c {
            '(' | ')' | '[' | ']' | '|' | '/' => {
                self.bump();
                Ok(Some(MathNode::operator(c.to_string())))
            }
            '.' => {
                self.bump();
                Ok(None)
            }
            '\\' => {
                let start = self.pos;
                self.bump();
                let name = match self.peek() {
                    Some(c) if c.is_ascii_alphabetic() => {
                        let ns = self.pos;
                        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                            self.bump();
                        }
                        self.src[ns..self.pos].to_string()
                    }
                    Some(c) => {
                        self.bump();
                        c.to_string()
                    }
                    None => {
                        self.fail_span(start, 1, &["delimiter"], "missing delimiter")?;
                        unreachable!("fail_span always errors");
                    }
                };
                const DELIM_COMMANDS: &[&str] = &[
                    "{", "}", "|", "langle", "rangle", "lfloor", "rfloor", "lceil", "rceil",
                    "vert", "Vert", "backslash",
                ];
                if DELIM_COMMANDS.contains(&name.as_str()) {
                    let info = self
                        .registry
                        .get(&name)
                        .expect("delimiter commands are registered");
                    let symbol = info
                        .unicode
                        .expect("delimiter commands carry symbols")
                        .to_string();
                    Ok(Some(MathNode::operator(symbol)))
                } else {
                    self.fail_span(start, self.pos - start, &["delimiter"], "not a delimiter")?;
                    unreachable!("fail_span always errors");
                }
            }
            _ => {
                self.fail_here(&["delimiter"], "not a delimiter")?;
                unreachable!("fail_here always errors");
            }
        }
    }
}
