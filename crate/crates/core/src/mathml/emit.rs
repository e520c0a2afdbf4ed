//! Root-first translation of the parse tree into presentation MathML.
//!
//! Output is canonical: attributes sorted alphabetically, no
//! insignificant whitespace, no XML declaration, a single `math` root.
//! The texvc source of the tree is embedded as a
//! `<annotation encoding="application/x-tex">` element.

use std::fmt;

use thiserror::Error;

use crate::chem::print_ce;
use crate::texvc::{to_texvc, CommandClass, CommandRegistry, MathNode};

/// The full presentation-MathML vocabulary this emitter may produce.
/// Semantic links ride on an `mrow` with an `href` attribute.
pub const ALLOWED_ELEMENTS: &[&str] = &[
    "math",
    "mrow",
    "mi",
    "mn",
    "mo",
    "msub",
    "msup",
    "msubsup",
    "mfrac",
    "msqrt",
    "mroot",
    "mtext",
    "mspace",
    "mover",
    "munder",
    "munderover",
    "semantics",
    "annotation",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisplayMode {
    Block,
    #[default]
    Inline,
}

impl fmt::Display for DisplayMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DisplayMode::Block => f.write_str("block"),
            DisplayMode::Inline => f.write_str("inline"),
        }
    }
}

/// Emission options. With `resolve_links` off the output carries no link
/// attributes at all; with it on, every semantic macro must resolve to a
/// URL through `link_resolver` or emission fails.
#[derive(Default, Clone, Copy)]
pub struct EmitOptions<'a> {
    pub display: DisplayMode,
    pub resolve_links: bool,
    #[allow(clippy::type_complexity)]
    pub link_resolver: Option<&'a dyn Fn(&str) -> Option<String>>,
}

impl fmt::Debug for EmitOptions<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EmitOptions")
            .field("display", &self.display)
            .field("resolve_links", &self.resolve_links)
            .field("link_resolver", &self.link_resolver.map(|_| "<fn>"))
            .finish()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmitError {
    #[error("no knowledge-graph item or fallback URL for concept {concept_key:?}")]
    UnresolvedConcept { concept_key: String },
    #[error("command {name:?} is not in the registry")]
    UnknownCommand { name: String },
}

/// Translates a tree to a MathML document string.
pub fn emit_mathml(ast: &MathNode, opts: &EmitOptions<'_>) -> Result<String, EmitError> {
    let mut body = String::new();
    let mut emitter = Emitter { opts, upright: false };
    emitter.node(&mut body, ast)?;

    let source = match ast {
        MathNode::ChemEquation { .. } => format!("\\ce{{{}}}", print_ce(ast)),
        other => to_texvc(other),
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<math display=\"{}\" xmlns=\"http://www.w3.org/1998/Math/MathML\"><semantics>",
        opts.display
    ));
    out.push_str(&body);
    out.push_str("<annotation encoding=\"application/x-tex\">");
    out.push_str(&escape_text(&source));
    out.push_str("</annotation></semantics></math>");
    Ok(out)
}

struct Emitter<'a> {
    opts: &'a EmitOptions<'a>,
    /// Inside a chemical equation: identifiers render upright.
    upright: bool,
}

impl Emitter<'_> {
    fn node(&mut self, out: &mut String, n: &MathNode) -> Result<(), EmitError> {
        match n {
            MathNode::Identifier { name, unicode_hint } => {
                let text = match unicode_hint {
                    Some(c) => c.to_string(),
                    None => name.clone(),
                };
                if self.upright {
                    tag(out, "mi", &[("mathvariant", "normal")], &escape_text(&text));
                } else {
                    tag(out, "mi", &[], &escape_text(&text));
                }
            }
            MathNode::Number { literal } => tag(out, "mn", &[], &escape_text(literal)),
            MathNode::Operator { symbol } => tag(out, "mo", &[], &escape_text(symbol)),
            MathNode::Row { children } => {
                out.push_str("<mrow>");
                for c in children {
                    self.node(out, c)?;
                }
                out.push_str("</mrow>");
            }
            MathNode::ChemEquation { children } => {
                let was = self.upright;
                self.upright = true;
                out.push_str("<mrow>");
                for c in children {
                    self.node(out, c)?;
                }
                out.push_str("</mrow>");
                self.upright = was;
            }
            MathNode::Command { name, args } => self.command(out, name, args)?,
            MathNode::Script { base, sub, sup } => {
                let element = match (takes_limits(base), sub, sup) {
                    (true, Some(_), Some(_)) => "munderover",
                    (true, Some(_), None) => "munder",
                    (true, None, _) => "mover",
                    (false, Some(_), Some(_)) => "msubsup",
                    (false, Some(_), None) => "msub",
                    (false, None, _) => "msup",
                };
                out.push_str(&format!("<{element}>"));
                self.node(out, base)?;
                if let Some(s) = sub {
                    self.node(out, s)?;
                }
                if let Some(s) = sup {
                    self.node(out, s)?;
                }
                out.push_str(&format!("</{element}>"));
            }
            MathNode::SemanticMacro {
                rendered,
                concept_key,
                ..
            } => {
                if self.opts.resolve_links {
                    let url = self
                        .opts
                        .link_resolver
                        .and_then(|r| r(concept_key))
                        .ok_or_else(|| EmitError::UnresolvedConcept {
                            concept_key: concept_key.clone(),
                        })?;
                    out.push_str(&format!("<mrow href=\"{}\">", escape_attr(&url)));
                    self.node(out, rendered)?;
                    out.push_str("</mrow>");
                } else {
                    self.node(out, rendered)?;
                }
            }
        }
        Ok(())
    }

    fn command(&mut self, out: &mut String, name: &str, args: &[MathNode]) -> Result<(), EmitError> {
        let info = CommandRegistry::builtin()
            .get(name)
            .ok_or_else(|| EmitError::UnknownCommand { name: name.to_string() })?;
        match info.class {
            CommandClass::Layout if name == "frac" => {
                out.push_str("<mfrac>");
                self.node(out, &args[0])?;
                self.node(out, &args[1])?;
                out.push_str("</mfrac>");
            }
            CommandClass::Layout if name == "sqrt" => {
                if args.len() == 2 {
                    // mroot takes base then index.
                    out.push_str("<mroot>");
                    self.node(out, &args[1])?;
                    self.node(out, &args[0])?;
                    out.push_str("</mroot>");
                } else {
                    out.push_str("<msqrt>");
                    self.node(out, &args[0])?;
                    out.push_str("</msqrt>");
                }
            }
            CommandClass::Text => {
                let raw = match args.first() {
                    Some(MathNode::Identifier { name, .. }) => name.as_str(),
                    _ => "",
                };
                if name == "operatorname" {
                    tag(out, "mi", &[], &escape_text(raw));
                } else {
                    tag(out, "mtext", &[], &escape_text(raw));
                }
            }
            CommandClass::Accent => {
                let accent = info
                    .unicode
                    .expect("accent entries carry a character")
                    .to_string();
                out.push_str("<mover>");
                self.node(out, &args[0])?;
                tag(out, "mo", &[], &escape_text(&accent));
                out.push_str("</mover>");
            }
            CommandClass::Space => {
                let width = space_width(name);
                out.push_str(&format!("<mspace width=\"{width}\"></mspace>"));
            }
            // `left`/`right` never reach the tree; identifier and
            // operator commands become leaf nodes at parse time.
            _ => {
                return Err(EmitError::UnknownCommand { name: name.to_string() });
            }
        }
        Ok(())
    }
}

fn space_width(name: &str) -> &'static str {
    match name {
        "quad" => "1em",
        "qquad" => "2em",
        "," => "0.1667em",
        ";" => "0.2778em",
        ":" => "0.2222em",
        _ => "0em",
    }
}

/// Operators and function names that set their scripts as limits
/// (under/over) rather than as sub/superscripts.
fn takes_limits(base: &MathNode) -> bool {
    const LIMIT_OPERATORS: &[&str] = &[
        "\u{2211}", // sum
        "\u{220F}", // prod
        "\u{2210}", // coprod
        "\u{22C3}", // bigcup
        "\u{22C2}", // bigcap
        "\u{22C1}", // bigvee
        "\u{22C0}", // bigwedge
        "\u{2A01}", // bigoplus
        "\u{2A02}", // bigotimes
    ];
    const LIMIT_FUNCTIONS: &[&str] = &[
        "lim", "limsup", "liminf", "max", "min", "sup", "inf", "gcd", "det", "Pr",
    ];
    match base {
        MathNode::Operator { symbol } => LIMIT_OPERATORS.contains(&symbol.as_str()),
        MathNode::Identifier { name, .. } => LIMIT_FUNCTIONS.contains(&name.as_str()),
        _ => false,
    }
}

fn tag(out: &mut String, name: &str, attrs: &[(&str, &str)], text: &str) {
    out.push('<');
    out.push_str(name);
    let mut sorted: Vec<_> = attrs.to_vec();
    sorted.sort();
    for (k, v) in sorted {
        out.push_str(&format!(" {k}=\"{v}\""));
    }
    out.push('>');
    out.push_str(text);
    out.push_str(&format!("</{name}>"));
}

pub(crate) fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

pub(crate) fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}
