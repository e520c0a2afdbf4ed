//! Canonical texvc pretty-printer.
//!
//! The printer is the inverse used by the round-trip property: for every
//! tree `t` produced by the parser, `parse(print(t)) == t` structurally.
//! Output is canonical (braced arguments, single spaces between row
//! items), not a byte-copy of the original source.

use super::ast::MathNode;
use super::registry::CommandRegistry;

/// Renders a tree back to texvc source.
pub fn to_texvc(node: &MathNode) -> String {
    match node {
        // A root row with one child can only come from a `{…}` group;
        // print the braces so the reparse keeps the row.
        MathNode::Row { children } if children.len() == 1 => nested(node),
        MathNode::Row { children } => join(children),
        other => nested(other),
    }
}

fn join(children: &[MathNode]) -> String {
    children.iter().map(nested).collect::<Vec<_>>().join(" ")
}

fn nested(node: &MathNode) -> String {
    match node {
        MathNode::Identifier { name, unicode_hint } => {
            if unicode_hint.is_some() || name.chars().count() > 1 {
                format!("\\{name}")
            } else {
                name.clone()
            }
        }
        MathNode::Number { literal } => literal.clone(),
        MathNode::Operator { symbol } => operator_token(symbol),
        MathNode::Row { children } => format!("{{{}}}", join(children)),
        MathNode::Command { name, args } => command(name, args),
        MathNode::Script { base, sub, sup } => {
            let mut out = match base.as_ref() {
                // A script base is never itself a script in parser
                // output; brace it anyway so constructed trees survive.
                MathNode::Script { .. } => format!("{{{}}}", nested(base)),
                other => nested(other),
            };
            if let Some(s) = sub {
                out.push('_');
                out.push_str(&argument(s));
            }
            if let Some(s) = sup {
                out.push('^');
                out.push_str(&argument(s));
            }
            out
        }
        MathNode::SemanticMacro { macro_name, .. } => format!("\\{macro_name}"),
        // Chemical equations print through their own notation; see the
        // chem module. As a texvc fragment, fall back to the children.
        MathNode::ChemEquation { children } => join(children),
    }
}

/// Prints a command argument with its delimiting braces. Singleton rows
/// need an extra brace pair so the argument unwrapping of the parser
/// reconstructs the same tree.
fn argument(node: &MathNode) -> String {
    match node {
        MathNode::Row { children } if children.len() != 1 => nested(node),
        other => format!("{{{}}}", nested(other)),
    }
}

fn command(name: &str, args: &[MathNode]) -> String {
    if args.is_empty() {
        return format!("\\{name}");
    }
    if name == "text" || name == "operatorname" {
        if let [MathNode::Identifier { name: raw, .. }] = args {
            return format!("\\{name}{{{raw}}}");
        }
    }
    if name == "sqrt" && args.len() == 2 {
        let index = match &args[0] {
            MathNode::Row { children } => join(children),
            other => nested(other),
        };
        return format!("\\sqrt[{index}]{}", argument(&args[1]));
    }
    let mut out = format!("\\{name}");
    for arg in args {
        out.push_str(&argument(arg));
    }
    out
}

fn operator_token(symbol: &str) -> String {
    match symbol {
        "{" => "\\{".to_string(),
        "}" => "\\}".to_string(),
        "\u{2032}" => "'".to_string(),
        s if s.len() == 1 && super::parser_operator_char(s.chars().next().expect("len 1")) => {
            s.to_string()
        }
        s => match CommandRegistry::builtin().command_for_symbol(s) {
            Some(name) => format!("\\{name}"),
            // Not reachable for parser-produced trees.
            None => s.to_string(),
        },
    }
}
