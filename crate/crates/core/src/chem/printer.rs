//! Prints a chem tree back to mhchem notation (for TeX annotations).

use crate::texvc::MathNode;

use super::{CHARGE_MINUS, EQUILIBRIUM_ARROW, FORWARD_ARROW};

/// Renders a `ChemEquation` (or any unit inside one) back to the
/// mhchem notation it parsed from. Charges print in their canonical
/// `^`-form, so `Na+` comes back as `Na^+`; the reparse is structurally
/// identical either way.
pub fn print_ce(node: &MathNode) -> String {
    match node {
        MathNode::ChemEquation { children } => {
            let mut out = String::new();
            for child in children {
                match child {
                    MathNode::Operator { symbol } if symbol == "+" => out.push_str(" + "),
                    MathNode::Operator { symbol } if symbol == FORWARD_ARROW => {
                        out.push_str(" -> ")
                    }
                    MathNode::Operator { symbol } if symbol == EQUILIBRIUM_ARROW => {
                        out.push_str(" <=> ")
                    }
                    other => out.push_str(&unit(other)),
                }
            }
            out
        }
        other => unit(other),
    }
}

fn unit(node: &MathNode) -> String {
    match node {
        MathNode::Identifier { name, .. } => name.clone(),
        MathNode::Number { literal } => literal.clone(),
        MathNode::Operator { symbol } => match symbol.as_str() {
            s if s == CHARGE_MINUS => "-".into(),
            s => s.to_string(),
        },
        MathNode::Row { children } => children.iter().map(unit).collect(),
        MathNode::Script { base, sub, sup } => {
            let mut out = unit(base);
            if let Some(s) = sub {
                out.push_str(&unit(s));
            }
            if let Some(s) = sup {
                out.push('^');
                out.push_str(&unit(s));
            }
            out
        }
        // State annotations are stored as text commands: `(aq)`.
        MathNode::Command { args, .. } => match args.first() {
            Some(MathNode::Identifier { name, .. }) => name.clone(),
            _ => String::new(),
        },
        MathNode::ChemEquation { .. } | MathNode::SemanticMacro { .. } => print_ce(node),
    }
}
