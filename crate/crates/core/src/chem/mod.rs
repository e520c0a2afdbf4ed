//! mhchem-subset parser for chemical equations (`\ce{…}` interiors).
//!
//! The supported subset: element symbols, integer coefficients and
//! subscripts, charges, `+`, `->` and `<=>` arrows, parenthesized
//! groups, and the state annotations `(s) (l) (g) (aq)`. Isotopes,
//! bonds and oxidation states are out of scope. The output is the
//! shared [`MathNode`] tree, so chemical formulas flow through the same
//! MathML pipeline as math; element symbols are rendered upright.

mod lexer;
mod printer;
mod suite;

pub use lexer::{tokenize_ce, ArrowKind, CeToken, Token};
pub use printer::print_ce;
pub use suite::{ce_test_suite, CeCase};

use crate::texvc::{Diagnostic, MathNode};

/// Forward reaction arrow (`->`).
pub const FORWARD_ARROW: &str = "\u{27F6}";
/// Equilibrium arrow (`<=>`).
pub const EQUILIBRIUM_ARROW: &str = "\u{21CC}";
/// Unicode minus used when rendering negative charges.
pub const CHARGE_MINUS: &str = "\u{2212}";

/// Parses the interior of a `\ce{…}` argument into a `ChemEquation`.
pub fn parse_ce(input: &str) -> Result<MathNode, Diagnostic> {
    let tokens = tokenize_ce(input)?;
    if tokens.is_empty() {
        return Err(Diagnostic::error(
            0,
            input.len(),
            vec!["chemical equation".into()],
            "empty chemical equation".into(),
        ));
    }
    let children = build(input, &tokens)?;
    Ok(MathNode::ChemEquation { children })
}

fn build(input: &str, tokens: &[Token]) -> Result<Vec<MathNode>, Diagnostic> {
    // One frame per open parenthesized group.
    let mut stack: Vec<(usize, Vec<MathNode>)> = Vec::new();
    let mut current: Vec<MathNode> = Vec::new();

    for tok in tokens {
        match &tok.kind {
            CeToken::ElementSymbol(sym) => current.push(MathNode::ident(sym.clone())),
            CeToken::StoichiometricCoefficient(n) => current.push(MathNode::number(n.clone())),
            CeToken::Subscript(n) => {
                let Some(base) = current.pop() else {
                    return Err(orphan(tok, "subscript with nothing to attach to"));
                };
                current.push(MathNode::script(base, Some(MathNode::number(n.clone())), None));
            }
            CeToken::ChargeSign(sign) => {
                let Some(unit) = current.pop() else {
                    return Err(orphan(tok, "charge with nothing to attach to"));
                };
                let sup = charge_node(tok.magnitude.as_deref(), *sign);
                let charged = match unit {
                    MathNode::Script { base, sub, sup: None } => MathNode::Script {
                        base,
                        sub,
                        sup: Some(Box::new(sup)),
                    },
                    other => MathNode::script(other, None, Some(sup)),
                };
                current.push(charged);
            }
            CeToken::Plus => current.push(MathNode::operator("+")),
            CeToken::Arrow(ArrowKind::Forward) => current.push(MathNode::operator(FORWARD_ARROW)),
            CeToken::Arrow(ArrowKind::Equilibrium) => {
                current.push(MathNode::operator(EQUILIBRIUM_ARROW))
            }
            CeToken::StateAnnotation(state) => {
                current.push(MathNode::command(
                    "text",
                    vec![MathNode::ident(format!("({state})"))],
                ));
            }
            CeToken::GroupOpen => {
                stack.push((tok.offset, std::mem::take(&mut current)));
            }
            CeToken::GroupClose => {
                let Some((_, outer)) = stack.pop() else {
                    return Err(Diagnostic::error(
                        tok.offset,
                        1,
                        vec!["(".into()],
                        "unbalanced closing parenthesis".into(),
                    ));
                };
                let mut children = vec![MathNode::operator("(")];
                children.extend(std::mem::replace(&mut current, outer));
                children.push(MathNode::operator(")"));
                current.push(MathNode::Row { children });
            }
        }
    }

    if let Some((open_offset, _)) = stack.pop() {
        return Err(Diagnostic::error(
            open_offset,
            input.len() - open_offset,
            vec![")".into()],
            "unbalanced parenthesis".into(),
        ));
    }
    Ok(current)
}

fn charge_node(magnitude: Option<&str>, sign: char) -> MathNode {
    let sign_node = MathNode::operator(if sign == '-' { CHARGE_MINUS } else { "+" });
    match magnitude {
        Some(m) => MathNode::row(vec![MathNode::number(m), sign_node]),
        None => sign_node,
    }
}

fn orphan(tok: &Token, message: &str) -> Diagnostic {
    Diagnostic::error(tok.offset, tok.len, vec!["element".into()], message.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn upright(sym: &str) -> MathNode {
        MathNode::ident(sym)
    }

    #[test]
    fn water_segments_into_element_and_subscript() {
        // Oracle: the mhchem reference renders H2O as H with subscript 2
        // followed by O, both upright.
        let node = parse_ce("H2O").unwrap();
        assert_eq!(
            node,
            MathNode::ChemEquation {
                children: vec![
                    MathNode::script(upright("H"), Some(MathNode::number("2")), None),
                    upright("O"),
                ]
            }
        );
    }

    #[test]
    fn reaction_keeps_coefficients_plus_and_arrow() {
        // Oracle: the mhchem reference segments this into coefficient 2,
        // H₂, plus, O₂, forward arrow, coefficient 2, H₂O.
        let h2 = MathNode::script(upright("H"), Some(MathNode::number("2")), None);
        let o2 = MathNode::script(upright("O"), Some(MathNode::number("2")), None);
        let node = parse_ce("2H2 + O2 -> 2H2O").unwrap();
        assert_eq!(
            node,
            MathNode::ChemEquation {
                children: vec![
                    MathNode::number("2"),
                    h2.clone(),
                    MathNode::operator("+"),
                    o2,
                    MathNode::operator(FORWARD_ARROW),
                    MathNode::number("2"),
                    h2,
                    upright("O"),
                ]
            }
        );
    }

    #[test]
    fn sulfate_charge_merges_into_the_subscript_script() {
        // Oracle: mhchem renders SO4^2- with the charge as a superscript
        // 2− sharing the O's subscript position.
        let node = parse_ce("SO4^2-").unwrap();
        assert_eq!(
            node,
            MathNode::ChemEquation {
                children: vec![
                    upright("S"),
                    MathNode::script(
                        upright("O"),
                        Some(MathNode::number("4")),
                        Some(MathNode::row(vec![
                            MathNode::number("2"),
                            MathNode::operator(CHARGE_MINUS),
                        ])),
                    ),
                ]
            }
        );
    }

    #[test]
    fn bare_trailing_sign_is_a_charge() {
        let node = parse_ce("Na+").unwrap();
        assert_eq!(
            node,
            MathNode::ChemEquation {
                children: vec![MathNode::script(
                    upright("Na"),
                    None,
                    Some(MathNode::operator("+")),
                )]
            }
        );
    }

    #[test]
    fn groups_nest_and_take_subscripts() {
        let node = parse_ce("Ca(OH)2").unwrap();
        let MathNode::ChemEquation { children } = &node else {
            panic!("not a chem equation")
        };
        assert_eq!(children.len(), 2);
        let MathNode::Script { base, sub, .. } = &children[1] else {
            panic!("group subscript missing: {children:?}")
        };
        assert_eq!(sub.as_deref(), Some(&MathNode::number("2")));
        let MathNode::Row { children: grp } = base.as_ref() else {
            panic!("group is not a row")
        };
        assert_eq!(grp.first(), Some(&MathNode::operator("(")));
        assert_eq!(grp.last(), Some(&MathNode::operator(")")));
    }

    #[test]
    fn state_annotations_become_text() {
        let node = parse_ce("H2O(l)").unwrap();
        let MathNode::ChemEquation { children } = &node else {
            panic!("not a chem equation")
        };
        assert_eq!(
            children.last(),
            Some(&MathNode::command("text", vec![MathNode::ident("(l)")]))
        );
    }

    #[test]
    fn malformed_inputs_are_diagnosed() {
        assert!(parse_ce("").is_err());
        assert!(parse_ce("h2o").is_err());
        assert!(parse_ce("Ca(OH").is_err());
        assert!(parse_ce("H2O)").is_err());
        assert!(parse_ce("^2-").is_err());
    }

    #[test]
    fn equilibrium_arrow_parses() {
        let node = parse_ce("N2 + 3H2 <=> 2NH3").unwrap();
        let MathNode::ChemEquation { children } = &node else {
            panic!("not a chem equation")
        };
        assert!(children.contains(&MathNode::operator(EQUILIBRIUM_ARROW)));
    }
}
