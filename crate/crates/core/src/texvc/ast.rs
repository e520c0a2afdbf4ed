//! The language-independent parse tree shared by the whole pipeline.

/// A node of the math parse tree.
///
/// Trees are finite and immutable after construction. `Row` is the only
/// variant whose child list may be empty (it represents empty input and
/// empty groups); `Command` nodes have empty argument lists exactly when
/// the registry arity of the command is zero (spacing commands).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MathNode {
    /// A single letter, a named constant (`\alpha`, `\infty`) or a
    /// multi-letter function name (`\sin`).
    Identifier {
        name: String,
        /// Preferred Unicode rendering, e.g. `α` for `alpha`.
        unicode_hint: Option<char>,
    },
    /// A numeric literal: a digit run with an optional decimal part.
    Number { literal: String },
    /// An operator symbol, stored as the character(s) to render.
    Operator { symbol: String },
    /// An ordered sequence of nodes; also the result of a `{...}` group.
    Row { children: Vec<MathNode> },
    /// A registry command applied to its arguments, e.g. `frac`, `sqrt`.
    Command { name: String, args: Vec<MathNode> },
    /// A sub/superscripted base. At least one of `sub`/`sup` is present.
    Script {
        base: Box<MathNode>,
        sub: Option<Box<MathNode>>,
        sup: Option<Box<MathNode>>,
    },
    /// A semantic macro such as `\iunit`: renders like `rendered` but
    /// carries a machine-readable concept key.
    SemanticMacro {
        macro_name: String,
        rendered: Box<MathNode>,
        concept_key: String,
    },
    /// A chemical equation parsed from mhchem notation (`\ce{...}`).
    ChemEquation { children: Vec<MathNode> },
}

impl MathNode {
    pub fn ident(name: impl Into<String>) -> Self {
        MathNode::Identifier {
            name: name.into(),
            unicode_hint: None,
        }
    }

    pub fn ident_hint(name: impl Into<String>, hint: char) -> Self {
        MathNode::Identifier {
            name: name.into(),
            unicode_hint: Some(hint),
        }
    }

    pub fn number(literal: impl Into<String>) -> Self {
        MathNode::Number {
            literal: literal.into(),
        }
    }

    pub fn operator(symbol: impl Into<String>) -> Self {
        MathNode::Operator {
            symbol: symbol.into(),
        }
    }

    pub fn row(children: Vec<MathNode>) -> Self {
        MathNode::Row { children }
    }

    pub fn command(name: impl Into<String>, args: Vec<MathNode>) -> Self {
        MathNode::Command {
            name: name.into(),
            args,
        }
    }

    pub fn script(base: MathNode, sub: Option<MathNode>, sup: Option<MathNode>) -> Self {
        MathNode::Script {
            base: Box::new(base),
            sub: sub.map(Box::new),
            sup: sup.map(Box::new),
        }
    }

    /// Number of nodes in the tree, counting this one.
    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.for_each(&mut |_| n += 1);
        n
    }

    /// Depth-first pre-order visit of every node.
    pub fn for_each<'a>(&'a self, f: &mut impl FnMut(&'a MathNode)) {
        f(self);
        match self {
            MathNode::Row { children } | MathNode::ChemEquation { children } => {
                for c in children {
                    c.for_each(f);
                }
            }
            MathNode::Command { args, .. } => {
                for a in args {
                    a.for_each(f);
                }
            }
            MathNode::Script { base, sub, sup } => {
                base.for_each(f);
                if let Some(s) = sub {
                    s.for_each(f);
                }
                if let Some(s) = sup {
                    s.for_each(f);
                }
            }
            MathNode::SemanticMacro { rendered, .. } => rendered.for_each(f),
            MathNode::Identifier { .. } | MathNode::Number { .. } | MathNode::Operator { .. } => {}
        }
    }

    pub fn is_empty_row(&self) -> bool {
        matches!(self, MathNode::Row { children } if children.is_empty())
    }
}

/// Canonical form used by the MathML emitter and the search index:
/// single-child rows are flattened away, recursively. Script fields are
/// already stored in canonical (sub-then-sup) order by construction, so
/// `x^2_i` and `x_i^2` normalize to the same tree.
///
/// Idempotent: `normalize(normalize(t)) == normalize(t)`.
pub fn normalize(node: &MathNode) -> MathNode {
    match node {
        MathNode::Row { children } if children.len() == 1 => normalize(&children[0]),
        MathNode::Row { children } => MathNode::Row {
            children: children.iter().map(normalize).collect(),
        },
        MathNode::ChemEquation { children } => MathNode::ChemEquation {
            children: children.iter().map(normalize).collect(),
        },
        MathNode::Command { name, args } => MathNode::Command {
            name: name.clone(),
            args: args.iter().map(normalize).collect(),
        },
        MathNode::Script { base, sub, sup } => MathNode::Script {
            base: Box::new(normalize(base)),
            sub: sub.as_deref().map(|n| Box::new(normalize(n))),
            sup: sup.as_deref().map(|n| Box::new(normalize(n))),
        },
        MathNode::SemanticMacro {
            macro_name,
            rendered,
            concept_key,
        } => MathNode::SemanticMacro {
            macro_name: macro_name.clone(),
            rendered: Box::new(normalize(rendered)),
            concept_key: concept_key.clone(),
        },
        leaf => leaf.clone(),
    }
}
