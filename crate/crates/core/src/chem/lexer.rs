//! Tokenizer for the mhchem subset.

use crate::texvc::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrowKind {
    Forward,
    Equilibrium,
}

/// Token alphabet of the supported `\ce{…}` notation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CeToken {
    /// `[A-Z][a-z]?`
    ElementSymbol(String),
    /// Digit run at the start of a term, e.g. the `2` in `2H2O`.
    StoichiometricCoefficient(String),
    /// Trailing `+`/`-` of a charge; an optional magnitude digit run is
    /// carried alongside in [`Token::magnitude`].
    ChargeSign(char),
    Arrow(ArrowKind),
    /// `s`, `l`, `g` or `aq`.
    StateAnnotation(String),
    /// Digit run attached after an element or group.
    Subscript(String),
    /// Term separator `+`.
    Plus,
    GroupOpen,
    GroupClose,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: CeToken,
    pub offset: usize,
    pub len: usize,
    /// Digit run of a charge such as the `2` of `^2-`.
    pub magnitude: Option<String>,
}

impl Token {
    fn new(kind: CeToken, offset: usize, len: usize) -> Token {
        Token { kind, offset, len, magnitude: None }
    }
}

/// Splits the interior of `\ce{…}` into tokens. Whitespace separates
/// terms and decides whether `+` is a separator or a charge.
pub fn tokenize_ce(input: &str) -> Result<Vec<Token>, Diagnostic> {
    let bytes = input.as_bytes();
    let mut out: Vec<Token> = Vec::new();
    let mut pos = 0usize;
    // True when the previous character was whitespace (or start of
    // input), i.e. we are at a term boundary.
    let mut boundary = true;

    while pos < bytes.len() {
        let c = bytes[pos] as char;
        if c.is_ascii_whitespace() {
            boundary = true;
            pos += 1;
            continue;
        }
        let start = pos;
        match c {
            'A'..='Z' => {
                pos += 1;
                if pos < bytes.len() && bytes[pos].is_ascii_lowercase() {
                    pos += 1;
                }
                out.push(Token::new(
                    CeToken::ElementSymbol(input[start..pos].to_string()),
                    start,
                    pos - start,
                ));
            }
            '0'..='9' => {
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits = input[start..pos].to_string();
                let attached = !boundary
                    && matches!(
                        out.last().map(|t| &t.kind),
                        Some(CeToken::ElementSymbol(_) | CeToken::GroupClose)
                    );
                let kind = if attached {
                    CeToken::Subscript(digits)
                } else {
                    CeToken::StoichiometricCoefficient(digits)
                };
                out.push(Token::new(kind, start, pos - start));
            }
            '^' => {
                pos += 1;
                let mag_start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let magnitude = if pos > mag_start {
                    Some(input[mag_start..pos].to_string())
                } else {
                    None
                };
                let sign = if pos < bytes.len() {
                    bytes[pos] as char
                } else {
                    '\0'
                };
                if sign != '+' && sign != '-' {
                    return Err(Diagnostic::error(
                        start,
                        pos - start,
                        vec!["+".into(), "-".into()],
                        "charge without sign".into(),
                    ));
                }
                pos += 1;
                let mut tok = Token::new(CeToken::ChargeSign(sign), start, pos - start);
                tok.magnitude = magnitude;
                out.push(tok);
            }
            '+' => {
                pos += 1;
                if boundary {
                    out.push(Token::new(CeToken::Plus, start, 1));
                } else {
                    // Attached: a bare charge, as in `Na+`.
                    out.push(Token::new(CeToken::ChargeSign('+'), start, 1));
                }
            }
            '-' => {
                if pos + 1 < bytes.len() && bytes[pos + 1] == b'>' {
                    pos += 2;
                    out.push(Token::new(CeToken::Arrow(ArrowKind::Forward), start, 2));
                } else if !boundary {
                    pos += 1;
                    out.push(Token::new(CeToken::ChargeSign('-'), start, 1));
                } else {
                    return Err(Diagnostic::error(
                        start,
                        1,
                        vec!["->".into()],
                        "stray minus; bonds are not supported".into(),
                    ));
                }
            }
            '<' => {
                if input[pos..].starts_with("<=>") {
                    pos += 3;
                    out.push(Token::new(CeToken::Arrow(ArrowKind::Equilibrium), start, 3));
                } else {
                    return Err(Diagnostic::error(
                        start,
                        1,
                        vec!["<=>".into()],
                        "incomplete equilibrium arrow".into(),
                    ));
                }
            }
            '(' => {
                // `(s) (l) (g) (aq)` are state annotations; any other
                // lowercase content cannot start a group.
                let rest = &input[pos + 1..];
                let close = rest.find(')');
                let content = close.map(|i| &rest[..i]);
                match content {
                    Some(state) if matches!(state, "s" | "l" | "g" | "aq") => {
                        let len = state.len() + 2;
                        out.push(Token::new(
                            CeToken::StateAnnotation(state.to_string()),
                            start,
                            len,
                        ));
                        pos += len;
                    }
                    _ => {
                        pos += 1;
                        out.push(Token::new(CeToken::GroupOpen, start, 1));
                    }
                }
            }
            ')' => {
                pos += 1;
                out.push(Token::new(CeToken::GroupClose, start, 1));
            }
            'a'..='z' => {
                return Err(Diagnostic::error(
                    start,
                    1,
                    vec!["element symbol".into()],
                    format!("malformed element symbol starting with {c:?}"),
                ));
            }
            _ => {
                return Err(Diagnostic::error(
                    start,
                    c.len_utf8(),
                    vec!["element symbol".into()],
                    format!("unsupported character {c:?}"),
                ));
            }
        }
        boundary = false;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(input: &str) -> Vec<CeToken> {
        tokenize_ce(input)
            .unwrap()
            .into_iter()
            .map(|t| t.kind)
            .collect()
    }

    #[test]
    fn water() {
        assert_eq!(
            kinds("H2O"),
            vec![
                CeToken::ElementSymbol("H".into()),
                CeToken::Subscript("2".into()),
                CeToken::ElementSymbol("O".into()),
            ]
        );
    }

    #[test]
    fn coefficient_vs_subscript() {
        assert_eq!(
            kinds("2H2"),
            vec![
                CeToken::StoichiometricCoefficient("2".into()),
                CeToken::ElementSymbol("H".into()),
                CeToken::Subscript("2".into()),
            ]
        );
    }

    #[test]
    fn plus_requires_a_boundary() {
        assert_eq!(
            kinds("Na+"),
            vec![
                CeToken::ElementSymbol("Na".into()),
                CeToken::ChargeSign('+'),
            ]
        );
        assert_eq!(
            kinds("A + B"),
            vec![
                CeToken::ElementSymbol("A".into()),
                CeToken::Plus,
                CeToken::ElementSymbol("B".into()),
            ]
        );
    }

    #[test]
    fn charge_magnitude_is_carried() {
        let toks = tokenize_ce("SO4^2-").unwrap();
        let charge = toks.last().unwrap();
        assert_eq!(charge.kind, CeToken::ChargeSign('-'));
        assert_eq!(charge.magnitude.as_deref(), Some("2"));
    }

    #[test]
    fn arrows() {
        assert!(kinds("A -> B").contains(&CeToken::Arrow(ArrowKind::Forward)));
        assert!(kinds("A <=> B").contains(&CeToken::Arrow(ArrowKind::Equilibrium)));
    }

    #[test]
    fn state_vs_group() {
        assert_eq!(
            kinds("(aq)"),
            vec![CeToken::StateAnnotation("aq".into())]
        );
        assert_eq!(
            kinds("(OH)")[0],
            CeToken::GroupOpen
        );
    }
}
