//! Textual pattern syntax for the command line:
//! `?item <P4> <Q1399>` — variables start with `?`, fixed terms sit in
//! angle brackets and hold either a local id (`Q7`, `P4`) or an English
//! label (`imaginary-unit`). A `+` after the property term makes the
//! pattern transitive (`?f <uses symbol concept>+ <gamma-function>`).
//! Double-quoted terms are string literals.

use crate::kg::{EntityId, KgStore, StatementValue};

use super::{QueryError, Term, TriplePattern};

pub fn parse_pattern(store: &KgStore, text: &str) -> Result<TriplePattern, QueryError> {
    let terms = split_terms(text).ok_or_else(|| QueryError::BadPattern(text.to_string()))?;
    if terms.len() != 3 {
        return Err(QueryError::BadPattern(text.to_string()));
    }
    let (prop_raw, transitive) = match terms[1].strip_suffix('+') {
        Some(stripped) => (stripped, true),
        None => (terms[1].as_str(), false),
    };
    let pattern = TriplePattern {
        subject: parse_term(store, &terms[0])?,
        property: parse_term(store, prop_raw)?,
        value: parse_term(store, &terms[2])?,
        transitive,
    };
    Ok(pattern)
}

fn split_terms(text: &str) -> Option<Vec<String>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        if let Some(tail) = rest.strip_prefix('<') {
            let end = tail.find('>')?;
            let mut term = format!("<{}>", &tail[..end]);
            let mut after = &tail[end + 1..];
            if let Some(stripped) = after.strip_prefix('+') {
                term.push('+');
                after = stripped;
            }
            out.push(term);
            rest = after.trim_start();
        } else if let Some(tail) = rest.strip_prefix('"') {
            let end = tail.find('"')?;
            out.push(format!("\"{}\"", &tail[..end]));
            rest = tail[end + 1..].trim_start();
        } else {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            out.push(rest[..end].to_string());
            rest = rest[end..].trim_start();
        }
    }
    Some(out)
}

fn parse_term(store: &KgStore, raw: &str) -> Result<Term, QueryError> {
    if let Some(name) = raw.strip_prefix('?') {
        if name.is_empty() {
            return Err(QueryError::BadTerm(raw.to_string()));
        }
        return Ok(Term::Var(name.to_string()));
    }
    if let Some(quoted) = raw.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
        return Ok(Term::Value(StatementValue::string(quoted)));
    }
    if let Some(interior) = raw.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
        return resolve_ref(store, interior);
    }
    Err(QueryError::BadTerm(raw.to_string()))
}

/// Resolves `Q7`/`P4`, or an English label.
pub fn resolve_ref(store: &KgStore, interior: &str) -> Result<Term, QueryError> {
    if let Ok(id) = interior.parse::<EntityId>() {
        if store.contains(id) {
            return Ok(Term::Entity(id));
        }
        return Err(QueryError::UnknownEntity(id));
    }
    let matches = store.find_by_label("en", interior);
    match matches.len() {
        0 => Err(QueryError::UnknownLabel(interior.to_string())),
        1 => Ok(Term::Entity(matches[0])),
        _ => Err(QueryError::AmbiguousLabel(interior.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{Datatype, Statement};

    fn store() -> KgStore {
        let mut store = KgStore::new();
        let uses = store
            .create_property("uses symbol concept", Datatype::Item)
            .unwrap();
        let i = store.create_item("imaginary-unit", "").unwrap();
        let f = store.create_item("erf-relation", "").unwrap();
        store
            .add_statement(f, Statement::new(uses, StatementValue::item(i)))
            .unwrap();
        store
    }

    #[test]
    fn parses_ids_labels_and_vars() {
        let store = store();
        let p = parse_pattern(&store, "?f <uses symbol concept> <imaginary-unit>").unwrap();
        assert_eq!(p.subject, Term::var("f"));
        assert_eq!(p.property, Term::Entity(EntityId::property(1)));
        assert_eq!(p.value, Term::Entity(EntityId::item(1)));
        assert!(!p.transitive);

        let p = parse_pattern(&store, "?f <P1> <Q1>").unwrap();
        assert_eq!(p.property, Term::Entity(EntityId::property(1)));
    }

    #[test]
    fn transitive_suffix() {
        let store = store();
        let p = parse_pattern(&store, "?f <uses symbol concept>+ <imaginary-unit>").unwrap();
        assert!(p.transitive);
    }

    #[test]
    fn string_literals() {
        let store = store();
        let p = parse_pattern(&store, "?s ?p \"hello world\"").unwrap();
        assert_eq!(p.value, Term::Value(StatementValue::string("hello world")));
    }

    #[test]
    fn bad_references_error() {
        let store = store();
        assert!(matches!(
            parse_pattern(&store, "?f <uses symbol concept> <no-such-label>"),
            Err(QueryError::UnknownLabel(_))
        ));
        assert!(matches!(
            parse_pattern(&store, "?f <P99> <Q1>"),
            Err(QueryError::UnknownEntity(_))
        ));
        assert!(matches!(
            parse_pattern(&store, "?f <P1>"),
            Err(QueryError::BadPattern(_))
        ));
    }

    #[test]
    fn ambiguous_labels_error() {
        let mut store = store();
        store.create_property("imaginary-unit", Datatype::Item).unwrap();
        assert!(matches!(
            parse_pattern(&store, "?f <P1> <imaginary-unit>"),
            Err(QueryError::AmbiguousLabel(_))
        ));
    }
}
