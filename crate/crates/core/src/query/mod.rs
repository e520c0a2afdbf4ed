//! Triple-pattern queries, transitive dependency queries, and formula
//! homepages over a store snapshot. Read-only and freely concurrent.

mod homepage;
mod pattern;

pub use homepage::{
    formula_homepage, local_page, store_link_resolver, Backlink, ConceptLink, ExternalIdEntry,
    HomepageDoc,
};
pub use pattern::{parse_pattern, resolve_ref};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::kg::{EntityId, KgStore, StatementValue};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("unknown entity {0}")]
    UnknownEntity(EntityId),
    #[error("empty pattern list")]
    EmptyPatternList,
    #[error("a transitive pattern needs a fixed property")]
    TransitiveNeedsProperty,
    #[error("cannot parse pattern term {0:?}")]
    BadTerm(String),
    #[error("pattern needs exactly 3 terms: ?var or <ref>, got {0:?}")]
    BadPattern(String),
    #[error("label {0:?} does not name any entity")]
    UnknownLabel(String),
    #[error("label {0:?} is ambiguous (names an item and a property)")]
    AmbiguousLabel(String),
    #[error("{0} has no formula statement")]
    NoFormula(EntityId),
    #[error("mathml: {0}")]
    Emit(#[from] crate::mathml::EmitError),
}

/// One term of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Entity(EntityId),
    Value(StatementValue),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }
}

/// A subject–property–value pattern. With `transitive` set, the
/// property must be fixed and the pattern matches pairs connected by a
/// path of one or more statements of that property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: Term,
    pub property: Term,
    pub value: Term,
    pub transitive: bool,
}

impl TriplePattern {
    pub fn new(subject: Term, property: Term, value: Term) -> TriplePattern {
        TriplePattern { subject, property, value, transitive: false }
    }
}

/// A value bound to a variable: an entity or a literal statement value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Binding {
    Entity(EntityId),
    Value(String),
}

impl Binding {
    fn from_value(v: &StatementValue) -> Binding {
        match v {
            StatementValue::Item { id } => Binding::Entity(*id),
            other => Binding::Value(other.render()),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Binding::Entity(id) => id.to_string(),
            Binding::Value(s) => s.clone(),
        }
    }
}

/// Deduplicated, deterministically ordered query results.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BindingSet {
    /// Projected variables, in order of first appearance.
    pub vars: Vec<String>,
    pub rows: Vec<BTreeMap<String, Binding>>,
}

impl BindingSet {
    /// One TSV line per row, columns in `vars` order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let cols: Vec<String> = self
                .vars
                .iter()
                .map(|v| row.get(v).map(|b| b.render()).unwrap_or_default())
                .collect();
            out.push_str(&cols.join("\t"));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Evaluates a conjunction of triple patterns (join semantics).
///
/// Rows are exactly the variable assignments satisfying all patterns
/// simultaneously, deduplicated and sorted by their rendered values.
pub fn select(store: &KgStore, patterns: &[TriplePattern]) -> Result<BindingSet, QueryError> {
    if patterns.is_empty() {
        return Err(QueryError::EmptyPatternList);
    }
    // Validate fixed ids up front.
    for p in patterns {
        for term in [&p.subject, &p.property, &p.value] {
            if let Term::Entity(id) = term {
                if !store.contains(*id) {
                    return Err(QueryError::UnknownEntity(*id));
                }
            }
        }
        if p.transitive && !matches!(p.property, Term::Entity(_)) {
            return Err(QueryError::TransitiveNeedsProperty);
        }
    }

    let mut vars: Vec<String> = Vec::new();
    for p in patterns {
        for term in [&p.subject, &p.property, &p.value] {
            if let Term::Var(name) = term {
                if !vars.contains(name) {
                    vars.push(name.clone());
                }
            }
        }
    }

    let mut rows: Vec<BTreeMap<String, Binding>> = vec![BTreeMap::new()];
    for pattern in patterns {
        let facts = pattern_facts(store, pattern);
        let mut next: Vec<BTreeMap<String, Binding>> = Vec::new();
        for partial in &rows {
            for (subject, property, value) in &facts {
                let mut candidate = partial.clone();
                if bind(&mut candidate, &pattern.subject, &Binding::Entity(*subject))
                    && bind(&mut candidate, &pattern.property, &Binding::Entity(*property))
                    && bind(&mut candidate, &pattern.value, value)
                {
                    next.push(candidate);
                }
            }
        }
        rows = next;
        if rows.is_empty() {
            break;
        }
    }
    rows.sort();
    rows.dedup();
    Ok(BindingSet { vars, rows })
}

/// The (subject, property, value) facts a single pattern ranges over.
fn pattern_facts(store: &KgStore, pattern: &TriplePattern) -> Vec<(EntityId, EntityId, Binding)> {
    if pattern.transitive {
        let Term::Entity(property) = pattern.property else {
            unreachable!("validated by select");
        };
        return transitive_pairs(store, property)
            .into_iter()
            .map(|(s, v)| (s, property, Binding::Entity(v)))
            .collect();
    }
    let mut out = Vec::new();
    for entity in store.entities() {
        for st in &entity.statements {
            out.push((entity.id, st.property, Binding::from_value(&st.value)));
        }
    }
    out
}

/// All (x, y) with y reachable from x via one or more hops of
/// `property` statements.
fn transitive_pairs(store: &KgStore, property: EntityId) -> Vec<(EntityId, EntityId)> {
    let mut edges: BTreeMap<EntityId, BTreeSet<EntityId>> = BTreeMap::new();
    for entity in store.entities() {
        for st in &entity.statements {
            if st.property == property {
                if let StatementValue::Item { id } = st.value {
                    edges.entry(entity.id).or_default().insert(id);
                }
            }
        }
    }
    let mut out = Vec::new();
    for &start in edges.keys() {
        let reachable = reach(&edges, start);
        for target in reachable {
            out.push((start, target));
        }
    }
    out
}

fn reach(edges: &BTreeMap<EntityId, BTreeSet<EntityId>>, start: EntityId) -> BTreeSet<EntityId> {
    let mut seen: BTreeSet<EntityId> = BTreeSet::new();
    let mut frontier: Vec<EntityId> = edges.get(&start).map(|s| s.iter().copied().collect()).unwrap_or_default();
    while let Some(node) = frontier.pop() {
        if seen.insert(node) {
            if let Some(next) = edges.get(&node) {
                frontier.extend(next.iter().copied());
            }
        }
    }
    seen
}

fn bind(row: &mut BTreeMap<String, Binding>, term: &Term, actual: &Binding) -> bool {
    match term {
        Term::Var(name) => match row.get(name) {
            Some(bound) => bound == actual,
            None => {
                row.insert(name.clone(), actual.clone());
                true
            }
        },
        Term::Entity(id) => matches!(actual, Binding::Entity(a) if a == id),
        Term::Value(v) => *actual == Binding::from_value(v),
    }
}

/// The set of entities reachable from `start` via one or more hops of
/// `property`. `Forward` follows statements of the frontier; `Inverse`
/// follows statements pointing at the frontier. `start` itself appears
/// only if a cycle reaches back to it. Terminates on cyclic graphs.
pub fn transitive(
    store: &KgStore,
    start: EntityId,
    property: EntityId,
    direction: Direction,
) -> Result<BTreeSet<EntityId>, QueryError> {
    if !store.contains(start) {
        return Err(QueryError::UnknownEntity(start));
    }
    if !store.contains(property) {
        return Err(QueryError::UnknownEntity(property));
    }
    let mut edges: BTreeMap<EntityId, BTreeSet<EntityId>> = BTreeMap::new();
    for entity in store.entities() {
        for st in &entity.statements {
            if st.property == property {
                if let StatementValue::Item { id } = st.value {
                    match direction {
                        Direction::Forward => {
                            edges.entry(entity.id).or_default().insert(id);
                        }
                        Direction::Inverse => {
                            edges.entry(id).or_default().insert(entity.id);
                        }
                    }
                }
            }
        }
    }
    Ok(reach(&edges, start))
}
