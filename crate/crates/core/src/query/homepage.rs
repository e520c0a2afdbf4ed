//! Formula homepages: one page per formula item with its source,
//! rendering, linked concepts, identifiers and backlinks.

use serde::Serialize;

use crate::importer::parsers::USES_PROPERTY;
use crate::kg::{EntityId, KgStore, StatementValue};
use crate::mathml::{emit_mathml, expand_semantics, DisplayMode, EmitOptions};

use super::QueryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConceptLink {
    pub id: EntityId,
    pub label: String,
    pub url: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExternalIdEntry {
    pub id_type: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Backlink {
    pub id: EntityId,
    pub label: String,
}

/// The structured content of one formula homepage. `to_html` renders
/// the page; the struct itself serializes as the JSON sidecar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomepageDoc {
    pub item: EntityId,
    pub title: String,
    pub texvc: String,
    pub mathml: String,
    pub linked_concepts: Vec<ConceptLink>,
    pub external_ids: Vec<ExternalIdEntry>,
    pub backlinks: Vec<Backlink>,
}

/// Relative URL of an entity's homepage, used for local links.
pub fn local_page(id: EntityId) -> String {
    format!("./{id}.html")
}

/// Resolves a concept key (an English label) to a link target: the
/// local page when the store has the concept, the semantic-macro
/// fallback URL otherwise.
pub fn store_link_resolver(store: &KgStore) -> impl Fn(&str) -> Option<String> + '_ {
    resolver_for(store)
}

fn resolver_for(store: &KgStore) -> impl Fn(&str) -> Option<String> + '_ {
    move |concept_key: &str| {
        if let Some(id) = store.item_by_label("en", concept_key) {
            return Some(local_page(id));
        }
        store
            .macros()
            .fallback_for_concept(concept_key)
            .map(String::from)
    }
}

/// Builds the homepage of a formula item. The item must carry at least
/// one math statement.
pub fn formula_homepage(store: &KgStore, item: EntityId) -> Result<HomepageDoc, QueryError> {
    let entity = store.entity(item).ok_or(QueryError::UnknownEntity(item))?;
    let texvc = entity
        .first_math()
        .ok_or(QueryError::NoFormula(item))?
        .to_string();
    let ast = expand_semantics(&texvc, store.macros())
        .map_err(|_| QueryError::NoFormula(item))?;
    let resolver = resolver_for(store);
    let mathml = emit_mathml(
        &ast,
        &EmitOptions {
            display: DisplayMode::Block,
            resolve_links: true,
            link_resolver: Some(&resolver),
        },
    )?;

    let title = entity
        .label("en")
        .map(String::from)
        .unwrap_or_else(|| item.to_string());

    let uses = store.property_by_label("en", USES_PROPERTY);
    let mut linked_concepts = Vec::new();
    if let Some(uses) = uses {
        for st in &entity.statements {
            if st.property != uses {
                continue;
            }
            let StatementValue::Item { id } = st.value else { continue };
            let Some(concept) = store.entity(id) else { continue };
            let label = concept
                .label("en")
                .map(String::from)
                .unwrap_or_else(|| id.to_string());
            // Prefer the curated fallback URL of the macro table (the
            // permanent identifier of the concept's definition), then
            // the concept's own external identifier, then its local
            // page.
            let url = store
                .macros()
                .fallback_for_concept(&label)
                .map(String::from)
                .or_else(|| {
                    concept.external_ids().find_map(|(id_type, value)| {
                        store.external_type(id_type).map(|t| t.url_for(value))
                    })
                })
                .unwrap_or_else(|| local_page(id));
            linked_concepts.push(ConceptLink { id, label, url });
        }
    }

    let external_ids = entity
        .external_ids()
        .map(|(id_type, value)| ExternalIdEntry {
            id_type: id_type.to_string(),
            value: value.to_string(),
            url: store.external_type(id_type).map(|t| t.url_for(value)),
        })
        .collect();

    let mut backlinks = Vec::new();
    if let Some(uses) = uses {
        for other in store.entities() {
            if other.id == item {
                continue;
            }
            let points_here = other
                .statements
                .iter()
                .any(|st| st.property == uses && st.value == StatementValue::item(item));
            if points_here {
                backlinks.push(Backlink {
                    id: other.id,
                    label: other
                        .label("en")
                        .map(String::from)
                        .unwrap_or_else(|| other.id.to_string()),
                });
            }
        }
    }

    Ok(HomepageDoc {
        item,
        title,
        texvc,
        mathml,
        linked_concepts,
        external_ids,
        backlinks,
    })
}

impl HomepageDoc {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("homepage serialization cannot fail")
    }

    pub fn to_html(&self) -> String {
        let mut out = String::new();
        out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
        out.push_str(&format!("<title>{}</title>\n", esc(&self.title)));
        out.push_str("</head>\n<body>\n");
        out.push_str(&format!(
            "<h1>{} <small>({})</small></h1>\n",
            esc(&self.title),
            self.item
        ));
        out.push_str(&format!("<section class=\"formula\">{}</section>\n", self.mathml));
        out.push_str(&format!("<pre class=\"texvc\">{}</pre>\n", esc(&self.texvc)));
        if !self.linked_concepts.is_empty() {
            out.push_str("<h2>Linked concepts</h2>\n<ul>\n");
            for c in &self.linked_concepts {
                out.push_str(&format!(
                    "<li><a href=\"{}\">{}</a> ({})</li>\n",
                    esc(&c.url),
                    esc(&c.label),
                    c.id
                ));
            }
            out.push_str("</ul>\n");
        }
        if !self.external_ids.is_empty() {
            out.push_str("<h2>External identifiers</h2>\n<ul>\n");
            for e in &self.external_ids {
                match &e.url {
                    Some(url) => out.push_str(&format!(
                        "<li>{}: <a href=\"{}\">{}</a></li>\n",
                        esc(&e.id_type),
                        esc(url),
                        esc(&e.value)
                    )),
                    None => out.push_str(&format!(
                        "<li>{}: {}</li>\n",
                        esc(&e.id_type),
                        esc(&e.value)
                    )),
                }
            }
            out.push_str("</ul>\n");
        }
        if !self.backlinks.is_empty() {
            out.push_str("<h2>Used by</h2>\n<ul>\n");
            for b in &self.backlinks {
                out.push_str(&format!(
                    "<li><a href=\"{}\">{}</a> ({})</li>\n",
                    esc(&local_page(b.id)),
                    esc(&b.label),
                    b.id
                ));
            }
            out.push_str("</ul>\n");
        }
        out.push_str("</body>\n</html>\n");
        out
    }
}

fn esc(s: &str) -> String {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{Datatype, Statement};

    fn seeded() -> (KgStore, EntityId, EntityId) {
        let mut store = KgStore::new();
        let uses = store.create_property(USES_PROPERTY, Datatype::Item).unwrap();
        let formula = store.create_property("defining formula", Datatype::Math).unwrap();
        let i_unit = store.create_item("imaginary-unit", "the imaginary unit").unwrap();
        let erf = store.create_item("erf-relation", "erf interrelation").unwrap();
        store
            .add_statement(
                erf,
                Statement::new(formula, StatementValue::math("e^{-z^{2}} \\operatorname{erfc}(-\\iunit z)")),
            )
            .unwrap();
        store
            .add_statement(erf, Statement::new(uses, StatementValue::item(i_unit)))
            .unwrap();
        (store, erf, i_unit)
    }

    #[test]
    fn homepage_links_concepts_with_fallback_urls() {
        let (store, erf, i_unit) = seeded();
        let page = formula_homepage(&store, erf).unwrap();
        assert_eq!(page.title, "erf-relation");
        assert_eq!(page.linked_concepts.len(), 1);
        let link = &page.linked_concepts[0];
        assert_eq!(link.id, i_unit);
        assert_eq!(link.label, "imaginary-unit");
        // The macro table pins the DLMF permalink for this concept.
        assert_eq!(link.url, "https://dlmf.nist.gov/1.9#E1");
        // The MathML carries a local link for the \iunit occurrence.
        assert!(page.mathml.contains(&format!("href=\"{}\"", local_page(i_unit))));
    }

    #[test]
    fn formula_free_items_are_rejected() {
        let (mut store, _, _) = seeded();
        let plain = store.create_item("no formula here", "").unwrap();
        assert!(matches!(
            formula_homepage(&store, plain),
            Err(QueryError::NoFormula(_))
        ));
    }

    #[test]
    fn backlinks_list_direct_users() {
        let (store, erf, i_unit) = seeded();
        // imaginary-unit itself has no formula; give it one and check
        // erf appears among its users.
        let mut store = store;
        let formula = store.property_by_label("en", "defining formula").unwrap();
        store
            .add_statement(
                i_unit,
                Statement::new(formula, StatementValue::math("\\iunit^{2} = -1")),
            )
            .unwrap();
        let page = formula_homepage(&store, i_unit).unwrap();
        assert_eq!(page.backlinks.len(), 1);
        assert_eq!(page.backlinks[0].id, erf);
        assert!(page.linked_concepts.is_empty());
    }

    #[test]
    fn html_is_deterministic_and_escaped() {
        let (store, erf, _) = seeded();
        let page = formula_homepage(&store, erf).unwrap();
        assert_eq!(page.to_html(), page.to_html());
        assert!(page.to_html().contains("&amp;") || !page.texvc.contains('&'));
    }
}
