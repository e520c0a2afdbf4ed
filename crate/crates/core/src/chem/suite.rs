//! Bundled mhchem conformance corpus.

use std::sync::LazyLock;

const CORPUS_TSV: &str = include_str!("../../data/chem_corpus.tsv");

/// One conformance case: the `\ce{…}` interior and the canonical MathML
/// the pipeline emits for it (block display, links off).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeCase {
    pub input: String,
    pub mathml: String,
}

/// The bundled conformance corpus, drawn from the mhchem documentation's
/// canonical examples. Spans every token variant of the subset.
pub fn ce_test_suite() -> Vec<CeCase> {
    static CASES: LazyLock<Vec<CeCase>> = LazyLock::new(|| {
        CORPUS_TSV
            .lines()
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let (input, mathml) = l.split_once('\t').unwrap_or((l, ""));
                CeCase {
                    input: input.to_string(),
                    mathml: mathml.to_string(),
                }
            })
            .collect()
    });
    CASES.clone()
}

#[cfg(test)]
mod tests {
    use super::super::{parse_ce, tokenize_ce, CeToken};
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn suite_is_large_enough() {
        let suite = ce_test_suite();
        assert!(suite.len() >= 60, "suite has {} cases", suite.len());
        assert!(suite.iter().any(|c| c.input == "H2O"));
        assert!(suite.iter().any(|c| c.input == "2H2 + O2 -> 2H2O"));
        assert!(suite.iter().any(|c| c.input == "SO4^2-"));
        assert!(suite.iter().any(|c| c.input.contains("<=>")));
    }

    #[test]
    fn every_token_variant_appears_at_least_three_times() {
        let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
        for case in ce_test_suite() {
            for tok in tokenize_ce(&case.input).expect("suite inputs tokenize") {
                let key = match tok.kind {
                    CeToken::ElementSymbol(_) => "element",
                    CeToken::StoichiometricCoefficient(_) => "coefficient",
                    CeToken::ChargeSign(_) => "charge",
                    CeToken::Arrow(super::super::ArrowKind::Forward) => "arrow-forward",
                    CeToken::Arrow(super::super::ArrowKind::Equilibrium) => "arrow-equilibrium",
                    CeToken::StateAnnotation(_) => "state",
                    CeToken::Subscript(_) => "subscript",
                    CeToken::Plus => "plus",
                    CeToken::GroupOpen => "group-open",
                    CeToken::GroupClose => "group-close",
                };
                *counts.entry(key).or_default() += 1;
            }
        }
        for key in [
            "element",
            "coefficient",
            "charge",
            "arrow-forward",
            "arrow-equilibrium",
            "state",
            "subscript",
            "plus",
            "group-open",
            "group-close",
        ] {
            assert!(
                counts.get(key).copied().unwrap_or(0) >= 3,
                "token variant {key} appears {} times",
                counts.get(key).copied().unwrap_or(0)
            );
        }
    }

    #[test]
    fn all_suite_inputs_parse() {
        for case in ce_test_suite() {
            parse_ce(&case.input).unwrap_or_else(|d| panic!("{}: {d}", case.input));
        }
    }
}
