//! Golden files: the bundled formula corpus, the per-command MathML
//! coverage table, the chem conformance corpus, and the corpus failure
//! report. Run with BLESS=1 to regenerate after reviewing a change.

mod common;

use std::fs;

use mathkg_core::chem::{ce_test_suite, parse_ce};
use mathkg_core::mathml::{emit_mathml, xml, DisplayMode, EmitOptions, ALLOWED_ELEMENTS};
use mathkg_core::texvc::{
    parse_texvc, supported_commands, to_texvc, CommandClass, CommandRegistry,
};

use common::{blessing, golden_dir, manifest_dir, test_data_dir, wiki_corpus};

fn check_or_bless(path: &std::path::Path, actual: &str, what: &str) {
    if blessing() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(path)
        .unwrap_or_else(|_| panic!("{what}: golden file {} missing; run with BLESS=1", path.display()));
    assert_eq!(
        expected, actual,
        "{what}: output changed; review and re-run with BLESS=1"
    );
}

#[test]
fn corpus_file_is_the_pinned_generation() {
    let corpus = wiki_corpus();
    assert_eq!(corpus.len(), 1000);
    let content = corpus.join("\n") + "\n";
    check_or_bless(&test_data_dir().join("wiki_corpus.txt"), &content, "wiki corpus");
}

#[test]
fn corpus_failure_report_is_stable() {
    let corpus = wiki_corpus();
    let mut report = String::new();
    let mut failures = 0;
    for (idx, formula) in corpus.iter().enumerate() {
        if let Err(d) = parse_texvc(formula) {
            failures += 1;
            report.push_str(&format!(
                "{}\t{}\t{}\n",
                idx + 1,
                d.byte_offset,
                d.message
            ));
        }
    }
    let header = format!("# corpus failures: {failures} of {}\n", corpus.len());
    check_or_bless(
        &golden_dir().join("corpus_report.txt"),
        &format!("{header}{report}"),
        "corpus failure report",
    );
}

/// A canonical sample invocation for every registry command.
fn sample_for(name: &str, arity: u8, class: CommandClass) -> String {
    match (name, class) {
        ("left", _) => "\\left( x \\right)".to_string(),
        ("right", _) => "\\left. y \\right)".to_string(),
        ("sqrt", _) => "\\sqrt{x}".to_string(),
        ("frac", _) => "\\frac{1}{2}".to_string(),
        (_, CommandClass::Text) => format!("\\{name}{{ok}}"),
        (_, CommandClass::Accent) => format!("\\{name}{{x}}"),
        (_, CommandClass::Layout) => {
            let args = "{x}".repeat(arity as usize);
            format!("\\{name}{args}")
        }
        _ => format!("\\{name}"),
    }
}

#[test]
fn every_registry_command_has_a_pinned_mathml_rendering() {
    let mut table = String::new();
    for (name, arity, class) in supported_commands() {
        let sample = sample_for(&name, arity, class);
        let node = parse_texvc(&sample)
            .unwrap_or_else(|d| panic!("sample for {name} does not parse: {d}"));
        let mathml = emit_mathml(&node, &EmitOptions::default())
            .unwrap_or_else(|e| panic!("sample for {name} does not emit: {e}"));
        let doc = xml::parse_document(&mathml)
            .unwrap_or_else(|e| panic!("sample for {name} is not well-formed: {e}"));
        for element in doc.element_names() {
            assert!(
                ALLOWED_ELEMENTS.contains(&element.as_str()),
                "{name}: element {element} outside the vocabulary"
            );
        }
        table.push_str(&format!("{name}\t{sample}\t{mathml}\n"));
    }
    assert_eq!(table.lines().count(), CommandRegistry::builtin().len());
    check_or_bless(
        &golden_dir().join("command_mathml.tsv"),
        &table,
        "command MathML coverage",
    );
}

#[test]
fn chem_corpus_mathml_column_is_pinned() {
    let suite = ce_test_suite();
    let mut out = String::new();
    out.push_str("# mhchem conformance corpus.\n");
    out.push_str("# Columns: input<TAB>canonical-MathML (block display, links off).\n");
    out.push_str("# The MathML column is regenerated by the golden tests under BLESS=1.\n");
    for case in &suite {
        let node = parse_ce(&case.input).unwrap_or_else(|d| panic!("{}: {d}", case.input));
        let mathml = emit_mathml(
            &node,
            &EmitOptions { display: DisplayMode::Block, ..Default::default() },
        )
        .unwrap_or_else(|e| panic!("{}: {e}", case.input));
        out.push_str(&format!("{}\t{}\n", case.input, mathml));
    }
    let path = manifest_dir().join("data/chem_corpus.tsv");
    if blessing() {
        fs::write(&path, &out).unwrap();
        return;
    }
    // The embedded corpus must match what the pipeline emits today.
    for case in &suite {
        let node = parse_ce(&case.input).unwrap();
        let mathml = emit_mathml(
            &node,
            &EmitOptions { display: DisplayMode::Block, ..Default::default() },
        )
        .unwrap();
        assert_eq!(
            case.mathml, mathml,
            "{}: corpus MathML out of date; re-run with BLESS=1",
            case.input
        );
    }
}

#[test]
fn printed_corpus_round_trips_through_the_printer() {
    for formula in wiki_corpus() {
        let Ok(tree) = parse_texvc(&formula) else { continue };
        let printed = to_texvc(&tree);
        let back = parse_texvc(&printed)
            .unwrap_or_else(|d| panic!("reprint of {formula:?} = {printed:?} failed: {d}"));
        assert_eq!(back, tree, "round trip changed {formula:?} via {printed:?}");
    }
}
