//! End-to-end tests of the mathkg binary: subcommands, exit codes,
//! output stability.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mathkg")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mathkg-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(store: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .arg("--store")
        .arg(store)
        .args(args)
        .env_remove("MATHKG_STORE")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn seed(store: &Path) {
    let out = run(store, &["seed", fixtures().join("seed").to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
}

#[test]
fn render_success_and_failure_exit_codes() {
    let dir = tmp("render");
    let ok = run(&dir, &["render", "x"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("<mi>x</mi>"), "{}", stdout(&ok));

    let bad = run(&dir, &["render", "{x"]);
    assert_eq!(bad.status.code(), Some(1));
    let err = stderr(&bad);
    assert!(err.contains("\"severity\":\"error\""), "{err}");
    assert!(err.contains("\"offset\":0"), "{err}");

    let usage = Command::new(bin()).arg("no-such-command").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn render_display_flag_and_determinism() {
    let dir = tmp("render-display");
    let block = run(&dir, &["render", "\\frac{1}{2}", "--display", "block"]);
    assert!(stdout(&block).starts_with("<math display=\"block\""));
    let again = run(&dir, &["render", "\\frac{1}{2}", "--display", "block"]);
    assert_eq!(stdout(&block), stdout(&again));
}

#[test]
fn validate_reports_diagnostics_as_json() {
    let dir = tmp("validate");
    let clean = run(&dir, &["validate", "\\sin x"]);
    assert_eq!(clean.status.code(), Some(0));
    assert_eq!(stdout(&clean).trim(), "[]");

    let broken = run(&dir, &["validate", "\\notacommand"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(stdout(&broken).contains("supported command"), "{}", stdout(&broken));

    let warned = run(&dir, &["validate", "^2"]);
    assert_eq!(warned.status.code(), Some(0));
    assert!(stdout(&warned).contains("\"severity\":\"warning\""));
}

#[test]
fn chem_renders_mhchem_notation() {
    let dir = tmp("chem");
    let out = run(&dir, &["chem", "SO4^2-"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("mathvariant=\"normal\""), "{text}");
    assert!(text.contains("\\ce{SO4^2-}"), "{text}");

    let bad = run(&dir, &["chem", "h2o"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn seed_query_search_homepage_stats_pipeline() {
    let dir = tmp("pipeline");
    let store = dir.join("store");

    // Seed is deterministic and idempotent.
    let first = run(&store, &["seed", fixtures().join("seed").to_str().unwrap()]);
    assert!(first.status.success(), "{}", stderr(&first));
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["created"], 19);
    assert_eq!(report["errors"].as_array().unwrap().len(), 0);
    let second = run(&store, &["seed", fixtures().join("seed").to_str().unwrap()]);
    let report2: serde_json::Value = serde_json::from_str(&stdout(&second)).unwrap();
    assert_eq!(report2["created"], 0);
    assert_eq!(report2["deduplicated"], 19);

    // The paper-shaped query, by label.
    let query = run(&store, &["query", "?f <uses symbol concept> <imaginary-unit>"]);
    assert!(query.status.success(), "{}", stderr(&query));
    let rows: Vec<String> = stdout(&query).lines().map(String::from).collect();
    assert_eq!(rows.len(), 1, "{rows:?}");
    let erf_item = rows[0].clone();

    // The transitive gamma query returns its four dependents.
    let gamma = run(&store, &["query", "?f <uses symbol concept>+ <gamma-function>"]);
    assert_eq!(stdout(&gamma).lines().count(), 4);

    // A two-pattern join intersects: only erf-relation uses both the
    // imaginary unit and the error function.
    let join = run(
        &store,
        &[
            "query",
            "?f <uses symbol concept> <imaginary-unit>",
            "?f <uses symbol concept> <error-function>",
        ],
    );
    assert_eq!(stdout(&join).trim(), erf_item);

    // JSON format.
    let json = run(
        &store,
        &["--format", "json", "query", "?f <uses symbol concept> <imaginary-unit>"],
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["rows"][0]["f"], serde_json::Value::String(erf_item.clone()));

    // Search: exact self-retrieval of a seeded formula.
    let search = run(
        &store,
        &["search", "\\iunit^{2} = -1", "--mode", "exact", "--limit", "3"],
    );
    assert!(search.status.success(), "{}", stderr(&search));
    let line = stdout(&search);
    assert!(line.trim().ends_with("1.0000"), "{line}");

    // Homepage files for the erf item.
    let pages = dir.join("pages");
    let homepage = run(
        &store,
        &["homepage", "<erf-relation>", "--out", pages.to_str().unwrap()],
    );
    assert!(homepage.status.success(), "{}", stderr(&homepage));
    let html = std::fs::read_to_string(pages.join(format!("{erf_item}.html"))).unwrap();
    assert!(html.contains("https://dlmf.nist.gov/1.9#E1"), "{html}");
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(pages.join(format!("{erf_item}.json"))).unwrap())
            .unwrap();
    assert_eq!(sidecar["item"], serde_json::Value::String(erf_item.clone()));
    assert_eq!(sidecar["linked_concepts"].as_array().unwrap().len(), 2);

    // Stats.
    let stats = run(&store, &["stats"]);
    let text = stdout(&stats);
    assert!(text.contains("indexed_formulas\t11"), "{text}");
    assert!(text.contains("statements\t"), "{text}");

    // Homepage of an item without formulas is a domain error.
    let no_formula = run(&store, &["homepage", "<ggplot2>", "--out", pages.to_str().unwrap()]);
    assert_eq!(no_formula.status.code(), Some(1));
}

#[test]
fn stats_on_an_empty_store_is_all_zeros() {
    let dir = tmp("empty-stats");
    let out = run(&dir.join("store"), &["stats"]);
    assert!(out.status.success());
    for line in stdout(&out).lines() {
        let (_, value) = line.split_once('\t').unwrap();
        assert_eq!(value, "0", "{line}");
    }
    let json = run(&dir.join("store"), &["--format", "json", "stats"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["entities"], 0);
    assert_eq!(doc["indexed_formulas"], 0);
}

#[test]
fn store_path_comes_from_the_environment() {
    let dir = tmp("env-store");
    let store = dir.join("store");
    let out = Command::new(bin())
        .env("MATHKG_STORE", &store)
        .args(["seed", fixtures().join("seed").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(store.join("entities.jsonl").exists());
}

#[test]
fn render_links_resolves_against_the_seeded_store() {
    let dir = tmp("links");
    let store = dir.join("store");
    seed(&store);
    let out = run(&store, &["render", "\\iunit", "--links"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("href=\"./Q"), "{text}");

    // Without a store, the macro-table fallback URL is used.
    let fallback = run(&dir.join("nostore"), &["render", "\\iunit", "--links"]);
    assert!(
        stdout(&fallback).contains("href=\"https://dlmf.nist.gov/1.9#E1\""),
        "{}",
        stdout(&fallback)
    );
}

#[test]
fn import_depth_controls_the_neighborhood() {
    let dir = tmp("import");
    let store = dir.join("store");
    let out = run(
        &store,
        &[
            "import",
            "--id",
            "Q1799",
            "--fixtures",
            fixtures().join("wikidata").to_str().unwrap(),
            "--depth",
            "1",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // Entities are created in sorted upstream-id order.
    let root = report["root"].as_str().unwrap().to_string();
    assert_eq!(report["created"], 4); // Q1799 plus three stubs

    // The error function got its formula; search can find it.
    let search = run(&store, &["search", "\\operatorname{erf}", "--limit", "5"]);
    assert!(
        stdout(&search).starts_with(&format!("{root}\t")),
        "{} vs root {root}",
        stdout(&search)
    );

    // Bad upstream id is a domain error.
    let missing = run(
        &store,
        &[
            "import",
            "--id",
            "Q424242",
            "--fixtures",
            fixtures().join("wikidata").to_str().unwrap(),
        ],
    );
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn corrupt_seed_records_are_reported_not_fatal() {
    let dir = tmp("corrupt");
    let store = dir.join("store");
    let seed_dir = dir.join("seed");
    std::fs::create_dir_all(&seed_dir).unwrap();
    std::fs::write(
        seed_dir.join("dlmf_broken.tsv"),
        "1.1.E1\tx^2\t\tgood-formula\nbroken line without tabs\n",
    )
    .unwrap();
    let out = run(&store, &["seed", seed_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["created"], 1);
    assert_eq!(report["errors"].as_array().unwrap().len(), 1);
}

#[test]
fn store_files_are_byte_stable_across_reseeds() {
    let dir = tmp("stability");
    let store_a = dir.join("a");
    let store_b = dir.join("b");
    seed(&store_a);
    seed(&store_b);
    for file in ["entities.jsonl", "mappings.jsonl", "index.jsonl"] {
        let a = std::fs::read(store_a.join(file)).unwrap();
        let b = std::fs::read(store_b.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical seeds");
    }
}
