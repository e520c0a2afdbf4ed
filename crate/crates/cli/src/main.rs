//! mathkg: render texvc math to MathML, maintain a small mathematical
//! knowledge graph, and query it.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mathkg_core::importer::{import_entity_with_report, seed_dir, FixtureConnector, PropertyMap};
use mathkg_core::index::{FormulaIndex, SearchMode, INDEX_FILE};
use mathkg_core::kg::{EntityId, KgStore, ENTITIES_FILE};
use mathkg_core::mathml::{
    emit_mathml, DisplayMode, EmitOptions, MacroTable,
};
use mathkg_core::query::{
    formula_homepage, parse_pattern, select, store_link_resolver, QueryError,
};
use mathkg_core::texvc::{parse_with, CommandRegistry, Severity};
use mathkg_core::{chem, MathNode};

#[derive(Parser)]
#[command(
    name = "mathkg",
    about = "texvc math rendering and a Wikibase-style mathematical knowledge graph",
    version
)]
struct Cli {
    /// Store directory (created on first write).
    #[arg(long, global = true, env = "MATHKG_STORE", default_value = "./mathkg_store")]
    store: PathBuf,

    /// Output format for query, search and stats.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    /// Alternative command-registry TSV (name, arity, class, unicode).
    #[arg(long, global = true)]
    registry: Option<PathBuf>,

    /// Alternative semantic-macro TSV (macro, rendering, concept, url).
    #[arg(long, global = true)]
    macros: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Display {
    Block,
    Inline,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    #[value(alias = "sub")]
    Subexpression,
}

#[derive(Subcommand)]
enum Command {
    /// Render a texvc expression to MathML on standard output.
    Render {
        texvc: String,
        #[arg(long, value_enum, default_value_t = Display::Inline)]
        display: Display,
        /// Resolve semantic macros to clickable links.
        #[arg(long)]
        links: bool,
    },
    /// Check texvc syntax; prints diagnostics as JSON.
    Validate { texvc: String },
    /// Render the interior of a \ce{...} chemical equation to MathML.
    Chem { input: String },
    /// Import every recognized fixture file of a directory.
    Seed { fixture_dir: PathBuf },
    /// Import one entity (and its neighborhood) from a fixture source.
    Import {
        /// Upstream id, e.g. Q1799.
        #[arg(long)]
        id: String,
        /// Directory of source fixtures.
        #[arg(long)]
        fixtures: PathBuf,
        /// Source name.
        #[arg(long, default_value = "wikidata")]
        source: String,
        /// Import depth: 0 = terms only, 1 = statements plus stubs, ...
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
    /// Evaluate triple patterns, e.g. `?f <uses symbol concept> <pi-constant>`.
    Query { patterns: Vec<String> },
    /// Search stored formulas by texvc input.
    Search {
        texvc: String,
        #[arg(long, value_enum, default_value_t = Mode::Subexpression)]
        mode: Mode,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Write the HTML homepage + JSON sidecar of a formula item.
    Homepage {
        /// Local id ("Q7") or angle-bracketed label ("`<imaginary-unit>`").
        item: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Entity, statement, triple-equivalent and index counts.
    Stats,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let macros = load_macros(cli)?;
    match &cli.command {
        Command::Render { texvc, display, links } => cmd_render(cli, &macros, texvc, *display, *links),
        Command::Validate { texvc } => cmd_validate(cli, texvc),
        Command::Chem { input } => cmd_chem(input),
        Command::Seed { fixture_dir } => cmd_seed(cli, &macros, fixture_dir),
        Command::Import { id, fixtures, source, depth } => {
            cmd_import(cli, &macros, id, fixtures, source, *depth)
        }
        Command::Query { patterns } => cmd_query(cli, &macros, patterns),
        Command::Search { texvc, mode, limit } => cmd_search(cli, &macros, texvc, *mode, *limit),
        Command::Homepage { item, out } => cmd_homepage(cli, &macros, item, out),
        Command::Stats => cmd_stats(cli, &macros),
    }
}

fn load_macros(cli: &Cli) -> Result<MacroTable, String> {
    match &cli.macros {
        None => Ok(MacroTable::builtin().clone()),
        Some(path) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read macro table {}: {e}", path.display()))?;
            MacroTable::parse_tsv(&src).map_err(|e| e.to_string())
        }
    }
}

fn load_registry(cli: &Cli) -> Result<CommandRegistry, String> {
    match &cli.registry {
        None => Ok(CommandRegistry::builtin().clone()),
        Some(path) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read registry {}: {e}", path.display()))?;
            CommandRegistry::parse_tsv(&src).map_err(|e| e.to_string())
        }
    }
}

fn open_store(cli: &Cli, macros: &MacroTable) -> Result<KgStore, String> {
    if cli.store.join(ENTITIES_FILE).exists() {
        KgStore::load(&cli.store).map_err(|e| e.to_string())
    } else {
        Ok(KgStore::with_macros(macros.clone()))
    }
}

fn save_store_and_index(cli: &Cli, store: &KgStore) -> Result<(), String> {
    store.save(&cli.store).map_err(|e| e.to_string())?;
    let index = FormulaIndex::rebuild_from_store(store).map_err(|e| e.to_string())?;
    index
        .save(&cli.store.join(INDEX_FILE))
        .map_err(|e| e.to_string())
}

fn open_index(cli: &Cli, store: &KgStore) -> Result<FormulaIndex, String> {
    let path = cli.store.join(INDEX_FILE);
    if path.exists() {
        FormulaIndex::load(&path).map_err(|e| e.to_string())
    } else {
        FormulaIndex::rebuild_from_store(store).map_err(|e| e.to_string())
    }
}

/// Parses input that may contain semantic macros, using the configured
/// registry and macro table.
fn parse_input(
    registry: &CommandRegistry,
    macros: &MacroTable,
    texvc: &str,
) -> Result<MathNode, mathkg_core::Diagnostic> {
    let resolver = |name: &str| {
        macros.get(name).map(|e| mathkg_core::texvc::MacroExpansion {
            rendered: e.rendered.clone(),
            concept_key: e.concept_key.clone(),
        })
    };
    parse_with(texvc, registry, Some(&resolver)).result
}

fn cmd_render(
    cli: &Cli,
    macros: &MacroTable,
    texvc: &str,
    display: Display,
    links: bool,
) -> Result<ExitCode, String> {
    let registry = load_registry(cli)?;
    let node = match parse_input(&registry, macros, texvc) {
        Ok(node) => node,
        Err(diagnostic) => return Err(diagnostic.to_json()),
    };
    let display = match display {
        Display::Block => DisplayMode::Block,
        Display::Inline => DisplayMode::Inline,
    };
    let output = if links {
        let store = open_store(cli, macros)?;
        let store_resolver = store_link_resolver(&store);
        let fallback = |key: &str| {
            store_resolver(key).or_else(|| macros.fallback_for_concept(key).map(String::from))
        };
        emit_mathml(
            &node,
            &EmitOptions {
                display,
                resolve_links: true,
                link_resolver: Some(&fallback),
            },
        )
        .map_err(|e| e.to_string())?
    } else {
        emit_mathml(&node, &EmitOptions { display, ..Default::default() })
            .map_err(|e| e.to_string())?
    };
    println!("{output}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(cli: &Cli, texvc: &str) -> Result<ExitCode, String> {
    let registry = load_registry(cli)?;
    let outcome = parse_with(texvc, &registry, None);
    let mut diagnostics = Vec::new();
    if let Err(d) = outcome.result {
        diagnostics.push(d);
    }
    diagnostics.extend(outcome.warnings);
    let json: Vec<String> = diagnostics.iter().map(|d| d.to_json()).collect();
    println!("[{}]", json.join(","));
    // Diagnostics are the output; the exit code signals failure.
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_chem(input: &str) -> Result<ExitCode, String> {
    let node = chem::parse_ce(input).map_err(|d| d.to_json())?;
    let output = emit_mathml(&node, &EmitOptions::default()).map_err(|e| e.to_string())?;
    println!("{output}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_seed(cli: &Cli, macros: &MacroTable, fixture_dir: &Path) -> Result<ExitCode, String> {
    let mut store = open_store(cli, macros)?;
    let report = seed_dir(&mut store, fixture_dir).map_err(|e| e.to_string())?;
    save_store_and_index(cli, &store)?;
    println!("{}", report.to_json());
    Ok(ExitCode::SUCCESS)
}

fn cmd_import(
    cli: &Cli,
    macros: &MacroTable,
    id: &str,
    fixtures: &Path,
    source: &str,
    depth: u32,
) -> Result<ExitCode, String> {
    let mut store = open_store(cli, macros)?;
    let connector = FixtureConnector::from_dir(source, fixtures).map_err(|e| e.to_string())?;
    let (root, report) =
        import_entity_with_report(&mut store, &connector, PropertyMap::builtin(), id, depth)
            .map_err(|e| e.to_string())?;
    save_store_and_index(cli, &store)?;
    let mut value = serde_json::to_value(&report).expect("report serializes");
    value["root"] = serde_json::Value::String(root.to_string());
    println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    Ok(ExitCode::SUCCESS)
}

fn cmd_query(cli: &Cli, macros: &MacroTable, patterns: &[String]) -> Result<ExitCode, String> {
    let store = open_store(cli, macros)?;
    let parsed: Result<Vec<_>, QueryError> = patterns
        .iter()
        .map(|p| parse_pattern(&store, p))
        .collect();
    let parsed = parsed.map_err(|e| e.to_string())?;
    let result = select(&store, &parsed).map_err(|e| e.to_string())?;
    match cli.format {
        Format::Tsv => print!("{}", result.to_tsv()),
        Format::Json => {
            let rows: Vec<serde_json::Value> = result
                .rows
                .iter()
                .map(|row| {
                    let map: serde_json::Map<String, serde_json::Value> = result
                        .vars
                        .iter()
                        .filter_map(|v| {
                            row.get(v).map(|b| {
                                (v.clone(), serde_json::Value::String(b.render()))
                            })
                        })
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            let doc = serde_json::json!({ "vars": result.vars, "rows": rows });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(
    cli: &Cli,
    macros: &MacroTable,
    texvc: &str,
    mode: Mode,
    limit: usize,
) -> Result<ExitCode, String> {
    let store = open_store(cli, macros)?;
    let index = open_index(cli, &store)?;
    let mode = match mode {
        Mode::Exact => SearchMode::Exact,
        Mode::Subexpression => SearchMode::Subexpression,
    };
    let results = index
        .search(texvc, mode, limit.max(1))
        .map_err(|e| e.to_string())?;
    match cli.format {
        Format::Tsv => print!("{}", FormulaIndex::render_tsv(&results)),
        Format::Json => {
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|(id, score)| serde_json::json!({ "item": id.to_string(), "score": score }))
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_entity_arg(store: &KgStore, arg: &str) -> Result<EntityId, String> {
    let interior = arg
        .strip_prefix('<')
        .and_then(|s| s.strip_suffix('>'))
        .unwrap_or(arg);
    match mathkg_core::query::resolve_ref(store, interior) {
        Ok(mathkg_core::query::Term::Entity(id)) => Ok(id),
        Ok(_) => Err(format!("{arg:?} is not an entity reference")),
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_homepage(cli: &Cli, macros: &MacroTable, item: &str, out: &Path) -> Result<ExitCode, String> {
    let store = open_store(cli, macros)?;
    let id = resolve_entity_arg(&store, item)?;
    let doc = formula_homepage(&store, id).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(out).map_err(|e| e.to_string())?;
    let html_path = out.join(format!("{id}.html"));
    let json_path = out.join(format!("{id}.json"));
    std::fs::write(&html_path, doc.to_html()).map_err(|e| e.to_string())?;
    std::fs::write(&json_path, doc.to_json()).map_err(|e| e.to_string())?;
    println!("{}", html_path.display());
    println!("{}", json_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(cli: &Cli, macros: &MacroTable) -> Result<ExitCode, String> {
    let store = open_store(cli, macros)?;
    let index = open_index(cli, &store)?;
    let stats = store.stats();
    match cli.format {
        Format::Tsv => {
            println!("entities\t{}", stats.items + stats.properties);
            println!("items\t{}", stats.items);
            println!("properties\t{}", stats.properties);
            println!("statements\t{}", stats.statements);
            println!("triples\t{}", stats.triples);
            println!("mappings\t{}", stats.mappings);
            println!("indexed_formulas\t{}", index.len());
        }
        Format::Json => {
            let mut value = serde_json::to_value(&stats).expect("stats serialize");
            value["entities"] =
                serde_json::Value::from(stats.items + stats.properties);
            value["indexed_formulas"] = serde_json::Value::from(index.len() as u64);
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
    Ok(ExitCode::SUCCESS)
}
