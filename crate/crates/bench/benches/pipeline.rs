use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use mathkg_core::chem::parse_ce;
use mathkg_core::index::{FormulaIndex, SearchMode};
use mathkg_core::kg::{Datatype, EntityId, KgStore, Statement, StatementValue};
use mathkg_core::mathml::{emit_mathml, EmitOptions};
use mathkg_core::query::{select, transitive, Direction, Term, TriplePattern};
use mathkg_core::texvc::{normalize, parse_texvc, to_texvc};

const FORMULAS: &[&str] = &[
    "x = \\frac{-b \\pm \\sqrt{b^{2} - 4 a c}}{2 a}",
    "\\sum_{n=1}^{\\infty} \\frac{1}{n^{2}} = \\frac{\\pi^{2}}{6}",
    "\\operatorname{erf}\\left(x\\right) = \\frac{2}{\\sqrt{\\pi}} \\int_{0}^{x} e^{-t^{2}} \\, dt",
    "\\Gamma\\left(z\\right) = \\int_{0}^{\\infty} t^{z-1} e^{-t} \\, dt",
    "\\hat{H} \\psi = E \\psi",
];

fn bench_parse(c: &mut Criterion) {
    c.bench_function("parse_texvc/quadratic", |b| {
        b.iter(|| parse_texvc(black_box(FORMULAS[0])).unwrap())
    });
    c.bench_function("parse_texvc/erf", |b| {
        b.iter(|| parse_texvc(black_box(FORMULAS[2])).unwrap())
    });
}

fn bench_emit(c: &mut Criterion) {
    let trees: Vec<_> = FORMULAS.iter().map(|f| parse_texvc(f).unwrap()).collect();
    c.bench_function("emit_mathml/all", |b| {
        b.iter(|| {
            for t in &trees {
                black_box(emit_mathml(t, &EmitOptions::default()).unwrap());
            }
        })
    });
    c.bench_function("printer/normalize", |b| {
        b.iter(|| {
            for t in &trees {
                black_box(to_texvc(&normalize(t)));
            }
        })
    });
}

fn bench_chem(c: &mut Criterion) {
    c.bench_function("parse_ce/reaction", |b| {
        b.iter(|| parse_ce(black_box("2H2(g) + O2(g) -> 2H2O(l)")).unwrap())
    });
}

fn formula_pool(n: usize) -> Vec<String> {
    // Deterministic variations over the base formulas.
    (0..n)
        .map(|i| format!("{} + {}^{{{}}}", FORMULAS[i % FORMULAS.len()], (b'a' + (i % 26) as u8) as char, i))
        .collect()
}

fn bench_index(c: &mut Criterion) {
    let pool = formula_pool(200);
    let mut index = FormulaIndex::new();
    for (i, f) in pool.iter().enumerate() {
        index.index_formula(EntityId::item(i as u64 + 1), f).unwrap();
    }
    c.bench_function("index/search_subexpression", |b| {
        b.iter(|| {
            black_box(
                index
                    .search(black_box("\\frac{1}{n^{2}}"), SearchMode::Subexpression, 10)
                    .unwrap(),
            )
        })
    });
    c.bench_function("index/index_formula", |b| {
        let mut scratch = FormulaIndex::new();
        let mut i = 0u64;
        b.iter(|| {
            i += 1;
            scratch
                .index_formula(EntityId::item(i), &pool[(i as usize) % pool.len()])
                .unwrap();
        })
    });
}

fn bench_query(c: &mut Criterion) {
    let mut store = KgStore::new();
    let uses = store.create_property("uses symbol concept", Datatype::Item).unwrap();
    let items: Vec<EntityId> = (0..200)
        .map(|i| store.create_item(&format!("item {i}"), "").unwrap())
        .collect();
    for (i, &item) in items.iter().enumerate() {
        let target = items[(i * 7 + 3) % items.len()];
        store
            .add_statement(item, Statement::new(uses, StatementValue::item(target)))
            .unwrap();
    }
    let target = items[3];
    c.bench_function("query/select_fixed_value", |b| {
        b.iter(|| {
            black_box(
                select(
                    &store,
                    &[TriplePattern::new(
                        Term::var("x"),
                        Term::Entity(uses),
                        Term::Entity(target),
                    )],
                )
                .unwrap(),
            )
        })
    });
    c.bench_function("query/transitive_inverse", |b| {
        b.iter(|| black_box(transitive(&store, target, uses, Direction::Inverse).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_parse,
    bench_emit,
    bench_chem,
    bench_index,
    bench_query
);
criterion_main!(benches);
