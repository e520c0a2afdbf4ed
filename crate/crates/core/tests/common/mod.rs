#![allow(dead_code)] // each test binary uses a different slice of this module

//! Shared test support: a pinned deterministic RNG and formula
//! generators used by the golden, property and acceptance suites.

use std::path::PathBuf;

/// SplitMix64: tiny, seedable, identical on every platform and build.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }
}

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures_dir() -> PathBuf {
    manifest_dir().join("../../fixtures")
}

pub fn golden_dir() -> PathBuf {
    manifest_dir().join("tests/golden")
}

pub fn test_data_dir() -> PathBuf {
    manifest_dir().join("tests/data")
}

/// Golden files are rewritten instead of checked when BLESS=1.
pub fn blessing() -> bool {
    std::env::var("BLESS").is_ok_and(|v| v == "1")
}

const LETTERS: &[&str] = &["a", "b", "c", "f", "g", "k", "m", "n", "p", "r", "t", "u", "v", "x", "y", "z"];
const GREEK: &[&str] = &[
    "\\alpha", "\\beta", "\\gamma", "\\delta", "\\epsilon", "\\theta", "\\lambda", "\\mu",
    "\\pi", "\\rho", "\\sigma", "\\tau", "\\phi", "\\omega", "\\Gamma", "\\Delta", "\\Omega",
];
const CONSTANTS: &[&str] = &["\\infty", "\\hbar", "\\ell", "\\partial", "\\emptyset"];
const BINARY_OPS: &[&str] = &[
    "+", "-", "=", "\\cdot", "\\times", "\\le", "\\ge", "\\ne", "\\in", "\\subseteq", "\\to",
    "\\approx", "\\equiv", ",",
];
const FUNCTIONS: &[&str] = &["\\sin", "\\cos", "\\tan", "\\exp", "\\log", "\\ln", "\\det", "\\max"];
const ACCENTS: &[&str] = &["\\hat", "\\bar", "\\vec", "\\tilde", "\\dot"];

fn atom(rng: &mut Rng) -> String {
    match rng.below(10) {
        0..=3 => (*rng.pick(LETTERS)).to_string(),
        4..=5 => (*rng.pick(GREEK)).to_string(),
        6..=7 => rng.below(500).to_string(),
        8 => format!("{}.{}", rng.below(100), rng.below(100)),
        _ => (*rng.pick(CONSTANTS)).to_string(),
    }
}

fn script_arg(rng: &mut Rng, depth: usize) -> String {
    if depth == 0 || rng.chance(60) {
        format!("{{{}}}", atom(rng))
    } else {
        format!("{{{}}}", term(rng, depth - 1))
    }
}

fn term(rng: &mut Rng, depth: usize) -> String {
    let choice = if depth == 0 { rng.below(3) } else { rng.below(12) };
    match choice {
        0 | 1 => atom(rng),
        2 => {
            // Scripted atom.
            let base = atom(rng);
            match rng.below(3) {
                0 => format!("{base}^{}", script_arg(rng, depth)),
                1 => format!("{base}_{}", script_arg(rng, depth)),
                _ => format!("{base}_{}^{}", script_arg(rng, depth), script_arg(rng, depth)),
            }
        }
        3 | 4 => format!(
            "\\frac{{{}}}{{{}}}",
            expr(rng, depth - 1),
            expr(rng, depth - 1)
        ),
        5 => {
            if rng.chance(25) {
                format!("\\sqrt[{}]{{{}}}", 2 + rng.below(3), expr(rng, depth - 1))
            } else {
                format!("\\sqrt{{{}}}", expr(rng, depth - 1))
            }
        }
        6 => format!("{} {}", rng.pick(FUNCTIONS), term(rng, depth - 1)),
        7 => format!(
            "\\sum_{{{}={}}}^{{{}}} {}",
            rng.pick(LETTERS),
            rng.below(3),
            if rng.chance(50) { "\\infty".to_string() } else { (*rng.pick(LETTERS)).to_string() },
            term(rng, depth - 1)
        ),
        8 => format!(
            "\\int_{{{}}}^{{{}}} {} \\, d{}",
            rng.below(2),
            if rng.chance(50) { "\\infty".to_string() } else { (*rng.pick(LETTERS)).to_string() },
            term(rng, depth - 1),
            rng.pick(LETTERS)
        ),
        9 => format!("\\left( {} \\right)", expr(rng, depth - 1)),
        10 => format!("{}{{{}}}", rng.pick(ACCENTS), atom(rng)),
        _ => format!("\\operatorname{{{}}} {}", rng.pick(&["erf", "sgn", "tr", "rank"]), atom(rng)),
    }
}

fn expr(rng: &mut Rng, depth: usize) -> String {
    let n = 1 + rng.below(3);
    let mut parts = vec![term(rng, depth)];
    for _ in 1..n {
        parts.push((*rng.pick(BINARY_OPS)).to_string());
        parts.push(term(rng, depth));
    }
    parts.join(" ")
}

/// One generated formula in the style of encyclopedia math markup.
pub fn generated_formula(rng: &mut Rng) -> String {
    expr(rng, 2)
}

/// Hand-picked realistic formulas included in the corpus verbatim.
pub const HANDPICKED: &[&str] = &[
    "x = \\frac{-b \\pm \\sqrt{b^{2} - 4 a c}}{2 a}",
    "e^{i \\pi} + 1 = 0",
    "a^{2} + b^{2} = c^{2}",
    "\\sum_{n=1}^{\\infty} \\frac{1}{n^{2}} = \\frac{\\pi^{2}}{6}",
    "\\operatorname{erf}\\left(x\\right) = \\frac{2}{\\sqrt{\\pi}} \\int_{0}^{x} e^{-t^{2}} \\, dt",
    "\\frac{\\partial^{2} u}{\\partial t^{2}} = c^{2} \\nabla^{2} u",
    "\\int_{-\\infty}^{\\infty} e^{-x^{2}} \\, dx = \\sqrt{\\pi}",
    "\\lim_{x \\to 0} \\frac{\\sin x}{x} = 1",
    "F_{n+1} = F_{n} + F_{n-1}",
    "\\cos^{2} \\theta + \\sin^{2} \\theta = 1",
    "\\zeta\\left(s\\right) = \\sum_{n=1}^{\\infty} \\frac{1}{n^{s}}",
    "\\Gamma\\left(z\\right) = \\int_{0}^{\\infty} t^{z-1} e^{-t} \\, dt",
    "\\forall \\epsilon > 0 \\, \\exists \\delta > 0",
    "f\\left(x\\right) = \\sum_{n=0}^{\\infty} \\frac{a_{n}}{n!} x^{n}",
    "\\left| z \\right| = \\sqrt{x^{2} + y^{2}}",
    "\\det A \\ne 0 \\Leftrightarrow A \\in \\operatorname{GL}_{n}",
    "\\hat{H} \\psi = E \\psi",
    "\\oint_{C} f\\left(z\\right) \\, dz = 0",
    "\\log_{2} n \\le \\operatorname{rank} M",
    "\\text{area} = \\pi r^{2}",
];

/// The corpus entries that intentionally fail to parse (unsupported
/// commands and broken syntax drawn from real-world fragments).
pub const KNOWN_BAD: &[&str] = &[
    "\\mathcal{F}\\left(x\\right)",
    "{a + b",
    "x^",
    "\\sum_{i=0^n",
];

/// The bundled 1,000-formula corpus: deterministic generation plus the
/// handpicked and known-bad entries, shuffled deterministically.
pub fn wiki_corpus() -> Vec<String> {
    let mut rng = Rng::new(0x5EED_0001);
    let mut all: Vec<String> = Vec::with_capacity(1000);
    all.extend(HANDPICKED.iter().map(|s| s.to_string()));
    all.extend(KNOWN_BAD.iter().map(|s| s.to_string()));
    while all.len() < 1000 {
        all.push(generated_formula(&mut rng));
    }
    // Deterministic shuffle.
    for i in (1..all.len()).rev() {
        let j = rng.below(i + 1);
        all.swap(i, j);
    }
    all
}

/// Random bytes forced to UTF-8, biased toward math-ish token soup so
/// grammar paths actually get exercised.
pub fn fuzz_input(rng: &mut Rng) -> String {
    let len = rng.below(256);
    if rng.chance(50) {
        let bytes: Vec<u8> = (0..len).map(|_| (rng.next_u64() & 0xFF) as u8).collect();
        String::from_utf8_lossy(&bytes).into_owned()
    } else {
        const TOKENS: &[&str] = &[
            "\\frac", "{", "}", "^", "_", "\\sqrt", "[", "]", "\\left", "\\right", "(", ")",
            "\\alpha", "x", "2", "+", "\\sum", "\\text", "\\notacmd", "\\", " ", "\\,", "'",
            "\\hat", "\\iunit", "\\operatorname",
        ];
        let mut out = String::new();
        while out.len() < len {
            out.push_str(rng.pick(TOKENS));
        }
        out
    }
}
