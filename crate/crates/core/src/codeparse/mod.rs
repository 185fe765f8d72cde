//! Code facet extraction for incomplete Java snippets.
//!
//! A snippet is tried as a compilation unit, then as class-body
//! declarations, statements and finally an expression. The first shape that
//! fits decides the synthetic wrapper; facets come from token patterns over
//! the original text so the wrapper never leaks into them.

mod facets;
mod imports;
mod levenshtein;
mod lexer;
mod modes;

pub use facets::{CodeFacets, FacetKind};
pub use imports::{deduce_imports, load_canonical_table, CanonicalTable, ImportDeduction, TableEntry, TableError};
pub use levenshtein::levenshtein;
pub use lexer::{tokenize, Token, TokenKind};
pub use modes::ParseMode;

use modes::Outline;
use serde::{Deserialize, Serialize};

/// Default cap on canonical-table entries.
pub const DEFAULT_TABLE_TOP_N: usize = 10_000;

/// Name of the synthetic class that wraps fragments.
pub const WRAPPER_CLASS: &str = "Fix";
const WRAPPER_METHOD: &str = "wrap";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WrapOutcome {
    /// Source as parsed, wrapped when `mode_used` is not a compilation unit.
    pub source: String,
    pub mode_used: ParseMode,
    pub wrapped: bool,
    /// False when no mode accepted the snippet; facets are then empty.
    pub parsed: bool,
}

/// Enclose `source` so that it parses as a compilation unit.
///
/// The source is copied verbatim between the wrapper prefix and suffix.
pub fn wrap_snippet(source: &str, target_mode: ParseMode) -> String {
    match target_mode {
        ParseMode::CompilationUnit => source.to_string(),
        ParseMode::ClassBodyDeclarations => format!("class {WRAPPER_CLASS} {{ {source} }}"),
        ParseMode::Statements => format!("class {WRAPPER_CLASS} {{ void {WRAPPER_METHOD}() {{ {source} }} }}"),
        ParseMode::Expression => {
            format!("class {WRAPPER_CLASS} {{ void {WRAPPER_METHOD}() {{ Object v = ({source}); }} }}")
        }
    }
}

/// Extract facets, wrapping the snippet when it is not a compilation unit.
pub fn parse_facets(source: &str) -> (CodeFacets, WrapOutcome) {
    parse_facets_with(source, true)
}

/// Like [`parse_facets`]; with `allow_wrapping == false` only complete
/// compilation units yield facets.
pub fn parse_facets_with(source: &str, allow_wrapping: bool) -> (CodeFacets, WrapOutcome) {
    let toks = tokenize(source);
    if toks.is_empty() {
        let outcome = WrapOutcome {
            source: wrap_snippet(source, ParseMode::Expression),
            mode_used: ParseMode::Expression,
            wrapped: true,
            parsed: true,
        };
        return (CodeFacets::default(), outcome);
    }
    let modes: &[ParseMode] = if allow_wrapping { &ParseMode::ALL } else { &ParseMode::ALL[..1] };
    if let Some(outline) = Outline::new(&toks) {
        for &mode in modes {
            if outline.accepts(mode) {
                let facets = facets::extract(&strip_wrapper(&toks));
                let outcome = WrapOutcome {
                    source: wrap_snippet(source, mode),
                    mode_used: mode,
                    wrapped: mode != ParseMode::CompilationUnit,
                    parsed: true,
                };
                return (facets, outcome);
            }
        }
    }
    let mode = *modes.last().unwrap_or(&ParseMode::CompilationUnit);
    let outcome = WrapOutcome {
        source: wrap_snippet(source, mode),
        mode_used: mode,
        wrapped: mode != ParseMode::CompilationUnit,
        parsed: false,
    };
    (CodeFacets::default(), outcome)
}

/// Drop the tokens of our own statement/expression wrapper so that
/// re-parsing a wrapped snippet yields the same facets as the fragment.
fn strip_wrapper<'a>(toks: &[Token<'a>]) -> Vec<Token<'a>> {
    let texts: Vec<&str> = toks.iter().map(|t| t.text).collect();
    let mut start = 0;
    while start < texts.len() && matches!(texts[start], "package" | "import") {
        match texts[start..].iter().position(|t| *t == ";") {
            Some(p) => start += p + 1,
            None => return toks.to_vec(),
        }
    }
    let body = &texts[start..];
    const STMT_HEAD: [&str; 8] = ["class", WRAPPER_CLASS, "{", "void", WRAPPER_METHOD, "(", ")", "{"];
    const EXPR_HEAD: [&str; 4] = ["Object", "v", "=", "("];
    if body.len() < 10 || body[..8] != STMT_HEAD || body[body.len() - 2..] != ["}", "}"] {
        return toks.to_vec();
    }
    let (mut lo, mut hi) = (start + 8, toks.len() - 2);
    let inner = &texts[lo..hi];
    if inner.len() >= 6 && inner[..4] == EXPR_HEAD && inner[inner.len() - 2..] == [")", ";"] {
        lo += 4;
        hi -= 2;
    }
    let mut out = toks[..start].to_vec();
    out.extend_from_slice(&toks[lo..hi]);
    out
}

/// Wrap a fragment and, when it declares no imports, prepend the imports
/// deduced from `table` and `context_text`.
///
/// Complete compilation units with imports come back unchanged.
pub fn augment_snippet(source: &str, table: &CanonicalTable, context_text: &str) -> String {
    if tokenize(source).is_empty() {
        return source.to_string();
    }
    let (facets, outcome) = parse_facets(source);
    let deduced = if facets.imports.is_empty() {
        deduce_imports(&facets, table, context_text).imports
    } else {
        Vec::new()
    };
    if !outcome.wrapped && deduced.is_empty() {
        return source.to_string();
    }
    let body = outcome.source;
    if deduced.is_empty() {
        return body;
    }
    let mut lines = String::new();
    for name in &deduced {
        lines.push_str("import ");
        lines.push_str(name);
        lines.push_str(";\n");
    }
    lines.push('\n');
    match package_end(&body) {
        Some(end) => format!("{}\n{}{}", &body[..end], lines, body[end..].trim_start_matches('\n')),
        None => lines + &body,
    }
}

/// Byte offset just past a leading `package ...;` statement.
fn package_end(source: &str) -> Option<usize> {
    let toks = tokenize(source);
    if !toks.first()?.is("package") {
        return None;
    }
    let semi = toks.iter().find(|t| t.is(";"))?;
    Some(semi.offset + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LISTING_2: &str = include_str!("../../fixtures/listings/listing2.java");

    #[test]
    fn wrap_forms() {
        assert_eq!(wrap_snippet("int x;", ParseMode::Statements), "class Fix { void wrap() { int x; } }");
        assert!(wrap_snippet("a+b", ParseMode::Expression).contains("(a+b)"));
        assert_eq!(wrap_snippet("int x;", ParseMode::ClassBodyDeclarations), "class Fix { int x; }");
    }

    #[test]
    fn empty_source() {
        let (facets, outcome) = parse_facets("   \n");
        assert!(facets.is_empty());
        assert_eq!(outcome.mode_used, ParseMode::Expression);
        assert!(outcome.wrapped);
    }

    #[test]
    fn fragment_needs_statement_wrapping() {
        let (_, outcome) = parse_facets(LISTING_2);
        assert_eq!(outcome.mode_used, ParseMode::Statements);
        assert!(outcome.wrapped && outcome.parsed);
        let (_, strict) = parse_facets_with(LISTING_2, false);
        assert!(!strict.parsed);
    }

    #[test]
    fn rewrapped_fragment_keeps_facets() {
        let (direct, _) = parse_facets(LISTING_2);
        for mode in [ParseMode::Statements, ParseMode::Expression] {
            let (again, outcome) = parse_facets(&wrap_snippet(LISTING_2, mode));
            assert_eq!(outcome.mode_used, ParseMode::CompilationUnit);
            if mode == ParseMode::Statements {
                assert_eq!(again, direct);
            }
        }
        let (expr, _) = parse_facets("foo.bar(1)");
        let (expr_again, _) = parse_facets(&wrap_snippet("foo.bar(1)", ParseMode::Expression));
        assert_eq!(expr, expr_again);
    }

    #[test]
    fn unparseable_yields_nothing() {
        let (facets, outcome) = parse_facets("public void broken( {");
        assert!(facets.is_empty());
        assert!(!outcome.parsed);
    }

    #[test]
    fn augment_inserts_after_package() {
        let table = CanonicalTable::from_entries([("java.util.List", 3)], 10);
        let src = "package p;\nclass A { List xs; }";
        let out = augment_snippet(src, &table, "");
        assert!(out.starts_with("package p;\nimport java.util.List;\n"), "{out}");
        assert_eq!(parse_facets(&out).1.mode_used, ParseMode::CompilationUnit);
    }
}
