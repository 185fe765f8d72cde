use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::QueryClause;
use crate::index::FieldId;

pub const TITLE_BOOST: f64 = 4.0;
pub const BODY_BOOST: f64 = 1.4;

pub const DEFAULT_TLD_PREFIXES: &[&str] = &["org", "com", "net", "io", "edu", "gov"];
pub const DEFAULT_GENERIC_SEGMENTS: &[&str] = &["impl", "builder", "core", "api", "util", "internal", "common"];

/// Segments removed when splitting import paths into text terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TokenizeOptions {
    /// Dropped only in first position.
    pub tld_prefixes: BTreeSet<String>,
    /// Dropped anywhere.
    pub generic_segments: BTreeSet<String>,
}

impl Default for TokenizeOptions {
    fn default() -> Self {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        TokenizeOptions { tld_prefixes: set(DEFAULT_TLD_PREFIXES), generic_segments: set(DEFAULT_GENERIC_SEGMENTS) }
    }
}

/// Package segments of the imports, deduplicated in first-seen order.
pub fn import_segments<'a>(imports: impl IntoIterator<Item = &'a str>, opts: &TokenizeOptions) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for import in imports {
        let mut parts: Vec<&str> = import.split('.').filter(|p| !p.is_empty()).collect();
        if parts.last().is_some_and(|p| p.starts_with(char::is_uppercase)) {
            parts.pop();
        }
        if parts.first().is_some_and(|p| opts.tld_prefixes.contains(*p)) {
            parts.remove(0);
        }
        for p in parts {
            let seg = p.to_lowercase();
            if seg.is_empty() || seg == "*" || opts.generic_segments.contains(&seg) {
                continue;
            }
            if seen.insert(seg.clone()) {
                out.push(seg);
            }
        }
    }
    out
}

/// Three text clauses per surviving segment: title at 4, answer and
/// question at 1.4.
pub fn tokenize_imports<'a>(imports: impl IntoIterator<Item = &'a str>, opts: &TokenizeOptions) -> Vec<QueryClause> {
    import_segments(imports, opts)
        .into_iter()
        .flat_map(|s| {
            [
                QueryClause { field: FieldId::Title, term: s.clone(), boost: TITLE_BOOST },
                QueryClause { field: FieldId::Answer, term: s.clone(), boost: BODY_BOOST },
                QueryClause { field: FieldId::Question, term: s, boost: BODY_BOOST },
            ]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segs(imports: &[&str]) -> Vec<String> {
        import_segments(imports.iter().copied(), &TokenizeOptions::default())
    }

    #[test]
    fn camel_imports() {
        let imports = [
            "org.apache.camel.CamelContext",
            "org.apache.camel.builder.RouteBuilder",
            "org.apache.camel.impl.DefaultCamelContext",
        ];
        assert_eq!(segs(&imports), ["apache", "camel"]);
        assert_eq!(tokenize_imports(imports, &TokenizeOptions::default()).len(), 6);
    }

    #[test]
    fn jackson() {
        assert_eq!(segs(&["com.fasterxml.jackson.databind.ObjectMapper"]), ["fasterxml", "jackson", "databind"]);
        assert!(segs(&[]).is_empty());
    }

    #[test]
    fn tld_only_dropped_first() {
        assert_eq!(segs(&["java.util.List", "tools.org.Thing", "io.netty.Channel"]), ["java", "tools", "org", "netty"]);
    }

    #[test]
    fn configurable_lists() {
        let opts = TokenizeOptions { tld_prefixes: BTreeSet::new(), generic_segments: BTreeSet::new() };
        assert_eq!(import_segments(["org.apache.camel.impl.X"], &opts), ["org", "apache", "camel", "impl"]);
    }
}
