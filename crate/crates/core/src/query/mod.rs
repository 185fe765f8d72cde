//! Query creation: facets of the context code become boosted clauses, and
//! import paths become text clauses.

mod boost;
mod tokenize;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codeparse::{parse_facets_with, tokenize, CodeFacets, FacetKind};
use crate::index::{FieldId, ScorerMode};

pub use boost::{assign_quartile_boosts, entropy_scores, multiset, quartile_boost, rank_by_score};
pub use tokenize::{
    import_segments, tokenize_imports, TokenizeOptions, BODY_BOOST, DEFAULT_GENERIC_SEGMENTS, DEFAULT_TLD_PREFIXES,
    TITLE_BOOST,
};

#[derive(Debug, Error, PartialEq)]
pub enum QueryError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("clause {field}:{term} has boost {boost}, expected a positive finite number")]
    BadBoost { field: FieldId, term: String, boost: f64 },
    #[error("clause on {0} has an empty term")]
    EmptyTerm(FieldId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryClause {
    pub field: FieldId,
    pub term: String,
    pub boost: f64,
}

impl QueryClause {
    pub fn new(field: FieldId, term: impl Into<String>, boost: f64) -> Result<Self, QueryError> {
        let term = term.into();
        if term.is_empty() {
            return Err(QueryError::EmptyTerm(field));
        }
        if !(boost.is_finite() && boost > 0.0) {
            return Err(QueryError::BadBoost { field, term, boost });
        }
        Ok(QueryClause { field, term, boost })
    }
}

impl fmt::Display for QueryClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}^{}", self.field.display_name(), self.term, self.boost)
    }
}

/// A disjunction of clauses, unique per `(field, term)` and sorted by field
/// then term.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub clauses: Vec<QueryClause>,
}

impl Query {
    /// Normalise: duplicates keep the larger boost.
    pub fn from_clauses(clauses: impl IntoIterator<Item = QueryClause>) -> Self {
        let mut merged: BTreeMap<(FieldId, String), f64> = BTreeMap::new();
        for c in clauses {
            let slot = merged.entry((c.field, c.term)).or_insert(c.boost);
            *slot = slot.max(c.boost);
        }
        Query { clauses: merged.into_iter().map(|((field, term), boost)| QueryClause { field, term, boost }).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    /// One `Field: term^boost` line per clause.
    pub fn to_text(&self) -> String {
        self.clauses.iter().map(|c| format!("{c}\n")).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("queries serialise")
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parse the line format, tolerating trailing ` OR` separators and any of
/// the accepted field spellings.
impl FromStr for Query {
    type Err = QueryError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut clauses = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let syntax = |message: &str| QueryError::Syntax { line: i + 1, message: message.into() };
            let mut line = raw.trim();
            if let Some(rest) = line.strip_suffix("OR").filter(|r| r.is_empty() || r.ends_with(char::is_whitespace)) {
                line = rest.trim_end();
            }
            if line.is_empty() {
                continue;
            }
            let (field, rest) = line.split_once(':').ok_or_else(|| syntax("expected `Field: term^boost`"))?;
            let field: FieldId = field.trim().parse().map_err(|e: crate::index::UnknownField| syntax(&e.to_string()))?;
            let rest = rest.trim();
            let (term, boost) = match rest.rsplit_once('^') {
                Some((t, b)) => (t.trim(), b.trim().parse::<f64>().map_err(|_| syntax("boost is not a number"))?),
                None => (rest, 1.0),
            };
            clauses.push(QueryClause::new(field, term, boost)?);
        }
        Ok(Query::from_clauses(clauses))
    }
}

/// Technique switches. Index-side: `wrapping`, `import_mining`.
/// Query-side: `entropy`, `tokenizing`. Search-side: `scorer_mode`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFlags {
    pub wrapping: bool,
    pub import_mining: bool,
    pub entropy: bool,
    pub tokenizing: bool,
    pub scorer_mode: ScorerMode,
}

impl ConfigFlags {
    /// Everything off, printed saturation scorer.
    pub const FLAT: ConfigFlags = ConfigFlags {
        wrapping: false,
        import_mining: false,
        entropy: false,
        tokenizing: false,
        scorer_mode: ScorerMode::PaperEq2,
    };

    /// Every technique on.
    pub const FULL: ConfigFlags =
        ConfigFlags { wrapping: true, import_mining: true, entropy: true, tokenizing: true, scorer_mode: ScorerMode::Standard };
}

impl Default for ConfigFlags {
    fn default() -> Self {
        ConfigFlags::FULL
    }
}

fn field_of(kind: FacetKind) -> FieldId {
    FieldId::from(kind)
}

/// How often each facet term occurs among the context's tokens. Imports
/// count their simple name. Every term counts at least once.
fn term_counts(source: &str, facets: &CodeFacets) -> BTreeMap<(FieldId, String), u64> {
    let mut occurrences: BTreeMap<&str, u64> = BTreeMap::new();
    for t in tokenize(source) {
        *occurrences.entry(t.text).or_insert(0) += 1;
    }
    facets
        .iter()
        .map(|(kind, term)| {
            let probe = match kind {
                FacetKind::ImportDeclaration => term.rsplit('.').next().unwrap_or(term),
                _ => term,
            };
            let n = occurrences.get(probe).copied().unwrap_or(0).max(1);
            ((field_of(kind), term.to_string()), n)
        })
        .collect()
}

/// Build the query for `context_source` under `config`.
pub fn build_query(context_source: &str, config: &ConfigFlags) -> Query {
    build_query_with(context_source, config, &TokenizeOptions::default())
}

pub fn build_query_with(context_source: &str, config: &ConfigFlags, opts: &TokenizeOptions) -> Query {
    let (facets, _) = parse_facets_with(context_source, config.wrapping);
    query_from_facets(context_source, &facets, config, opts)
}

/// Clauses for already extracted facets. `context_source` supplies the
/// term counts for entropy boosting.
pub fn query_from_facets(context_source: &str, facets: &CodeFacets, config: &ConfigFlags, opts: &TokenizeOptions) -> Query {
    let mut clauses: Vec<QueryClause> = if config.entropy {
        let scores = entropy_scores(&term_counts(context_source, facets));
        let ranked = rank_by_score(&scores);
        assign_quartile_boosts(&ranked)
            .into_iter()
            .map(|((field, term), b)| QueryClause { field, term, boost: f64::from(b) })
            .collect()
    } else {
        facets.iter().map(|(kind, term)| QueryClause { field: field_of(kind), term: term.to_string(), boost: 1.0 }).collect()
    };
    if config.tokenizing {
        clauses.extend(tokenize_imports(facets.imports.iter().map(String::as_str), opts));
    }
    Query::from_clauses(clauses)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LISTING1: &str = include_str!("../../fixtures/listings/listing1.java");
    const LISTING4: &str = include_str!("../../fixtures/listings/listing4.txt");

    fn listing4_flags() -> ConfigFlags {
        ConfigFlags { entropy: false, ..ConfigFlags::FULL }
    }

    #[test]
    fn sixteen_clauses_of_the_sample_query() {
        let expected: Query = LISTING4.parse().unwrap();
        assert_eq!(expected.len(), 16);
        assert_eq!(build_query(LISTING1, &listing4_flags()), expected);
    }

    #[test]
    fn flat_query_has_only_code_clauses() {
        let q = build_query(LISTING1, &ConfigFlags::FLAT);
        assert_eq!(q.len(), 10);
        assert!(q.clauses.iter().all(|c| !c.field.is_text() && c.boost == 1.0));
    }

    #[test]
    fn entropy_boosts_are_quartiles() {
        let q = build_query(LISTING1, &ConfigFlags::FULL);
        let code: Vec<_> = q.clauses.iter().filter(|c| !c.field.is_text()).collect();
        assert_eq!(code.len(), 10);
        let mut per = [0usize; 5];
        for c in &code {
            per[c.boost as usize] += 1;
        }
        assert_eq!(&per[1..], &[2, 3, 2, 3]);
    }

    #[test]
    fn empty_source() {
        assert!(build_query("", &ConfigFlags::FULL).is_empty());
        assert!(build_query("   \n", &ConfigFlags::FLAT).is_empty());
    }

    #[test]
    fn text_round_trip() {
        let q = build_query(LISTING1, &ConfigFlags::FULL);
        assert_eq!(q.to_text().parse::<Query>().unwrap(), q);
        assert!(q.to_text().lines().any(|l| l == "Title: apache^4"));
        let back: Query = serde_json::from_str(&q.to_json()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn parser_errors() {
        assert!(matches!("Nonsense: x^1".parse::<Query>(), Err(QueryError::Syntax { line: 1, .. })));
        assert!(matches!("Title apache".parse::<Query>(), Err(QueryError::Syntax { .. })));
        assert!(matches!("Title: apache^0".parse::<Query>(), Err(QueryError::BadBoost { .. })));
        assert!(matches!("\nTitle: ^2".parse::<Query>(), Err(QueryError::EmptyTerm(FieldId::Title))));
    }
}
