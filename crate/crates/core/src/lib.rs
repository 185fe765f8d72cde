//! Recommend Q&A posts that are relevant to a developer's in-progress Java code.
//!
//! The pipeline has three phases plus an evaluation harness:
//!
//! - [`ingest`] streams a StackExchange `Posts.xml` dump, groups questions with
//!   their answers and keeps only posts with an accepted answer, code and the
//!   `java` tag.
//! - [`codeparse`] pulls six code facets out of (possibly incomplete) snippets,
//!   wrapping fragments in a synthetic class and deducing missing imports.
//! - [`index`] builds a nine-field inverted index with BM25 scoring.
//! - [`query`] turns context code into a boosted, fielded disjunctive query.
//! - [`eval`] runs configuration matrices and computes success rate,
//!   precision and Wilcoxon rank-sum significance.
//!
//! The [`cli`] module holds the command implementations behind the `qarec`
//! binary.

pub mod cli;
pub mod codeparse;
pub mod eval;
pub mod index;
pub mod ingest;
pub mod query;

pub use codeparse::{parse_facets, CanonicalTable, CodeFacets, ParseMode, WrapOutcome};
pub use index::{FieldId, Index, ScorerMode, ScoringParams, SearchHit};
pub use ingest::{CleanPost, RawRow};
pub use query::{build_query, ConfigFlags, Query, QueryClause};
