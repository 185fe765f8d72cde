//! Nine-field inverted index over cleaned posts with per-field BM25.

mod analyze;
mod bm25;
mod field;
mod persist;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use analyze::{analyze_text, Analyzer, DEFAULT_STOPWORDS};
pub use bm25::{bm25_weight, idf, ScorerMode, ScoringParams};
pub use field::{FieldId, UnknownField};
pub use persist::FORMAT_VERSION;

use crate::codeparse::{self, deduce_imports, CanonicalTable, CodeFacets};
use crate::ingest::CleanPost;
use crate::query::Query;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("duplicate document id {0}")]
    DuplicateDoc(u64),
    #[error("missing manifest in {0}")]
    MissingManifest(String),
    #[error("missing index file {0}")]
    MissingFile(String),
    #[error("index format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt index: {0}")]
    Corrupt(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}: {source}")]
    Json { path: String, line: usize, source: serde_json::Error },
}

/// Index-side technique switches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildOptions {
    pub wrapping: bool,
    pub import_mining: bool,
}

/// Per-field term lists of one document. Text fields hold analysed token
/// sequences (repeats count), code fields hold facet term sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldedDocument {
    pub doc_id: u64,
    pub title: String,
    pub fields: [Vec<String>; 9],
}

impl FieldedDocument {
    pub fn new(doc_id: u64, title: impl Into<String>) -> Self {
        FieldedDocument { doc_id, title: title.into(), fields: Default::default() }
    }

    pub fn field(&self, field: FieldId) -> &[String] {
        &self.fields[field.index()]
    }

    pub fn field_mut(&mut self, field: FieldId) -> &mut Vec<String> {
        &mut self.fields[field.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    /// Ordinal into the doc store (ascending doc id order).
    pub doc: u32,
    pub tf: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoredDoc {
    pub id: u64,
    pub title: String,
    pub lengths: [u32; 9],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub doc_id: u64,
    pub score: f64,
    pub title: String,
}

/// Score contribution of one clause to one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseContribution {
    pub field: FieldId,
    pub term: String,
    pub boost: f64,
    pub tf: u32,
    pub score: f64,
}

#[derive(Debug, Clone)]
pub struct Index {
    pub(crate) params: ScoringParams,
    pub(crate) analyzer: Analyzer,
    pub(crate) options: BuildOptions,
    pub(crate) docs: Vec<StoredDoc>,
    pub(crate) postings: [BTreeMap<String, Vec<Posting>>; 9],
    pub(crate) avg_lengths: [f64; 9],
}

/// Turn one post into its fielded document.
///
/// Code facets are the union over the question's and accepted answer's
/// snippets. When `import_mining` is on, snippets without imports get
/// imports deduced from the title and question text.
pub fn document_for_post(
    post: &CleanPost,
    table: &CanonicalTable,
    options: BuildOptions,
    analyzer: &Analyzer,
) -> FieldedDocument {
    let mut doc = FieldedDocument::new(post.question_id, &post.title);
    *doc.field_mut(FieldId::Title) = analyzer.analyze(&post.title);
    *doc.field_mut(FieldId::Question) = analyzer.analyze(&post.question_text);
    *doc.field_mut(FieldId::Answer) = analyzer.analyze(&post.answer_texts.join(" "));
    let context = format!("{} {}", post.title, post.question_text);
    let mut facets = CodeFacets::default();
    for snippet in &post.code_snippets {
        let (mut f, _) = codeparse::parse_facets_with(&snippet.source, options.wrapping);
        if options.import_mining && f.imports.is_empty() && !f.is_empty() {
            f.imports.extend(deduce_imports(&f, table, &context).imports);
        }
        facets.merge(f);
    }
    for (kind, term) in facets.iter() {
        doc.field_mut(kind.into()).push(term.to_string());
    }
    doc
}

/// Index `posts` with the given technique switches.
pub fn build_index(
    posts: impl IntoIterator<Item = CleanPost>,
    table: &CanonicalTable,
    options: BuildOptions,
) -> Result<Index, IndexError> {
    build_index_with(posts, table, options, &Analyzer::default(), ScoringParams::default())
}

pub fn build_index_with(
    posts: impl IntoIterator<Item = CleanPost>,
    table: &CanonicalTable,
    options: BuildOptions,
    analyzer: &Analyzer,
    params: ScoringParams,
) -> Result<Index, IndexError> {
    let posts: Vec<CleanPost> = posts.into_iter().collect();
    let docs: Vec<FieldedDocument> =
        posts.par_iter().map(|p| document_for_post(p, table, options, analyzer)).collect();
    let mut index = Index::from_documents(docs, params, analyzer.clone())?;
    index.options = options;
    Ok(index)
}

impl Index {
    /// Build directly from fielded documents.
    pub fn from_documents(
        mut docs: Vec<FieldedDocument>,
        params: ScoringParams,
        analyzer: Analyzer,
    ) -> Result<Index, IndexError> {
        docs.sort_by_key(|d| d.doc_id);
        if let Some(w) = docs.windows(2).find(|w| w[0].doc_id == w[1].doc_id) {
            return Err(IndexError::DuplicateDoc(w[0].doc_id));
        }
        let mut postings: [BTreeMap<String, Vec<Posting>>; 9] = Default::default();
        let mut stored = Vec::with_capacity(docs.len());
        for (ord, doc) in docs.into_iter().enumerate() {
            let mut lengths = [0u32; 9];
            for field in FieldId::ALL {
                let terms = doc.field(field);
                lengths[field.index()] = terms.len() as u32;
                let mut tfs: BTreeMap<&str, u32> = BTreeMap::new();
                for t in terms {
                    *tfs.entry(t).or_default() += 1;
                }
                for (term, tf) in tfs {
                    postings[field.index()]
                        .entry(term.to_string())
                        .or_default()
                        .push(Posting { doc: ord as u32, tf });
                }
            }
            stored.push(StoredDoc { id: doc.doc_id, title: doc.title, lengths });
        }
        Ok(Index::assemble(params, analyzer, BuildOptions::default(), stored, postings))
    }

    pub(crate) fn assemble(
        params: ScoringParams,
        analyzer: Analyzer,
        options: BuildOptions,
        docs: Vec<StoredDoc>,
        postings: [BTreeMap<String, Vec<Posting>>; 9],
    ) -> Index {
        let mut avg_lengths = [0f64; 9];
        if !docs.is_empty() {
            for field in FieldId::ALL {
                let total: u64 = docs.iter().map(|d| u64::from(d.lengths[field.index()])).sum();
                avg_lengths[field.index()] = total as f64 / docs.len() as f64;
            }
        }
        Index { params, analyzer, options, docs, postings, avg_lengths }
    }

    pub fn params(&self) -> ScoringParams {
        self.params
    }

    pub fn set_params(&mut self, params: ScoringParams) {
        self.params = params;
    }

    pub fn analyzer(&self) -> &Analyzer {
        &self.analyzer
    }

    pub fn options(&self) -> BuildOptions {
        self.options
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    pub fn docs(&self) -> &[StoredDoc] {
        &self.docs
    }

    /// Distinct terms across all fields.
    pub fn term_count(&self) -> usize {
        self.postings.iter().map(BTreeMap::len).sum()
    }

    pub fn field_term_count(&self, field: FieldId) -> usize {
        self.postings[field.index()].len()
    }

    pub fn avg_length(&self, field: FieldId) -> f64 {
        self.avg_lengths[field.index()]
    }

    pub fn doc_frequency(&self, field: FieldId, term: &str) -> usize {
        self.postings(field, term).len()
    }

    /// Postings for `(field, term)`, ascending by doc id.
    pub fn postings(&self, field: FieldId, term: &str) -> &[Posting] {
        self.postings[field.index()].get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Doc ids whose `field` contains `term`.
    pub fn docs_with(&self, field: FieldId, term: &str) -> Vec<u64> {
        self.postings(field, term).iter().map(|p| self.docs[p.doc as usize].id).collect()
    }

    fn ordinal(&self, doc_id: u64) -> Option<usize> {
        self.docs.binary_search_by_key(&doc_id, |d| d.id).ok()
    }

    /// Stored length of `field` in `doc_id`.
    pub fn field_length(&self, doc_id: u64, field: FieldId) -> Option<u32> {
        self.ordinal(doc_id).map(|o| self.docs[o].lengths[field.index()])
    }

    pub fn term_frequency(&self, field: FieldId, term: &str, doc_id: u64) -> u32 {
        let Some(ord) = self.ordinal(doc_id) else { return 0 };
        let list = self.postings(field, term);
        list.binary_search_by_key(&(ord as u32), |p| p.doc).map(|i| list[i].tf).unwrap_or(0)
    }

    /// The key under which a query term is looked up in `field`.
    pub fn lookup_term(&self, field: FieldId, term: &str) -> String {
        if field.is_text() {
            self.analyzer.normalize_term(term)
        } else {
            term.to_string()
        }
    }

    /// Weight of `term` in `field` of `doc_id` under the index parameters.
    pub fn bm25(&self, term: &str, field: FieldId, doc_id: u64) -> f64 {
        self.bm25_with(term, field, doc_id, &self.params)
    }

    pub fn bm25_with(&self, term: &str, field: FieldId, doc_id: u64, params: &ScoringParams) -> f64 {
        let Some(ord) = self.ordinal(doc_id) else { return 0.0 };
        let key = self.lookup_term(field, term);
        let list = self.postings(field, &key);
        let tf = list.binary_search_by_key(&(ord as u32), |p| p.doc).map(|i| list[i].tf).unwrap_or(0);
        bm25_weight(
            tf,
            self.docs[ord].lengths[field.index()],
            self.avg_lengths[field.index()],
            list.len(),
            self.docs.len(),
            params,
        )
    }

    /// Top `top_n` documents by summed boosted clause weights.
    pub fn search(&self, query: &Query, top_n: usize) -> Vec<SearchHit> {
        self.search_with(query, top_n, &self.params)
    }

    pub fn search_with(&self, query: &Query, top_n: usize, params: &ScoringParams) -> Vec<SearchHit> {
        if query.clauses.is_empty() || top_n == 0 {
            return Vec::new();
        }
        let n = self.docs.len();
        let mut scores = vec![0f64; n];
        for clause in &query.clauses {
            let key = self.lookup_term(clause.field, &clause.term);
            let list = self.postings(clause.field, &key);
            let fi = clause.field.index();
            for p in list {
                let len = self.docs[p.doc as usize].lengths[fi];
                scores[p.doc as usize] +=
                    clause.boost * bm25_weight(p.tf, len, self.avg_lengths[fi], list.len(), n, params);
            }
        }
        let mut hits: Vec<(usize, f64)> = scores.into_iter().enumerate().filter(|(_, s)| *s > 0.0).collect();
        hits.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        hits.truncate(top_n);
        hits.into_iter()
            .map(|(ord, score)| SearchHit { doc_id: self.docs[ord].id, score, title: self.docs[ord].title.clone() })
            .collect()
    }

    /// Per-clause contributions to the score of `doc_id`, in clause order.
    pub fn explain(&self, query: &Query, doc_id: u64, params: &ScoringParams) -> Vec<ClauseContribution> {
        query
            .clauses
            .iter()
            .map(|c| {
                let key = self.lookup_term(c.field, &c.term);
                ClauseContribution {
                    field: c.field,
                    term: c.term.clone(),
                    boost: c.boost,
                    tf: self.term_frequency(c.field, &key, doc_id),
                    score: c.boost * self.bm25_with(&c.term, c.field, doc_id, params),
                }
            })
            .collect()
    }
}
