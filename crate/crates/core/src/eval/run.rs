use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::codeparse::CanonicalTable;
use crate::index::{build_index_with, Analyzer, BuildOptions, Index, ScorerMode, ScoringParams};
use crate::ingest::CleanPost;
use crate::query::{build_query_with, ConfigFlags, TokenizeOptions};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Configuration {
    pub id: String,
    pub flags: ConfigFlags,
}

impl Configuration {
    pub fn build_options(&self) -> BuildOptions {
        BuildOptions { wrapping: self.flags.wrapping, import_mining: self.flags.import_mining }
    }
}

/// A through F, each adding one technique to the previous one.
pub fn default_configurations() -> Vec<Configuration> {
    let a = ConfigFlags::FLAT;
    let b = ConfigFlags { wrapping: true, ..a };
    let c = ConfigFlags { scorer_mode: ScorerMode::Standard, ..b };
    let d = ConfigFlags { import_mining: true, ..c };
    let e = ConfigFlags { tokenizing: true, ..d };
    let f = ConfigFlags { entropy: true, ..e };
    [("A", a), ("B", b), ("C", c), ("D", d), ("E", e), ("F", f)]
        .into_iter()
        .map(|(id, flags)| Configuration { id: id.into(), flags })
        .collect()
}

/// Read a JSON array of configurations.
pub fn load_configurations(path: impl AsRef<Path>) -> Result<Vec<Configuration>, EvalError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| EvalError::Io { path: path.display().to_string(), source: e })?;
    let configs: Vec<Configuration> =
        serde_json::from_str(&text).map_err(|e| EvalError::Json { path: path.display().to_string(), line: e.line(), source: e })?;
    let mut seen = std::collections::BTreeSet::new();
    for c in &configs {
        if !seen.insert(c.id.as_str()) {
            return Err(EvalError::InvalidConfig(format!("configuration {} listed twice", c.id)));
        }
    }
    Ok(configs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryFile {
    pub id: String,
    pub path: PathBuf,
}

/// Every regular file of `dir`, with its stem as query id, in id order.
pub fn query_files(dir: impl AsRef<Path>) -> Result<Vec<QueryFile>, EvalError> {
    let dir = dir.as_ref();
    let io = |e| EvalError::Io { path: dir.display().to_string(), source: e };
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.is_file() {
            let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            out.push(QueryFile { id, path });
        }
    }
    out.sort_by(|a, b| a.id.cmp(&b.id).then_with(|| a.path.cmp(&b.path)));
    Ok(out)
}

/// One line of a results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResultRecord {
    Hit { query_id: String, rank: u32, post_id: u64, score: f64, title: String },
    Empty { query_id: String, warning: String },
    Failed { query_id: String, error: String },
}

impl ResultRecord {
    pub fn query_id(&self) -> &str {
        match self {
            ResultRecord::Hit { query_id, .. }
            | ResultRecord::Empty { query_id, .. }
            | ResultRecord::Failed { query_id, .. } => query_id,
        }
    }
}

pub const EMPTY_QUERY_WARNING: &str = "empty query";

/// Runs configurations over one corpus, building each distinct index once.
pub struct Runner<'a> {
    posts: &'a [CleanPost],
    table: &'a CanonicalTable,
    analyzer: Analyzer,
    tokenize: TokenizeOptions,
    k1: f64,
    b: f64,
    cache: Mutex<HashMap<BuildOptions, Arc<Index>>>,
}

impl<'a> Runner<'a> {
    pub fn new(posts: &'a [CleanPost], table: &'a CanonicalTable) -> Self {
        let defaults = ScoringParams::default();
        Runner {
            posts,
            table,
            analyzer: Analyzer::default(),
            tokenize: TokenizeOptions::default(),
            k1: defaults.k1,
            b: defaults.b,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_analyzer(mut self, analyzer: Analyzer) -> Self {
        self.analyzer = analyzer;
        self
    }

    pub fn with_tokenize_options(mut self, opts: TokenizeOptions) -> Self {
        self.tokenize = opts;
        self
    }

    pub fn with_bm25(mut self, k1: f64, b: f64) -> Self {
        self.k1 = k1;
        self.b = b;
        self
    }

    /// Distinct indexes built so far.
    pub fn index_builds(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }

    pub fn index_for(&self, options: BuildOptions) -> Result<Arc<Index>, EvalError> {
        let mut cache = self.cache.lock().expect("cache lock");
        if let Some(idx) = cache.get(&options) {
            return Ok(Arc::clone(idx));
        }
        let params = ScoringParams { k1: self.k1, b: self.b, scorer_mode: ScorerMode::Standard };
        let idx = Arc::new(build_index_with(self.posts.iter().cloned(), self.table, options, &self.analyzer, params)?);
        cache.insert(options, Arc::clone(&idx));
        Ok(idx)
    }

    /// Search the top `n` posts for each query file.
    pub fn run_configuration(&self, config: &Configuration, queries: &[QueryFile], n: usize) -> Result<Vec<ResultRecord>, EvalError> {
        let index = self.index_for(config.build_options())?;
        let params = ScoringParams { k1: self.k1, b: self.b, scorer_mode: config.flags.scorer_mode };
        let per_query: Vec<Vec<ResultRecord>> = queries
            .par_iter()
            .map(|q| {
                let source = match std::fs::read_to_string(&q.path) {
                    Ok(s) => s,
                    Err(e) => {
                        return vec![ResultRecord::Failed { query_id: q.id.clone(), error: format!("{}: {e}", q.path.display()) }]
                    }
                };
                let query = build_query_with(&source, &config.flags, &self.tokenize);
                let hits = if query.is_empty() { Vec::new() } else { index.search_with(&query, n, &params) };
                if hits.is_empty() {
                    return vec![ResultRecord::Empty { query_id: q.id.clone(), warning: EMPTY_QUERY_WARNING.into() }];
                }
                hits.into_iter()
                    .enumerate()
                    .map(|(i, h)| ResultRecord::Hit {
                        query_id: q.id.clone(),
                        rank: i as u32 + 1,
                        post_id: h.doc_id,
                        score: h.score,
                        title: h.title,
                    })
                    .collect()
            })
            .collect();
        Ok(per_query.into_iter().flatten().collect())
    }
}

pub fn write_results(path: impl AsRef<Path>, records: &[ResultRecord]) -> Result<(), EvalError> {
    let path = path.as_ref();
    let io = |e| EvalError::Io { path: path.display().to_string(), source: e };
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    for r in records {
        writeln!(out, "{}", serde_json::to_string(r).expect("records serialise")).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRecord>, EvalError> {
    let path = path.as_ref();
    let io = |e| EvalError::Io { path: path.display().to_string(), source: e };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(File::open(path).map_err(io)?).lines().enumerate() {
        let line = line.map_err(io)?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| EvalError::Json { path: path.display().to_string(), line: i + 1, source: e })?,
        );
    }
    Ok(out)
}
