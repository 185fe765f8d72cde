//! On-disk layout: `manifest.json`, `docs.jsonl` and `postings.jsonl`.
//!
//! Every JSON object is written with sorted keys, docs in id order and
//! postings in field order then term order, so persisting the same index
//! twice gives byte-identical files.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Analyzer, BuildOptions, FieldId, Index, IndexError, Posting, ScoringParams, StoredDoc};

pub const FORMAT_VERSION: u32 = 1;

const MANIFEST: &str = "manifest.json";
const DOCS: &str = "docs.jsonl";
const POSTINGS: &str = "postings.jsonl";

#[derive(Debug, Serialize, Deserialize)]
struct FieldStats {
    avg_length: f64,
    terms: usize,
    total_length: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CorpusStats {
    doc_count: usize,
    fields: BTreeMap<String, FieldStats>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    analyzer: Analyzer,
    corpus: CorpusStats,
    fields: Vec<FieldId>,
    format_version: u32,
    options: BuildOptions,
    scoring: ScoringParams,
}

#[derive(Debug, Serialize, Deserialize)]
struct DocRecord {
    id: u64,
    lengths: [u32; 9],
    title: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct PostingsRecord {
    df: usize,
    field: FieldId,
    postings: Vec<(u64, u32)>,
    term: String,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IndexError + '_ {
    move |source| IndexError::Io { path: path.display().to_string(), source }
}

/// Serialise through `serde_json::Value`, whose map type keeps keys sorted.
fn canonical<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value).and_then(|v| serde_json::to_string(&v)).expect("index records serialise")
}

impl Index {
    pub fn persist(&self, dir: impl AsRef<Path>) -> Result<(), IndexError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;

        let fields = FieldId::ALL
            .iter()
            .map(|f| {
                let total = self.docs.iter().map(|d| u64::from(d.lengths[f.index()])).sum();
                let stats = FieldStats {
                    avg_length: self.avg_lengths[f.index()],
                    terms: self.postings[f.index()].len(),
                    total_length: total,
                };
                (f.as_str().to_string(), stats)
            })
            .collect();
        let manifest = Manifest {
            analyzer: self.analyzer.clone(),
            corpus: CorpusStats { doc_count: self.docs.len(), fields },
            fields: FieldId::ALL.to_vec(),
            format_version: FORMAT_VERSION,
            options: self.options,
            scoring: self.params,
        };
        let path = dir.join(MANIFEST);
        let value = serde_json::to_value(&manifest).expect("manifest serialises");
        let mut text = serde_json::to_string_pretty(&value).expect("manifest serialises");
        text.push('\n');
        std::fs::write(&path, text).map_err(io_err(&path))?;

        let path = dir.join(DOCS);
        let mut out = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
        for d in &self.docs {
            let rec = DocRecord { id: d.id, lengths: d.lengths, title: d.title.clone() };
            writeln!(out, "{}", canonical(&rec)).map_err(io_err(&path))?;
        }
        out.flush().map_err(io_err(&path))?;

        let path = dir.join(POSTINGS);
        let mut out = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
        for field in FieldId::ALL {
            for (term, list) in &self.postings[field.index()] {
                let rec = PostingsRecord {
                    df: list.len(),
                    field,
                    postings: list.iter().map(|p| (self.docs[p.doc as usize].id, p.tf)).collect(),
                    term: term.clone(),
                };
                writeln!(out, "{}", canonical(&rec)).map_err(io_err(&path))?;
            }
        }
        out.flush().map_err(io_err(&path))?;
        Ok(())
    }

    pub fn open(dir: impl AsRef<Path>) -> Result<Index, IndexError> {
        let dir = dir.as_ref();
        let path = dir.join(MANIFEST);
        if !path.is_file() {
            return Err(IndexError::MissingManifest(dir.display().to_string()));
        }
        let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
        // check the version before the rest of the schema
        let raw: serde_json::Value = serde_json::from_str(&text)
            .map_err(|source| IndexError::Json { path: path.display().to_string(), line: 1, source })?;
        let found = raw.get("format_version").and_then(serde_json::Value::as_u64).unwrap_or(0) as u32;
        if found != FORMAT_VERSION {
            return Err(IndexError::VersionMismatch { found, expected: FORMAT_VERSION });
        }
        let manifest: Manifest = serde_json::from_value(raw)
            .map_err(|source| IndexError::Json { path: path.display().to_string(), line: 1, source })?;
        if manifest.fields != FieldId::ALL {
            return Err(IndexError::Corrupt("field list differs from the nine known fields".into()));
        }

        let docs: Vec<DocRecord> = read_jsonl(&dir.join(DOCS))?;
        if docs.len() != manifest.corpus.doc_count {
            return Err(IndexError::Corrupt(format!(
                "manifest lists {} documents, docs file has {}",
                manifest.corpus.doc_count,
                docs.len()
            )));
        }
        if docs.windows(2).any(|w| w[0].id >= w[1].id) {
            return Err(IndexError::Corrupt("documents are not in ascending id order".into()));
        }
        let ordinal: HashMap<u64, u32> = docs.iter().enumerate().map(|(i, d)| (d.id, i as u32)).collect();

        let records: Vec<PostingsRecord> = read_jsonl(&dir.join(POSTINGS))?;
        let mut postings: [BTreeMap<String, Vec<Posting>>; 9] = Default::default();
        let mut sums = vec![[0u32; 9]; docs.len()];
        for rec in records {
            if rec.df != rec.postings.len() {
                return Err(IndexError::Corrupt(format!("df mismatch for {}:{}", rec.field, rec.term)));
            }
            let mut list = Vec::with_capacity(rec.postings.len());
            for (id, tf) in rec.postings {
                let &doc = ordinal
                    .get(&id)
                    .ok_or_else(|| IndexError::Corrupt(format!("posting references unknown doc {id}")))?;
                sums[doc as usize][rec.field.index()] += tf;
                list.push(Posting { doc, tf });
            }
            if list.windows(2).any(|w| w[0].doc >= w[1].doc) {
                return Err(IndexError::Corrupt(format!("postings for {}:{} not sorted", rec.field, rec.term)));
            }
            postings[rec.field.index()].insert(rec.term, list);
        }
        let stored: Vec<StoredDoc> = docs
            .into_iter()
            .zip(&sums)
            .map(|(d, sum)| {
                if &d.lengths != sum {
                    return Err(IndexError::Corrupt(format!("field lengths of doc {} disagree with postings", d.id)));
                }
                Ok(StoredDoc { id: d.id, title: d.title, lengths: d.lengths })
            })
            .collect::<Result<_, _>>()?;
        Ok(Index::assemble(manifest.scoring, manifest.analyzer, manifest.options, stored, postings))
    }
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, IndexError> {
    let file = File::open(path).map_err(|_| IndexError::MissingFile(path.display().to_string()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|source| IndexError::Json { path: path.display().to_string(), line: i + 1, source })?;
        out.push(rec);
    }
    Ok(out)
}
