use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EvalError;

/// One human judgement of a returned post.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalLabel {
    pub query_id: String,
    pub post_id: u64,
    pub rank: u32,
    pub score: u8,
}

/// Scores keyed by `(query_id, post_id)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    scores: BTreeMap<(String, u64), u8>,
}

impl LabelSet {
    pub fn from_labels(labels: impl IntoIterator<Item = EvalLabel>) -> Result<Self, EvalError> {
        let mut scores = BTreeMap::new();
        for l in labels {
            validate(&l)?;
            let key = (l.query_id.clone(), l.post_id);
            if let Some(&prev) = scores.get(&key) {
                if prev != l.score {
                    return Err(EvalError::ConflictingLabel { query_id: l.query_id, post_id: l.post_id, a: prev, b: l.score });
                }
            }
            scores.insert(key, l.score);
        }
        Ok(LabelSet { scores })
    }

    pub fn score(&self, query_id: &str, post_id: u64) -> Option<u8> {
        self.scores.get(&(query_id.to_string(), post_id)).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

fn validate(l: &EvalLabel) -> Result<(), EvalError> {
    if l.score > 4 {
        return Err(EvalError::InvalidLabel(format!("{}/{}: score {} outside 0..=4", l.query_id, l.post_id, l.score)));
    }
    if l.rank == 0 {
        return Err(EvalError::InvalidLabel(format!("{}/{}: ranks start at 1", l.query_id, l.post_id)));
    }
    if l.query_id.is_empty() {
        return Err(EvalError::InvalidLabel(format!("post {}: empty query id", l.post_id)));
    }
    Ok(())
}

/// Read a `query_id,post_id,rank,score` CSV.
pub fn load_labels(path: impl AsRef<Path>) -> Result<Vec<EvalLabel>, EvalError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| EvalError::Csv { path: path.display().to_string(), source: e })?;
    let headers = reader.headers().map_err(|e| EvalError::Csv { path: path.display().to_string(), source: e })?;
    if headers != vec!["query_id", "post_id", "rank", "score"] {
        return Err(EvalError::InvalidLabel(format!(
            "{}: header must be query_id,post_id,rank,score",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for rec in reader.deserialize() {
        let label: EvalLabel = rec.map_err(|e| EvalError::Csv { path: path.display().to_string(), source: e })?;
        validate(&label)?;
        out.push(label);
    }
    Ok(out)
}

pub fn write_labels(path: impl AsRef<Path>, labels: &[EvalLabel]) -> Result<(), EvalError> {
    let path = path.as_ref();
    let csv_err = |e| EvalError::Csv { path: path.display().to_string(), source: e };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for l in labels {
        w.serialize(l).map_err(csv_err)?;
    }
    w.flush().map_err(|e| EvalError::Io { path: path.display().to_string(), source: e })?;
    Ok(())
}
