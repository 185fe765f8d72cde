//! Evaluation harness: label files, the configuration matrix, success rate,
//! precision and Wilcoxon rank-sum comparisons.
//!
//! A query that returns fewer than `n` posts fills its remaining slots with
//! score 0, the label reserved for "no result".

mod labels;
mod metrics;
mod run;
mod wilcoxon;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use labels::{load_labels, write_labels, EvalLabel, LabelSet};
pub use metrics::{precision_at_n, query_precisions, query_successes, success_rate, RELEVANT};
pub use run::{
    default_configurations, load_configurations, query_files, read_results, write_results, Configuration, QueryFile,
    ResultRecord, Runner, EMPTY_QUERY_WARNING,
};
pub use wilcoxon::{doubled_midranks, wilcoxon_rank_sum, EXACT_MAX_TOTAL};

use crate::index::{IndexError, FORMAT_VERSION};

pub const DEFAULT_CUTOFF: usize = 5;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("empty evaluation set")]
    EmptySet,
    #[error("a sample is empty")]
    EmptySample,
    #[error("samples contain NaN")]
    NotANumber,
    #[error("no label for {} returned pair(s): {}", .0.len(), format_pairs(.0))]
    MissingLabels(Vec<(String, u64)>),
    #[error("query {query_id} post {post_id} labelled both {a} and {b}")]
    ConflictingLabel { query_id: String, post_id: u64, a: u8, b: u8 },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("{path}:{line}: {source}")]
    Json { path: String, line: usize, source: serde_json::Error },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Index(#[from] IndexError),
}

fn format_pairs(pairs: &[(String, u64)]) -> String {
    pairs.iter().map(|(q, p)| format!("{q}/{p}")).collect::<Vec<_>>().join(", ")
}

/// Metrics of one system over a set of queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemMetrics {
    pub queries: usize,
    /// Number of `(query, slot)` judgements, `n * queries`.
    pub labels: usize,
    /// Judgement counts indexed by score 0..=4.
    pub histogram: [u64; 5],
    pub success_rate: f64,
    pub precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PValues {
    pub confidence: f64,
    pub precision: f64,
    pub success: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    pub metrics_a: SystemMetrics,
    pub metrics_b: SystemMetrics,
    pub p_values: PValues,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub configurations: BTreeMap<String, SystemMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparisons: Option<Vec<Comparison>>,
    pub run_config: serde_json::Value,
    pub index_format_version: u32,
}

impl EvalReport {
    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialise");
        serde_json::to_string_pretty(&value).expect("reports serialise")
    }

    /// `configuration<TAB>score<TAB>count` rows for plotting.
    pub fn histogram_tsv(&self) -> String {
        let mut out = String::from("configuration\tscore\tcount\n");
        for (id, m) in &self.configurations {
            for (score, count) in m.histogram.iter().enumerate() {
                out.push_str(&format!("{id}\t{score}\t{count}\n"));
            }
        }
        out
    }
}

fn query_ids(results: &[&[ResultRecord]]) -> BTreeSet<String> {
    results.iter().flat_map(|rs| rs.iter().map(|r| r.query_id().to_string())).collect()
}

/// Judged scores of each query's first `n` slots, queries in id order.
pub fn slot_scores(
    results: &[ResultRecord],
    labels: &LabelSet,
    queries: &BTreeSet<String>,
    n: usize,
) -> Result<Vec<Vec<u8>>, EvalError> {
    let mut slots: BTreeMap<&str, Vec<u8>> = queries.iter().map(|q| (q.as_str(), vec![0u8; n])).collect();
    let mut missing = Vec::new();
    for r in results {
        let ResultRecord::Hit { query_id, rank, post_id, .. } = r else { continue };
        let rank = *rank as usize;
        if rank == 0 || rank > n {
            continue;
        }
        match labels.score(query_id, *post_id) {
            Some(s) => {
                if let Some(row) = slots.get_mut(query_id.as_str()) {
                    row[rank - 1] = s;
                }
            }
            None => missing.push((query_id.clone(), *post_id)),
        }
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(EvalError::MissingLabels(missing));
    }
    Ok(slots.into_values().collect())
}

pub fn system_metrics(per_query: &[Vec<u8>], n: usize) -> Result<SystemMetrics, EvalError> {
    let mut histogram = [0u64; 5];
    for s in per_query.iter().flatten() {
        histogram[usize::from((*s).min(4))] += 1;
    }
    Ok(SystemMetrics {
        queries: per_query.len(),
        labels: per_query.iter().map(Vec::len).sum(),
        histogram,
        success_rate: success_rate(per_query, n)?,
        precision: precision_at_n(per_query, n)?,
    })
}

fn p_values(a: &[Vec<u8>], b: &[Vec<u8>], n: usize) -> Result<PValues, EvalError> {
    let flat = |x: &[Vec<u8>]| x.iter().flatten().map(|&s| f64::from(s)).collect::<Vec<_>>();
    Ok(PValues {
        confidence: wilcoxon_rank_sum(&flat(a), &flat(b))?,
        precision: wilcoxon_rank_sum(&query_precisions(a, n), &query_precisions(b, n))?,
        success: wilcoxon_rank_sum(&query_successes(a, n), &query_successes(b, n))?,
    })
}

/// Metrics of two systems over the union of their queries, plus the three
/// rank-sum p-values.
pub fn compare(
    (id_a, results_a): (&str, &[ResultRecord]),
    (id_b, results_b): (&str, &[ResultRecord]),
    labels: &LabelSet,
    n: usize,
) -> Result<Comparison, EvalError> {
    let queries = query_ids(&[results_a, results_b]);
    let a = slot_scores(results_a, labels, &queries, n);
    let b = slot_scores(results_b, labels, &queries, n);
    let (a, b) = match (a, b) {
        (Err(EvalError::MissingLabels(mut x)), Err(EvalError::MissingLabels(y))) => {
            x.extend(y);
            x.sort();
            x.dedup();
            return Err(EvalError::MissingLabels(x));
        }
        (a, b) => (a?, b?),
    };
    Ok(Comparison {
        a: id_a.to_string(),
        b: id_b.to_string(),
        metrics_a: system_metrics(&a, n)?,
        metrics_b: system_metrics(&b, n)?,
        p_values: p_values(&a, &b, n)?,
    })
}

/// Metrics for every run and a comparison for every pair `i < j`. With a
/// single run the report has no comparisons.
pub fn evaluate(
    runs: &[(String, Vec<ResultRecord>)],
    labels: &LabelSet,
    n: usize,
    run_config: serde_json::Value,
) -> Result<EvalReport, EvalError> {
    let all: Vec<&[ResultRecord]> = runs.iter().map(|(_, r)| r.as_slice()).collect();
    let queries = query_ids(&all);
    let mut missing = Vec::new();
    let mut scores = Vec::new();
    for (_, r) in runs {
        match slot_scores(r, labels, &queries, n) {
            Ok(s) => scores.push(s),
            Err(EvalError::MissingLabels(m)) => missing.extend(m),
            Err(e) => return Err(e),
        }
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(EvalError::MissingLabels(missing));
    }
    let mut configurations = BTreeMap::new();
    for ((id, _), s) in runs.iter().zip(&scores) {
        configurations.insert(id.clone(), system_metrics(s, n)?);
    }
    let comparisons = if runs.len() < 2 {
        None
    } else {
        let mut out = Vec::new();
        for i in 0..runs.len() {
            for j in i + 1..runs.len() {
                out.push(Comparison {
                    a: runs[i].0.clone(),
                    b: runs[j].0.clone(),
                    metrics_a: configurations[&runs[i].0].clone(),
                    metrics_b: configurations[&runs[j].0].clone(),
                    p_values: p_values(&scores[i], &scores[j], n)?,
                });
            }
        }
        Some(out)
    };
    Ok(EvalReport { configurations, comparisons, run_config, index_format_version: FORMAT_VERSION })
}

pub fn write_report(path: impl AsRef<Path>, report: &EvalReport) -> Result<(), EvalError> {
    let path = path.as_ref();
    std::fs::write(path, report.to_json() + "\n").map_err(|e| EvalError::Io { path: path.display().to_string(), source: e })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hit(q: &str, rank: u32, post: u64) -> ResultRecord {
        ResultRecord::Hit { query_id: q.into(), rank, post_id: post, score: 1.0, title: String::new() }
    }

    fn label(q: &str, post: u64, score: u8) -> EvalLabel {
        EvalLabel { query_id: q.into(), post_id: post, rank: 1, score }
    }

    #[test]
    fn short_result_lists_pad_with_zero() {
        let labels = LabelSet::from_labels([label("q1", 1, 4), label("q2", 2, 3)]).unwrap();
        let results = vec![hit("q1", 1, 1), ResultRecord::Empty { query_id: "q3".into(), warning: "w".into() }];
        let queries = query_ids(&[&results]);
        let s = slot_scores(&results, &labels, &queries, 5).unwrap();
        assert_eq!(s, vec![vec![4, 0, 0, 0, 0], vec![0; 5]]);
        let m = system_metrics(&s, 5).unwrap();
        assert_eq!(m.histogram, [9, 0, 0, 0, 1]);
        assert_eq!(m.histogram.iter().sum::<u64>() as usize, m.labels);
        assert_eq!(m.success_rate, 0.5);
        assert_eq!(m.precision, 0.1);
    }

    #[test]
    fn missing_labels_listed() {
        let labels = LabelSet::from_labels([label("q1", 1, 4)]).unwrap();
        let a = vec![hit("q1", 1, 1), hit("q1", 2, 8)];
        let b = vec![hit("q2", 1, 9)];
        let err = compare(("a", &a), ("b", &b), &labels, 5).unwrap_err();
        match &err {
            EvalError::MissingLabels(p) => assert_eq!(p, &[("q1".to_string(), 8), ("q2".to_string(), 9)]),
            other => panic!("{other}"),
        }
        assert!(err.to_string().contains("q1/8") && err.to_string().contains("q2/9"));
    }

    #[test]
    fn identical_systems() {
        let labels = LabelSet::from_labels([label("q1", 1, 4), label("q1", 2, 1), label("q2", 3, 2)]).unwrap();
        let r = vec![hit("q1", 1, 1), hit("q1", 2, 2), hit("q2", 1, 3)];
        let c = compare(("a", &r), ("b", &r), &labels, 5).unwrap();
        assert_eq!(c.p_values, PValues { confidence: 1.0, precision: 1.0, success: 1.0 });
        assert_eq!(c.metrics_a, c.metrics_b);
    }

    #[test]
    fn single_run_has_no_comparisons() {
        let labels = LabelSet::from_labels([label("q1", 1, 4)]).unwrap();
        let report = evaluate(&[("F".into(), vec![hit("q1", 1, 1)])], &labels, 5, serde_json::json!({})).unwrap();
        assert!(report.comparisons.is_none());
        assert!(!report.to_json().contains("comparisons"));
        assert!(report.histogram_tsv().starts_with("configuration\tscore\tcount\nF\t0\t4\n"));
    }
}
