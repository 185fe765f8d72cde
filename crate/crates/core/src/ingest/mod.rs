//! Dump ingestion: stream rows, group answers under questions, filter and
//! store normalised posts.

mod dump;
mod filter;
mod group;
pub mod html;
mod store;

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

pub use dump::{parse_dump, parse_tags, DumpReader, PostType, RawRow, SkipTally};
pub use filter::{
    classify, clean_and_filter, CleanPost, CodeSnippet, Rejection, RejectionTally, SnippetOrigin, REQUIRED_TAG,
};
pub use group::{count_answers, Grouper, GroupingStrategy};
pub use html::extract_segments;
pub use store::{load_posts, store_posts, PostReader, PostWriter};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    #[error("{path}:{line}: {source}")]
    Json { path: String, line: usize, source: serde_json::Error },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct IngestSummary {
    pub rows_read: u64,
    pub questions: u64,
    pub answers: u64,
    pub skipped: SkipTally,
    pub orphan_answers: u64,
    pub kept: u64,
    pub rejections: RejectionTally,
}

fn open(path: &Path) -> Result<BufReader<File>, IngestError> {
    let file = File::open(path).map_err(|source| IngestError::Io { path: path.display().to_string(), source })?;
    Ok(BufReader::with_capacity(64 * 1024, file))
}

fn drive<R: std::io::BufRead>(
    mut rows: DumpReader<R>,
    mut grouper: Grouper,
    sink: &mut dyn FnMut(CleanPost) -> Result<(), IngestError>,
) -> Result<IngestSummary, IngestError> {
    let mut summary = IngestSummary::default();
    let mut failure = None;
    let mut emit = |q: RawRow, answers: Vec<RawRow>| {
        if failure.is_some() {
            return;
        }
        if let Some(post) = clean_and_filter(&q, &answers, &mut summary.rejections) {
            summary.kept += 1;
            if let Err(e) = sink(post) {
                failure = Some(e);
            }
        }
    };
    let (mut questions, mut answers) = (0, 0);
    for row in rows.by_ref() {
        let row = row?;
        match row.post_type {
            PostType::Question => questions += 1,
            PostType::Answer => answers += 1,
        }
        grouper.push(row, &mut emit);
    }
    let orphans = grouper.finish(&mut emit);
    if let Some(e) = failure {
        return Err(e);
    }
    summary.rows_read = rows.rows_seen();
    summary.questions = questions;
    summary.answers = answers;
    summary.skipped = rows.skips();
    summary.orphan_answers = orphans;
    Ok(summary)
}

/// Ingest a dump file, handing each kept post to `sink`.
pub fn ingest_file(
    path: impl AsRef<Path>,
    strategy: GroupingStrategy,
    mut sink: impl FnMut(CleanPost) -> Result<(), IngestError>,
) -> Result<IngestSummary, IngestError> {
    let path = path.as_ref();
    let grouper = match strategy {
        GroupingStrategy::TwoPass => Grouper::with_counts(count_answers(parse_dump(open(path)?))?),
        GroupingStrategy::InMemory => Grouper::in_memory(),
    };
    drive(parse_dump(open(path)?), grouper, &mut sink)
}

/// Ingest from a one-shot stream using the in-memory grouping.
pub fn ingest_reader(
    input: impl Read,
    mut sink: impl FnMut(CleanPost) -> Result<(), IngestError>,
) -> Result<IngestSummary, IngestError> {
    drive(parse_dump(BufReader::new(input)), Grouper::in_memory(), &mut sink)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DUMP: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<posts>
  <row Id="3" PostTypeId="2" ParentId="1" Body="&lt;code&gt;x();&lt;/code&gt;" />
  <row Id="1" PostTypeId="1" AcceptedAnswerId="3" Title="A" Body="&lt;p&gt;q&lt;/p&gt;" Tags="&lt;java&gt;" />
  <row Id="2" PostTypeId="1" Title="B" Body="&lt;code&gt;y();&lt;/code&gt;" Tags="&lt;java&gt;" />
  <row Id="4" PostTypeId="2" ParentId="2" Body="b" />
</posts>"#;

    #[test]
    fn file_and_stream_agree() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("Posts.xml");
        std::fs::write(&path, DUMP).unwrap();
        let mut a = Vec::new();
        let s1 = ingest_file(&path, GroupingStrategy::TwoPass, |p| {
            a.push(p);
            Ok(())
        }).unwrap();
        let mut b = Vec::new();
        let s2 = ingest_reader(DUMP.as_bytes(), |p| {
            b.push(p);
            Ok(())
        }).unwrap();
        assert_eq!(a, b);
        assert_eq!(s1, s2);
        assert_eq!(s1.kept, 1);
        assert_eq!(s1.rows_read, 4);
        assert_eq!(s1.rejections, RejectionTally { no_accept: 1, ..Default::default() });
    }

    #[test]
    fn missing_file_names_path() {
        let err = ingest_file("/nonexistent/Posts.xml", GroupingStrategy::TwoPass, |_| Ok(())).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/Posts.xml"));
    }
}
