use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{CleanPost, IngestError};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IngestError + '_ {
    move |source| IngestError::Io { path: path.display().to_string(), source }
}

/// Write posts as JSON lines, one object per line in iteration order.
pub fn store_posts<'a>(posts: impl IntoIterator<Item = &'a CleanPost>, path: impl AsRef<Path>) -> Result<usize, IngestError> {
    let path = path.as_ref();
    let mut w = PostWriter::create(path)?;
    for p in posts {
        w.write(p)?;
    }
    w.finish()
}

/// Incremental form of [`store_posts`] for streaming ingestion.
pub struct PostWriter {
    out: BufWriter<File>,
    path: std::path::PathBuf,
    written: usize,
}

impl PostWriter {
    pub fn create(path: impl AsRef<Path>) -> Result<Self, IngestError> {
        let path = path.as_ref();
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        let file = File::create(path).map_err(io_err(path))?;
        Ok(PostWriter { out: BufWriter::new(file), path: path.to_path_buf(), written: 0 })
    }

    pub fn write(&mut self, post: &CleanPost) -> Result<(), IngestError> {
        let line = serde_json::to_string(post).expect("posts serialise");
        writeln!(self.out, "{line}").map_err(io_err(&self.path))?;
        self.written += 1;
        Ok(())
    }

    pub fn finish(mut self) -> Result<usize, IngestError> {
        self.out.flush().map_err(io_err(&self.path))?;
        Ok(self.written)
    }
}

/// Lazily read a post store. Blank lines are ignored.
pub fn load_posts(path: impl AsRef<Path>) -> Result<PostReader, IngestError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(io_err(path))?;
    Ok(PostReader { lines: BufReader::new(file).lines(), path: path.display().to_string(), line: 0 })
}

pub struct PostReader {
    lines: std::io::Lines<BufReader<File>>,
    path: String,
    line: usize,
}

impl Iterator for PostReader {
    type Item = Result<CleanPost, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let text = self.lines.next()?;
            self.line += 1;
            let text = match text {
                Ok(t) => t,
                Err(source) => return Some(Err(IngestError::Io { path: self.path.clone(), source })),
            };
            if text.trim().is_empty() {
                continue;
            }
            return Some(
                serde_json::from_str(&text)
                    .map_err(|source| IngestError::Json { path: self.path.clone(), line: self.line, source }),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{CodeSnippet, SnippetOrigin};

    fn post(id: u64) -> CleanPost {
        CleanPost {
            question_id: id,
            title: format!("t{id} \"quoted\" ünï"),
            question_text: "q".into(),
            answer_texts: vec!["a1".into(), "a2".into()],
            code_snippets: vec![CodeSnippet { origin: SnippetOrigin::Question, source: "int x;\n\ty();".into() }],
            tags: vec!["java".into()],
        }
    }

    #[test]
    fn round_trip_and_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("posts.jsonl");
        let posts = vec![post(1), post(2), post(3)];
        assert_eq!(store_posts(&posts, &path).unwrap(), 3);
        let back: Vec<_> = load_posts(&path).unwrap().collect::<Result<_, _>>().unwrap();
        assert_eq!(back, posts);
        let first = std::fs::read_to_string(&path).unwrap();
        let first = first.lines().next().unwrap();
        assert!(first.starts_with(r#"{"id":1,"title":"#), "{first}");
        assert!(first.contains(r#""snippets":[{"origin":"question","source":"#));
    }

    #[test]
    fn empty_store() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.jsonl");
        store_posts(&[], &path).unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 0);
        assert_eq!(load_posts(&path).unwrap().count(), 0);
    }

    #[test]
    fn corrupt_line_numbered() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        let good = serde_json::to_string(&post(1)).unwrap();
        std::fs::write(&path, format!("{good}\n\n{{\"id\": 2\n")).unwrap();
        let results: Vec<_> = load_posts(&path).unwrap().collect();
        assert!(results[0].is_ok());
        match &results[1] {
            Err(IngestError::Json { line, .. }) => assert_eq!(*line, 3),
            other => panic!("{other:?}"),
        }
    }
}
