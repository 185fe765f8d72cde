mod common;

use common::{fixture, write_dump};
use qarec::ingest::{ingest_file, ingest_reader, load_posts, store_posts, CleanPost, GroupingStrategy};

fn ingest(path: &std::path::Path, strategy: GroupingStrategy) -> (qarec::ingest::IngestSummary, Vec<CleanPost>) {
    let mut posts = Vec::new();
    let summary = ingest_file(path, strategy, |p| {
        posts.push(p);
        Ok(())
    })
    .unwrap();
    (summary, posts)
}

#[test]
fn mini_dump_tallies() {
    let (s, posts) = ingest(&fixture("minidump.xml"), GroupingStrategy::TwoPass);
    assert_eq!(s.questions, 10);
    assert_eq!(s.kept, 4);
    assert_eq!((s.rejections.no_accept, s.rejections.no_code, s.rejections.no_java), (3, 2, 1));
    assert_eq!(s.skipped.total(), 2);
    assert_eq!(s.kept as usize, posts.len());
    assert_eq!(s.kept + s.rejections.total(), s.questions);
    for p in &posts {
        assert!(p.tags.iter().any(|t| t == "java"));
        assert!(!p.code_snippets.is_empty());
        assert!(!p.answer_texts.is_empty());
    }
}

#[test]
fn strategies_agree_and_order_is_stable() {
    let path = fixture("corpus.xml");
    let (a, pa) = ingest(&path, GroupingStrategy::TwoPass);
    let (b, pb) = ingest(&path, GroupingStrategy::InMemory);
    assert_eq!(a.kept, 30);
    assert_eq!(a.kept, b.kept);
    let ids = |ps: &[CleanPost]| {
        let mut v: Vec<u64> = ps.iter().map(|p| p.question_id).collect();
        v.sort();
        v
    };
    assert_eq!(ids(&pa), ids(&pb));
    let stream: Vec<CleanPost> = {
        let mut v = Vec::new();
        ingest_reader(std::fs::File::open(&path).unwrap(), |p| {
            v.push(p);
            Ok(())
        })
        .unwrap();
        v
    };
    assert_eq!(ids(&stream), ids(&pa));
}

#[test]
fn store_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for run in 0..2 {
        let (_, posts) = ingest(&fixture("corpus.xml"), GroupingStrategy::TwoPass);
        let out = dir.path().join(format!("posts{run}.jsonl"));
        assert_eq!(store_posts(&posts, &out).unwrap(), 30);
        files.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let back: Vec<CleanPost> = load_posts(dir.path().join("posts0.jsonl")).unwrap().map(Result::unwrap).collect();
    let (_, posts) = ingest(&fixture("corpus.xml"), GroupingStrategy::TwoPass);
    assert_eq!(back, posts);
}

#[test]
fn store_keys() {
    let (_, posts) = ingest(&fixture("minidump.xml"), GroupingStrategy::TwoPass);
    let line = serde_json::to_value(&posts[0]).unwrap();
    let mut keys: Vec<&str> = line.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["answers", "id", "question", "snippets", "tags", "title"]);
}

#[test]
fn generated_dump_keeps_every_group() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dump.xml");
    let rows = write_dump(&path, 2_000);
    let (s, posts) = ingest(&path, GroupingStrategy::TwoPass);
    assert_eq!(s.rows_read, rows);
    assert_eq!(s.kept, 2_000);
    assert_eq!(posts.iter().map(|p| p.answer_texts.len()).sum::<usize>() as u64, s.answers);
    // accepted answer comes first even when it precedes the question
    assert!(posts.iter().all(|p| p.code_snippets.iter().any(|c| c.source.contains("Collections.sort"))));
}

#[test]
fn truncated_dump_reports_offset() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.xml");
    std::fs::write(&path, "<posts>\n<row Id=\"1\" PostTypeId=\"1\" Title=\"t\" Body=\"b\"></posts>").unwrap();
    let err = ingest_file(&path, GroupingStrategy::InMemory, |_| Ok(())).unwrap_err();
    assert!(matches!(err, qarec::ingest::IngestError::Xml { .. }), "{err}");
}
