//! Write an index to disk, open it again and check both copies answer a
//! query the same way.

use qarec::codeparse::{load_canonical_table, DEFAULT_TABLE_TOP_N};
use qarec::index::{build_index, BuildOptions, Index};
use qarec::ingest::{ingest_file, GroupingStrategy};
use qarec::query::{build_query, ConfigFlags};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = env!("CARGO_MANIFEST_DIR");
    let mut posts = Vec::new();
    ingest_file(format!("{root}/fixtures/corpus.xml"), GroupingStrategy::TwoPass, |p| {
        posts.push(p);
        Ok(())
    })?;
    let table = load_canonical_table(format!("{root}/fixtures/canonical_table.tsv"), DEFAULT_TABLE_TOP_N)?;
    let index = build_index(posts, &table, BuildOptions { wrapping: true, import_mining: true })?;

    let dir = std::env::temp_dir().join(format!("qarec-example-{}", std::process::id()));
    index.persist(&dir)?;
    let reopened = Index::open(&dir)?;
    for entry in std::fs::read_dir(&dir)? {
        let entry = entry?;
        println!("{:>8} bytes  {}", entry.metadata()?.len(), entry.file_name().to_string_lossy());
    }

    let query = build_query("ObjectMapper mapper = new ObjectMapper(); mapper.readValue(json, User.class);", &ConfigFlags::FULL);
    let before = index.search(&query, 5);
    let after = reopened.search(&query, 5);
    for hit in &after {
        println!("{:.4} {} {}", hit.score, hit.doc_id, hit.title);
    }
    println!("identical after reopening: {}", before == after);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
