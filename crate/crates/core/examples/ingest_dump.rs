//! Stream a Posts.xml dump, keep accepted java posts with code and print
//! the tallies.
//!
//! cargo run --example ingest_dump [-- path/to/Posts.xml]

use qarec::ingest::{ingest_file, GroupingStrategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/minidump.xml").to_string());
    let mut kept = Vec::new();
    let summary = ingest_file(&path, GroupingStrategy::TwoPass, |post| {
        kept.push(post);
        Ok(())
    })?;
    for post in &kept {
        println!("{:>6}  {} snippet(s)  {}", post.question_id, post.code_snippets.len(), post.title);
    }
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
