//! End to end: ingest the bundled corpus, index it and search with the code
//! a developer is writing.
//!
//! cargo run --example search_posts [-- Context.java]

use qarec::codeparse::{load_canonical_table, DEFAULT_TABLE_TOP_N};
use qarec::eval::default_configurations;
use qarec::index::build_index;
use qarec::ingest::{ingest_file, GroupingStrategy};
use qarec::build_query;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = env!("CARGO_MANIFEST_DIR");
    let context = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => std::fs::read_to_string(format!("{root}/fixtures/listings/listing1.java"))?,
    };
    let mut posts = Vec::new();
    ingest_file(format!("{root}/fixtures/corpus.xml"), GroupingStrategy::TwoPass, |p| {
        posts.push(p);
        Ok(())
    })?;
    let table = load_canonical_table(format!("{root}/fixtures/canonical_table.tsv"), DEFAULT_TABLE_TOP_N)?;

    for config in default_configurations().into_iter().filter(|c| c.id == "A" || c.id == "F") {
        let mut index = build_index(posts.iter().cloned(), &table, config.build_options())?;
        index.set_params(qarec::ScoringParams { scorer_mode: config.flags.scorer_mode, ..index.params() });
        let query = build_query(&context, &config.flags);
        println!("== configuration {}", config.id);
        for (rank, hit) in index.search(&query, 5).iter().enumerate() {
            println!("{}. [{:.4}] {} {}", rank + 1, hit.score, hit.doc_id, hit.title);
        }
    }
    Ok(())
}
