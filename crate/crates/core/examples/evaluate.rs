//! Run the six cumulative configurations over the bundled queries and
//! labels, then print metrics and the F-versus-A significance test.

use qarec::codeparse::{load_canonical_table, DEFAULT_TABLE_TOP_N};
use qarec::eval::{default_configurations, evaluate, load_labels, query_files, LabelSet, Runner, DEFAULT_CUTOFF};
use qarec::ingest::{ingest_file, GroupingStrategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = env!("CARGO_MANIFEST_DIR");
    let mut posts = Vec::new();
    ingest_file(format!("{root}/fixtures/corpus.xml"), GroupingStrategy::TwoPass, |p| {
        posts.push(p);
        Ok(())
    })?;
    let table = load_canonical_table(format!("{root}/fixtures/canonical_table.tsv"), DEFAULT_TABLE_TOP_N)?;
    let queries = query_files(format!("{root}/fixtures/eval/queries"))?;
    let labels = LabelSet::from_labels(load_labels(format!("{root}/fixtures/eval/labels.csv"))?)?;

    let runner = Runner::new(&posts, &table);
    let mut runs = Vec::new();
    for config in default_configurations() {
        let results = runner.run_configuration(&config, &queries, DEFAULT_CUTOFF)?;
        runs.push((config.id, results));
    }
    let report = evaluate(&runs, &labels, DEFAULT_CUTOFF, serde_json::Value::Null)?;
    println!("config  success  precision");
    for (id, m) in &report.configurations {
        println!("{id:<7} {:<8.2} {:.2}", m.success_rate, m.precision);
    }
    if let Some(cmp) = report.comparisons.iter().flatten().find(|c| c.a == "A" && c.b == "F") {
        println!("A vs F p-values: {:?}", cmp.p_values);
    }
    println!("{} index builds for {} configurations", runner.index_builds(), runs.len());
    Ok(())
}
