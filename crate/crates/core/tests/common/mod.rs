#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qarec::codeparse::{load_canonical_table, CanonicalTable, DEFAULT_TABLE_TOP_N};
use qarec::ingest::{ingest_file, CleanPost, GroupingStrategy};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap()
}

pub fn corpus_posts() -> Vec<CleanPost> {
    let mut posts = Vec::new();
    ingest_file(fixture("corpus.xml"), GroupingStrategy::TwoPass, |p| {
        posts.push(p);
        Ok(())
    })
    .unwrap();
    posts
}

pub fn table() -> CanonicalTable {
    load_canonical_table(fixture("canonical_table.tsv"), DEFAULT_TABLE_TOP_N).unwrap()
}

pub fn qarec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qarec")).args(args).output().unwrap()
}

pub fn qarec_ok(args: &[&str]) -> Output {
    let out = qarec(args);
    assert!(out.status.success(), "qarec {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// File name to contents for every file of `dir`.
pub fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

/// A synthetic dump: groups of one question and two or three answers, with
/// every fifth group listing an answer before its question.
pub fn write_dump(path: &Path, questions: usize) -> u64 {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).unwrap());
    writeln!(out, "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<posts>").unwrap();
    let mut rows = 0u64;
    for g in 0..questions as u64 {
        let q = g * 10 + 1;
        let answers = 2 + g % 2;
        let accepted = q + 1;
        let question = format!(
            "  <row Id=\"{q}\" PostTypeId=\"1\" AcceptedAnswerId=\"{accepted}\" Title=\"Question {g} about lists\" \
             Body=\"&lt;p&gt;How do I sort list {g}?&lt;/p&gt;&lt;pre&gt;&lt;code&gt;List&amp;lt;String&amp;gt; xs = load({g});&lt;/code&gt;&lt;/pre&gt;\" \
             Tags=\"&lt;java&gt;&lt;list&gt;\" Score=\"3\" />"
        );
        let answer = |a: u64| {
            format!(
                "  <row Id=\"{}\" PostTypeId=\"2\" ParentId=\"{q}\" Body=\"&lt;p&gt;Use sort.&lt;/p&gt;&lt;code&gt;Collections.sort(xs);&lt;/code&gt;\" Score=\"1\" />",
                q + a
            )
        };
        if g % 5 == 0 {
            writeln!(out, "{}", answer(1)).unwrap();
            writeln!(out, "{question}").unwrap();
            for a in 2..=answers {
                writeln!(out, "{}", answer(a)).unwrap();
            }
        } else {
            writeln!(out, "{question}").unwrap();
            for a in 1..=answers {
                writeln!(out, "{}", answer(a)).unwrap();
            }
        }
        rows += 1 + answers;
    }
    writeln!(out, "</posts>").unwrap();
    out.flush().unwrap();
    rows
}

pub mod oracle {
    use qarec::index::{FieldedDocument, ScoringParams};
    use qarec::query::{Query, QueryClause};
    use qarec::{FieldId, ScorerMode};
    use rand::seq::SliceRandom;
    use rand::Rng;

    const VOCAB: &[&str] = &["alpha", "beta", "gamma", "delta", "route", "context", "parser", "list", "map", "json", "sql", "swing"];

    pub fn random_docs(rng: &mut impl Rng, max_docs: usize) -> Vec<FieldedDocument> {
        let n = rng.gen_range(1..=max_docs);
        let mut ids: Vec<u64> = (1..=(n as u64 * 3)).collect();
        ids.shuffle(rng);
        ids[..n]
            .iter()
            .map(|&id| {
                let mut d = FieldedDocument::new(id, format!("doc {id}"));
                for field in FieldId::ALL {
                    // some fields stay empty corpus-wide now and then
                    if rng.gen_bool(0.15) {
                        continue;
                    }
                    let len = rng.gen_range(0..8);
                    *d.field_mut(field) = (0..len).map(|_| VOCAB.choose(rng).unwrap().to_string()).collect();
                }
                d
            })
            .collect()
    }

    pub fn random_query(rng: &mut impl Rng) -> Query {
        let n = rng.gen_range(1..=10);
        Query::from_clauses((0..n).map(|_| {
            let field = *FieldId::ALL.choose(rng).unwrap();
            let boost = [1.0, 1.4, 2.0, 3.0, 4.0, rng.gen_range(0.1..5.0)].choose(rng).copied().unwrap();
            QueryClause::new(field, *VOCAB.choose(rng).unwrap(), boost).unwrap()
        }))
    }

    /// Score every document against every clause from first principles.
    pub fn brute_force(docs: &[FieldedDocument], query: &Query, p: &ScoringParams) -> Vec<(u64, f64)> {
        let n = docs.len() as f64;
        let mut scored: Vec<(u64, f64)> = docs
            .iter()
            .map(|d| {
                let mut total = 0.0;
                for c in &query.clauses {
                    let lens: Vec<f64> = docs.iter().map(|x| x.field(c.field).len() as f64).collect();
                    let avg = lens.iter().sum::<f64>() / n;
                    let df = docs.iter().filter(|x| x.field(c.field).contains(&c.term)).count() as f64;
                    let f = d.field(c.field).iter().filter(|t| **t == c.term).count() as f64;
                    let l = d.field(c.field).len() as f64;
                    if f == 0.0 || avg == 0.0 {
                        continue;
                    }
                    let k = p.k1 * ((1.0 - p.b) + p.b * l / avg);
                    let w = match p.scorer_mode {
                        ScorerMode::Standard => {
                            let idf = (1.0 + (n - df + 0.5) / (df + 0.5)).ln();
                            idf * f * (p.k1 + 1.0) / (f + k)
                        }
                        ScorerMode::PaperEq2 => f / (k + f),
                    };
                    total += c.boost * w;
                }
                (d.doc_id, total)
            })
            .filter(|(_, s)| *s > 0.0)
            .collect();
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        scored
    }
}
