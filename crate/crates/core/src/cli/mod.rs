//! The `ingest`, `index`, `query` and `eval` commands.
//!
//! Commands write machine-readable JSON to `out` and human diagnostics to
//! `err`, so they can be driven in-process as well as from the binary.

mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

pub use config::RunConfig;

use crate::codeparse::{load_canonical_table, CanonicalTable};
use crate::eval::{self, EvalError, LabelSet, Runner};
use crate::index::{build_index_with, BuildOptions, FieldId, Index, ScorerMode, FORMAT_VERSION};
use crate::ingest::{ingest_file, load_posts, CleanPost, GroupingStrategy, PostWriter};
use crate::query::build_query_with;

pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (index format 1)");

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or unparseable input. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// Inputs that were read but do not fit together. Exit code 3.
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::MissingLabels(_)
            | EvalError::ConflictingLabel { .. }
            | EvalError::InvalidLabel(_)
            | EvalError::InvalidConfig(_)
            | EvalError::EmptySet => CliError::Validation(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn write_out(out: &mut (dyn Write + Send), value: &serde_json::Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("json serialises");
    writeln!(out, "{text}").map_err(input)
}

fn note(err: &mut (dyn Write + Send), msg: impl std::fmt::Display) {
    // diagnostics are best effort
    let _ = writeln!(err, "{msg}");
}

#[derive(Debug, Parser)]
#[command(name = "qarec", version = VERSION, about = "Recommend Q&A posts for in-progress Java code")]
pub struct Cli {
    /// Flat JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Reserved; the pipeline uses no randomness.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream a Posts.xml dump into a post store.
    Ingest {
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// two_pass or in_memory.
        #[arg(long)]
        grouping: Option<GroupingStrategy>,
    },
    /// Build and persist an index from a post store.
    Index {
        #[arg(long)]
        posts: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Search an index with the query built from a code file.
    Query {
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long)]
        code: PathBuf,
        /// Print the query text and the top hit's clause contributions to stderr.
        #[arg(long)]
        explain: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Run configurations over query files and compare them against labels.
    Eval {
        #[arg(long)]
        posts: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        queries: Option<PathBuf>,
        #[arg(long)]
        labels: Option<PathBuf>,
        /// JSON array of {id, flags}; defaults to A to F.
        #[arg(long)]
        configurations: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also write the score histogram as TSV.
        #[arg(long)]
        histogram: Option<PathBuf>,
        #[arg(long)]
        results_dir: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct Tuning {
    /// Start from configuration A to F.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub wrapping: Option<bool>,
    #[arg(long)]
    pub import_mining: Option<bool>,
    #[arg(long)]
    pub entropy: Option<bool>,
    #[arg(long)]
    pub tokenizing: Option<bool>,
    /// standard or paper_eq2.
    #[arg(long)]
    pub scorer_mode: Option<ScorerMode>,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub top_n: Option<usize>,
    #[arg(long)]
    pub table_top_n: Option<usize>,
    #[arg(long)]
    pub stemming: Option<bool>,
}

impl Tuning {
    fn apply(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = &self.$f { cfg.$f = Some(v.clone()); } )* };
        }
        set!(preset, wrapping, import_mining, entropy, tokenizing, scorer_mode);
        if let Some(v) = self.k1 {
            cfg.k1 = v;
        }
        if let Some(v) = self.b {
            cfg.b = v;
        }
        if let Some(v) = self.top_n {
            cfg.top_n = v;
        }
        if let Some(v) = self.table_top_n {
            cfg.table_top_n = v;
        }
        if let Some(v) = self.stemming {
            cfg.stemming = v;
        }
    }
}

fn override_path(slot: &mut Option<PathBuf>, flag: &Option<PathBuf>) {
    if flag.is_some() {
        slot.clone_from(flag);
    }
}

fn required<'a>(p: &'a Option<PathBuf>, what: &str) -> Result<&'a Path, CliError> {
    p.as_deref().ok_or_else(|| CliError::Input(format!("no {what} given (flag or config key)")))
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{e}").map_err(input)?;
                return Ok(());
            }
            return Err(CliError::Input(e.to_string()));
        }
    };
    execute(cli, out, err)
}

pub fn execute(cli: Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.jobs {
            b = b.num_threads(n.max(1));
        }
        b.build().map_err(input)?
    };
    pool.install(|| match cli.command {
        Command::Ingest { dump, out: store, grouping } => {
            override_path(&mut cfg.dump, &dump);
            override_path(&mut cfg.posts, &store);
            if let Some(g) = grouping {
                cfg.grouping = g;
            }
            cmd_ingest(&cfg, out, err)
        }
        Command::Index { posts, table, out: dir, tuning } => {
            override_path(&mut cfg.posts, &posts);
            override_path(&mut cfg.table, &table);
            override_path(&mut cfg.index_dir, &dir);
            tuning.apply(&mut cfg);
            cmd_index(&cfg, out, err)
        }
        Command::Query { index, code, explain, tuning } => {
            override_path(&mut cfg.index_dir, &index);
            tuning.apply(&mut cfg);
            cmd_query(&cfg, &code, explain, out, err)
        }
        Command::Eval { posts, table, queries, labels, configurations, report, histogram, results_dir, tuning } => {
            override_path(&mut cfg.posts, &posts);
            override_path(&mut cfg.table, &table);
            override_path(&mut cfg.queries, &queries);
            override_path(&mut cfg.labels, &labels);
            override_path(&mut cfg.configurations, &configurations);
            override_path(&mut cfg.report, &report);
            override_path(&mut cfg.results_dir, &results_dir);
            tuning.apply(&mut cfg);
            cmd_eval(&cfg, histogram.as_deref(), out, err)
        }
    })
}

pub fn cmd_ingest(cfg: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), CliError> {
    let dump = required(&cfg.dump, "dump path")?;
    let store = required(&cfg.posts, "output post store")?;
    if !dump.is_file() {
        return Err(CliError::Input(format!("dump file not found: {}", dump.display())));
    }
    let mut writer = PostWriter::create(store).map_err(input)?;
    let summary = ingest_file(dump, cfg.grouping, |p| writer.write(&p)).map_err(input)?;
    writer.finish().map_err(input)?;
    note(err, format_args!("kept {} / {} questions", summary.kept, summary.questions));
    let r = summary.rejections;
    note(
        err,
        format_args!(
            "rows read {}, skipped {}, rejected no_accept={} no_code={} no_java={}",
            summary.rows_read,
            summary.skipped.total(),
            r.no_accept,
            r.no_code,
            r.no_java
        ),
    );
    write_out(out, &json!({ "store": store, "summary": summary }))
}

fn load_table(cfg: &RunConfig) -> Result<CanonicalTable, CliError> {
    match &cfg.table {
        Some(p) => load_canonical_table(p, cfg.table_top_n).map_err(input),
        None => Ok(CanonicalTable::from_entries(Vec::<(String, u64)>::new(), cfg.table_top_n)),
    }
}

fn read_posts(cfg: &RunConfig) -> Result<Vec<CleanPost>, CliError> {
    let path = required(&cfg.posts, "post store")?;
    load_posts(path).map_err(input)?.collect::<Result<Vec<_>, _>>().map_err(input)
}

pub fn cmd_index(cfg: &RunConfig, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), CliError> {
    cfg.validate()?;
    let dir = required(&cfg.index_dir, "index output directory")?.to_path_buf();
    let flags = cfg.flags()?;
    let posts = read_posts(cfg)?;
    let table = load_table(cfg)?;
    let options = BuildOptions { wrapping: flags.wrapping, import_mining: flags.import_mining };
    let index = build_index_with(posts, &table, options, &cfg.analyzer(), cfg.scoring(flags.scorer_mode))
        .map_err(|e| CliError::Validation(e.to_string()))?;
    index.persist(&dir).map_err(input)?;
    note(err, format_args!("indexed {} posts, {} terms into {}", index.doc_count(), index.term_count(), dir.display()));
    let fields: serde_json::Map<String, serde_json::Value> =
        FieldId::ALL.iter().map(|f| (f.as_str().to_string(), json!(index.field_term_count(*f)))).collect();
    write_out(
        out,
        &json!({
            "index_dir": dir,
            "docs": index.doc_count(),
            "terms": index.term_count(),
            "fields": fields,
            "format_version": FORMAT_VERSION,
        }),
    )
}

pub fn cmd_query(cfg: &RunConfig, code: &Path, explain: bool, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), CliError> {
    cfg.validate()?;
    let dir = required(&cfg.index_dir, "index directory")?;
    let index = Index::open(dir).map_err(input)?;
    let source =
        std::fs::read_to_string(code).map_err(|e| CliError::Input(format!("{}: {e}", code.display())))?;
    let flags = cfg.flags()?;
    let built = index.options();
    if built.wrapping != flags.wrapping || built.import_mining != flags.import_mining {
        note(
            err,
            format_args!(
                "warning: index was built with wrapping={} import_mining={}; index-side flags come from the index",
                built.wrapping, built.import_mining
            ),
        );
    }
    let query = build_query_with(&source, &flags, &cfg.tokenize_options());
    let params = cfg.scoring(flags.scorer_mode);
    let hits = index.search_with(&query, cfg.top_n, &params);
    if explain {
        note(err, "query:");
        let _ = write!(err, "{}", query.to_text());
        if let Some(top) = hits.first() {
            note(err, format_args!("contributions to post {}:", top.doc_id));
            for c in index.explain(&query, top.doc_id, &params).into_iter().filter(|c| c.score > 0.0) {
                note(err, format_args!("  {}: {}^{} tf={} score={:.6}", c.field.display_name(), c.term, c.boost, c.tf, c.score));
            }
        }
    }
    let ranked: Vec<_> = hits
        .iter()
        .enumerate()
        .map(|(i, h)| json!({ "rank": i + 1, "post_id": h.doc_id, "score": h.score, "title": h.title }))
        .collect();
    let mut payload = json!({ "query": query, "hits": ranked });
    if query.is_empty() {
        note(err, "warning: the code file yields no query clauses");
        payload["warning"] = json!(eval::EMPTY_QUERY_WARNING);
    }
    write_out(out, &payload)
}

pub fn cmd_eval(cfg: &RunConfig, histogram: Option<&Path>, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), CliError> {
    cfg.validate()?;
    let posts = read_posts(cfg)?;
    let table = load_table(cfg)?;
    let queries = eval::query_files(required(&cfg.queries, "queries directory")?)?;
    let labels = LabelSet::from_labels(eval::load_labels(required(&cfg.labels, "labels file")?)?)?;
    let configs = match &cfg.configurations {
        Some(p) => eval::load_configurations(p)?,
        None => eval::default_configurations(),
    };
    if configs.is_empty() {
        return Err(CliError::Validation("no configurations to run".into()));
    }
    let runner = Runner::new(&posts, &table)
        .with_analyzer(cfg.analyzer())
        .with_tokenize_options(cfg.tokenize_options())
        .with_bm25(cfg.k1, cfg.b);
    let mut runs = Vec::new();
    for c in &configs {
        let records = runner.run_configuration(c, &queries, cfg.top_n)?;
        if let Some(dir) = &cfg.results_dir {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
            eval::write_results(dir.join(format!("{}.jsonl", c.id)), &records)?;
        }
        runs.push((c.id.clone(), records));
    }
    note(err, format_args!("ran {} configurations over {} queries, {} index builds", configs.len(), queries.len(), runner.index_builds()));
    let report = eval::evaluate(&runs, &labels, cfg.top_n, cfg.echo())?;
    if let Some(p) = &cfg.report {
        eval::write_report(p, &report)?;
    }
    if let Some(p) = histogram {
        std::fs::write(p, report.histogram_tsv()).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    for (id, m) in &report.configurations {
        note(err, format_args!("{id}: success_rate={:.2} precision={:.2}", m.success_rate, m.precision));
    }
    let value = serde_json::to_value(&report).expect("reports serialise");
    write_out(out, &value)
}
