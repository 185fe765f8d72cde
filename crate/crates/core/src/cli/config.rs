use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::codeparse::DEFAULT_TABLE_TOP_N;
use crate::eval::{default_configurations, DEFAULT_CUTOFF};
use crate::index::{Analyzer, ScorerMode, ScoringParams};
use crate::ingest::GroupingStrategy;
use crate::query::{ConfigFlags, TokenizeOptions};

/// Everything a run depends on. Loaded from flat JSON, then overridden by
/// command-line flags. Unset technique flags fall back to the preset, or to
/// every technique on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub dump: Option<PathBuf>,
    pub posts: Option<PathBuf>,
    pub index_dir: Option<PathBuf>,
    pub table: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub queries: Option<PathBuf>,
    pub configurations: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub results_dir: Option<PathBuf>,
    pub grouping: GroupingStrategy,

    pub preset: Option<String>,
    pub wrapping: Option<bool>,
    pub import_mining: Option<bool>,
    pub entropy: Option<bool>,
    pub tokenizing: Option<bool>,
    pub scorer_mode: Option<ScorerMode>,

    pub k1: f64,
    pub b: f64,
    pub top_n: usize,
    pub table_top_n: usize,
    pub stemming: bool,
    pub stopwords: Option<Vec<String>>,
    pub tld_prefixes: Option<Vec<String>>,
    pub generic_segments: Option<Vec<String>>,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let p = ScoringParams::default();
        RunConfig {
            dump: None,
            posts: None,
            index_dir: None,
            table: None,
            labels: None,
            queries: None,
            configurations: None,
            report: None,
            results_dir: None,
            grouping: GroupingStrategy::default(),
            preset: None,
            wrapping: None,
            import_mining: None,
            entropy: None,
            tokenizing: None,
            scorer_mode: None,
            k1: p.k1,
            b: p.b,
            top_n: DEFAULT_CUTOFF,
            table_top_n: DEFAULT_TABLE_TOP_N,
            stemming: false,
            stopwords: None,
            tld_prefixes: None,
            generic_segments: None,
            seed: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.k1.is_finite() && self.k1 >= 0.0) {
            return Err(CliError::Validation(format!("k1 must be a non-negative number, got {}", self.k1)));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(CliError::Validation(format!("b must lie in [0, 1], got {}", self.b)));
        }
        if self.top_n == 0 {
            return Err(CliError::Validation("top_n must be at least 1".into()));
        }
        self.flags().map(|_| ())
    }

    /// Technique flags after applying the preset and explicit values.
    pub fn flags(&self) -> Result<ConfigFlags, CliError> {
        let base = match &self.preset {
            None => ConfigFlags::FULL,
            Some(id) => default_configurations()
                .into_iter()
                .find(|c| c.id.eq_ignore_ascii_case(id))
                .map(|c| c.flags)
                .ok_or_else(|| CliError::Validation(format!("unknown preset {id:?} (expected A to F)")))?,
        };
        Ok(ConfigFlags {
            wrapping: self.wrapping.unwrap_or(base.wrapping),
            import_mining: self.import_mining.unwrap_or(base.import_mining),
            entropy: self.entropy.unwrap_or(base.entropy),
            tokenizing: self.tokenizing.unwrap_or(base.tokenizing),
            scorer_mode: self.scorer_mode.unwrap_or(base.scorer_mode),
        })
    }

    pub fn scoring(&self, mode: ScorerMode) -> ScoringParams {
        ScoringParams { k1: self.k1, b: self.b, scorer_mode: mode }
    }

    pub fn analyzer(&self) -> Analyzer {
        let mut a = Analyzer { stemming: self.stemming, ..Analyzer::default() };
        if let Some(words) = &self.stopwords {
            a.stopwords = words.iter().map(|w| w.to_lowercase()).collect();
        }
        a
    }

    pub fn tokenize_options(&self) -> TokenizeOptions {
        let mut t = TokenizeOptions::default();
        if let Some(xs) = &self.tld_prefixes {
            t.tld_prefixes = xs.iter().cloned().collect();
        }
        if let Some(xs) = &self.generic_segments {
            t.generic_segments = xs.iter().cloned().collect();
        }
        t
    }

    /// The config as run, with resolved flags, for embedding in outputs.
    pub fn echo(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serialises");
        if let (Ok(flags), Some(obj)) = (self.flags(), v.as_object_mut()) {
            obj.insert("effective_flags".into(), serde_json::to_value(flags).expect("flags serialise"));
        }
        v
    }
}
