use std::collections::BTreeSet;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

/// Default English stopwords. `how`, `what` and similar question words are
/// kept since they carry intent in post titles.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "am", "an", "and", "are", "as", "at", "be", "been", "being", "but", "by", "can", "could",
    "did", "do", "does", "for", "from", "had", "has", "have", "he", "her", "his", "i", "if", "in",
    "into", "is", "it", "its", "me", "my", "no", "not", "of", "on", "or", "our", "she", "so",
    "such", "that", "the", "their", "then", "there", "these", "they", "this", "to", "too", "very",
    "was", "we", "were", "will", "with", "you", "your",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Analyzer {
    pub stemming: bool,
    pub stopwords: BTreeSet<String>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer { stemming: false, stopwords: DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect() }
    }
}

impl Analyzer {
    /// Lowercase, split on non-alphanumerics, drop one-character tokens and
    /// stopwords, optionally stem.
    pub fn analyze(&self, text: &str) -> Vec<String> {
        let stemmer = self.stemming.then(|| Stemmer::create(Algorithm::English));
        text.split(|c: char| !c.is_alphanumeric())
            .filter(|t| t.chars().count() >= 2)
            .map(str::to_lowercase)
            .filter(|t| !self.stopwords.contains(t))
            .map(|t| match &stemmer {
                Some(s) => s.stem(&t).into_owned(),
                None => t,
            })
            .collect()
    }

    /// Normalise one query-side text term the way indexed tokens were.
    pub fn normalize_term(&self, term: &str) -> String {
        let lower = term.to_lowercase();
        if self.stemming {
            Stemmer::create(Algorithm::English).stem(&lower).into_owned()
        } else {
            lower
        }
    }
}

/// [`Analyzer::analyze`] with the default settings.
pub fn analyze_text(s: &str) -> Vec<String> {
    Analyzer::default().analyze(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn title_rules() {
        assert_eq!(analyze_text("Apache Camel: how to add routes?"), ["apache", "camel", "how", "add", "routes"]);
        assert!(analyze_text("").is_empty());
        assert_eq!(analyze_text("x = y + 2; JSON-parse"), ["json", "parse"]);
    }

    #[test]
    fn stemming_is_opt_in() {
        let a = Analyzer { stemming: true, ..Analyzer::default() };
        assert_eq!(a.analyze("adding routes"), ["ad", "rout"]);
        assert_eq!(a.normalize_term("Routes"), "rout");
        assert_eq!(Analyzer::default().normalize_term("Routes"), "routes");
    }

    #[test]
    fn stoplist_size() {
        assert!((50..=70).contains(&DEFAULT_STOPWORDS.len()));
    }
}
