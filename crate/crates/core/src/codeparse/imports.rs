//! Frequency-ranked canonical class names and import deduction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use thiserror::Error;

use super::facets::CodeFacets;
use super::levenshtein::levenshtein;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read canonical table {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: negative frequency {value}")]
    NegativeFrequency { line: usize, value: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableEntry {
    pub canonical_name: String,
    pub frequency: u64,
}

/// Canonical names ordered by frequency (descending, then name), capped at
/// `top_n`, with a lookup from simple class name to entries.
#[derive(Debug, Clone, Default)]
pub struct CanonicalTable {
    entries: Vec<TableEntry>,
    top_n: usize,
    by_simple: HashMap<String, Vec<usize>>,
}

pub(crate) fn is_canonical_name(name: &str) -> bool {
    let mut segments = 0;
    for seg in name.split('.') {
        let mut chars = seg.chars();
        match chars.next() {
            Some(c) if c.is_alphabetic() || c == '_' || c == '$' => {}
            _ => return false,
        }
        if !chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$') {
            return false;
        }
        segments += 1;
    }
    segments >= 2
}

fn simple_name(canonical: &str) -> &str {
    canonical.rsplit('.').next().unwrap_or(canonical)
}

impl CanonicalTable {
    /// Build from `(name, frequency)` pairs. Repeated names add up.
    pub fn from_entries<S: AsRef<str>>(entries: impl IntoIterator<Item = (S, u64)>, top_n: usize) -> Self {
        let mut totals: BTreeMap<String, u64> = BTreeMap::new();
        for (name, freq) in entries {
            *totals.entry(name.as_ref().to_string()).or_default() += freq;
        }
        let mut entries: Vec<TableEntry> = totals
            .into_iter()
            .map(|(canonical_name, frequency)| TableEntry { canonical_name, frequency })
            .collect();
        entries.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.canonical_name.cmp(&b.canonical_name)));
        entries.truncate(top_n);
        let mut by_simple: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            by_simple.entry(simple_name(&e.canonical_name).to_string()).or_default().push(i);
        }
        CanonicalTable { entries, top_n, by_simple }
    }

    /// Parse `name<TAB>frequency` lines; `#` comments and blank lines are skipped.
    pub fn parse(text: &str, top_n: usize) -> Result<Self, TableError> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let malformed = |message: String| TableError::Malformed { line, message };
            let (name, freq) = raw
                .split_once('\t')
                .ok_or_else(|| malformed("expected `name<TAB>frequency`".into()))?;
            let name = name.trim();
            if !is_canonical_name(name) {
                return Err(malformed(format!("not a canonical class name: {name:?}")));
            }
            let value: i64 = freq
                .trim()
                .parse()
                .map_err(|_| malformed(format!("bad frequency {:?}", freq.trim())))?;
            if value < 0 {
                return Err(TableError::NegativeFrequency { line, value });
            }
            rows.push((name.to_string(), value as u64));
        }
        Ok(Self::from_entries(rows, top_n))
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn top_n(&self) -> usize {
        self.top_n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, canonical: &str) -> bool {
        self.candidates(simple_name(canonical)).any(|c| c == canonical)
    }

    /// Entries whose last dotted segment equals `simple`, in table order.
    pub fn candidates<'s>(&'s self, simple: &str) -> impl Iterator<Item = &'s str> + 's {
        self.by_simple
            .get(simple)
            .into_iter()
            .flatten()
            .map(|&i| self.entries[i].canonical_name.as_str())
    }
}

pub fn load_canonical_table(path: impl AsRef<Path>, top_n: usize) -> Result<CanonicalTable, TableError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| TableError::Io { path: path.display().to_string(), source })?;
    CanonicalTable::parse(&text, top_n)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportDeduction {
    /// Deduced canonical names, sorted and unique.
    pub imports: Vec<String>,
    /// Simple names for which the table had no candidate.
    pub unresolved: Vec<String>,
}

/// Smallest edit distance between `candidate` and any run of up to as many
/// whitespace-separated context tokens as the candidate has segments.
fn context_distance(candidate: &str, context: &[&str]) -> usize {
    let mut best = levenshtein(candidate, "");
    let span = candidate.split('.').count();
    let cand_len = candidate.chars().count();
    for start in 0..context.len() {
        let mut window = String::new();
        for token in context.iter().skip(start).take(span) {
            if !window.is_empty() {
                window.push(' ');
            }
            window.push_str(token);
            let len = window.chars().count();
            if len.abs_diff(cand_len) >= best {
                if len > cand_len {
                    break;
                }
                continue;
            }
            best = best.min(levenshtein(candidate, &window));
        }
    }
    best
}

/// Resolve the simple class names used by `facets` against `table`.
///
/// One candidate is taken as is. Several candidates are ranked by
/// [`context_distance`] to `context_text` (smaller wins, then name order).
pub fn deduce_imports(facets: &CodeFacets, table: &CanonicalTable, context_text: &str) -> ImportDeduction {
    let context: Vec<&str> = context_text.split_whitespace().collect();
    let names: BTreeSet<&str> = facets
        .variable_types
        .iter()
        .chain(facets.class_instances.iter())
        .map(String::as_str)
        .collect();
    let mut imports = BTreeSet::new();
    let mut unresolved = Vec::new();
    for simple in names {
        let candidates: Vec<&str> = table.candidates(simple).collect();
        let chosen = match candidates.as_slice() {
            [] => {
                unresolved.push(simple.to_string());
                continue;
            }
            [only] => *only,
            many => many
                .iter()
                .map(|c| (context_distance(c, &context), *c))
                .min()
                .map(|(_, c)| c)
                .expect("non-empty"),
        };
        imports.insert(chosen.to_string());
    }
    ImportDeduction { imports: imports.into_iter().collect(), unresolved }
}
