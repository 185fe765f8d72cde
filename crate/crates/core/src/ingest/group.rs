//! Pair each question with its answers.
//!
//! Answers may come before or after their question and are not contiguous
//! in real dumps. With expected answer counts from a first pass, a question
//! is released as soon as its last answer arrives, so buffered rows are
//! bounded by how far apart related rows sit in the file. Without counts
//! everything is held until the end of the stream.

use std::collections::HashMap;

use super::{PostType, RawRow};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupingStrategy {
    /// Count answers per question in a first pass, then stream a second
    /// pass releasing complete groups. Needs a re-readable source.
    #[default]
    TwoPass,
    /// Hold every row in an id-keyed map. Works on any stream.
    InMemory,
}

impl std::str::FromStr for GroupingStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two_pass" => Ok(GroupingStrategy::TwoPass),
            "in_memory" => Ok(GroupingStrategy::InMemory),
            other => Err(format!("unknown grouping strategy {other:?} (expected two_pass or in_memory)")),
        }
    }
}

/// Answers per parent question id.
pub fn count_answers<E>(rows: impl IntoIterator<Item = Result<RawRow, E>>) -> Result<HashMap<u64, u32>, E> {
    let mut counts = HashMap::new();
    for row in rows {
        let row = row?;
        if let (PostType::Answer, Some(parent)) = (row.post_type, row.parent_id) {
            *counts.entry(parent).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

#[derive(Default)]
struct Pending {
    question: Option<RawRow>,
    answers: Vec<RawRow>,
}

pub struct Grouper {
    expected: Option<HashMap<u64, u32>>,
    pending: HashMap<u64, Pending>,
    orphans: u64,
}

impl Grouper {
    pub fn with_counts(expected: HashMap<u64, u32>) -> Self {
        Grouper { expected: Some(expected), pending: HashMap::new(), orphans: 0 }
    }

    pub fn in_memory() -> Self {
        Grouper { expected: None, pending: HashMap::new(), orphans: 0 }
    }

    /// Answers whose question never appeared. Known after [`Grouper::finish`].
    pub fn orphans(&self) -> u64 {
        self.orphans
    }

    /// Rows currently held back.
    pub fn buffered(&self) -> usize {
        self.pending.values().map(|p| p.answers.len() + usize::from(p.question.is_some())).sum()
    }

    pub fn push(&mut self, row: RawRow, emit: &mut impl FnMut(RawRow, Vec<RawRow>)) {
        let key = match row.post_type {
            PostType::Question => row.id,
            PostType::Answer => row.parent_id.expect("answers carry a parent id"),
        };
        let entry = self.pending.entry(key).or_default();
        match row.post_type {
            PostType::Question => entry.question = Some(row),
            PostType::Answer => entry.answers.push(row),
        }
        let Some(expected) = &self.expected else { return };
        let want = expected.get(&key).copied().unwrap_or(0) as usize;
        if entry.question.is_some() && entry.answers.len() >= want {
            let done = self.pending.remove(&key).expect("entry exists");
            if let Some(counts) = self.expected.as_mut() {
                counts.remove(&key);
            }
            emit(done.question.expect("checked above"), done.answers);
        }
    }

    /// Release everything still held, in question id order.
    pub fn finish(mut self, emit: &mut impl FnMut(RawRow, Vec<RawRow>)) -> u64 {
        let mut rest: Vec<(u64, Pending)> = self.pending.drain().collect();
        rest.sort_unstable_by_key(|&(id, _)| id);
        for (_, p) in rest {
            match p.question {
                Some(q) => emit(q, p.answers),
                None => self.orphans += p.answers.len() as u64,
            }
        }
        self.orphans
    }
}
