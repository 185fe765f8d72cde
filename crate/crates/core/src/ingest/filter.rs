use serde::{Deserialize, Serialize};

use super::html::extract_segments;
use super::{PostType, RawRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnippetOrigin {
    Question,
    AcceptedAnswer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSnippet {
    pub origin: SnippetOrigin,
    pub source: String,
}

/// A question that passed every filter, with its answers' text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CleanPost {
    #[serde(rename = "id")]
    pub question_id: u64,
    pub title: String,
    #[serde(rename = "question")]
    pub question_text: String,
    /// Accepted answer first, then the others in dump order.
    #[serde(rename = "answers")]
    pub answer_texts: Vec<String>,
    #[serde(rename = "snippets")]
    pub code_snippets: Vec<CodeSnippet>,
    pub tags: Vec<String>,
}

/// The first filter a question failed, checked in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    NoAccept,
    NoCode,
    NoJava,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionTally {
    pub no_accept: u64,
    pub no_code: u64,
    pub no_java: u64,
}

impl RejectionTally {
    pub fn record(&mut self, r: Rejection) {
        match r {
            Rejection::NoAccept => self.no_accept += 1,
            Rejection::NoCode => self.no_code += 1,
            Rejection::NoJava => self.no_java += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.no_accept + self.no_code + self.no_java
    }
}

pub const REQUIRED_TAG: &str = "java";

fn code_blocks(body: &str, origin: SnippetOrigin) -> (String, Vec<CodeSnippet>) {
    let (text, blocks) = extract_segments(body);
    let snippets = blocks
        .into_iter()
        .filter(|b| !b.trim().is_empty())
        .map(|source| CodeSnippet { origin, source })
        .collect();
    (text, snippets)
}

/// Apply the accepted-answer, code and tag filters. Pure, so it can run in
/// parallel over grouped questions.
pub fn classify(question: &RawRow, answers: &[RawRow]) -> Result<CleanPost, Rejection> {
    debug_assert_eq!(question.post_type, PostType::Question);
    let accepted = question
        .accepted_answer_id
        .and_then(|id| answers.iter().position(|a| a.id == id))
        .ok_or(Rejection::NoAccept)?;

    let (question_text, mut snippets) = code_blocks(&question.body, SnippetOrigin::Question);
    let (accepted_text, accepted_code) = code_blocks(&answers[accepted].body, SnippetOrigin::AcceptedAnswer);
    snippets.extend(accepted_code);
    if snippets.is_empty() {
        return Err(Rejection::NoCode);
    }
    if !question.tags.iter().any(|t| t == REQUIRED_TAG) {
        return Err(Rejection::NoJava);
    }

    let mut answer_texts = vec![accepted_text];
    answer_texts.extend(
        answers.iter().enumerate().filter(|&(i, _)| i != accepted).map(|(_, a)| extract_segments(&a.body).0),
    );
    Ok(CleanPost {
        question_id: question.id,
        title: question.title.clone().unwrap_or_default(),
        question_text,
        answer_texts,
        code_snippets: snippets,
        tags: question.tags.clone(),
    })
}

/// [`classify`], counting the rejection reason on failure.
pub fn clean_and_filter(question: &RawRow, answers: &[RawRow], tally: &mut RejectionTally) -> Option<CleanPost> {
    match classify(question, answers) {
        Ok(post) => Some(post),
        Err(r) => {
            tally.record(r);
            None
        }
    }
}
