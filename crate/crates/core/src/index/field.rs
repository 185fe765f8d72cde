use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codeparse::FacetKind;

/// The nine indexed fields: three analysed text fields, six verbatim code fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldId {
    Title,
    Question,
    Answer,
    ImportDeclaration,
    MethodDeclaration,
    MethodInvocation,
    VariableType,
    VariableDeclaration,
    ClassInstance,
}

impl FieldId {
    pub const ALL: [FieldId; 9] = [
        FieldId::Title,
        FieldId::Question,
        FieldId::Answer,
        FieldId::ImportDeclaration,
        FieldId::MethodDeclaration,
        FieldId::MethodInvocation,
        FieldId::VariableType,
        FieldId::VariableDeclaration,
        FieldId::ClassInstance,
    ];

    pub const TEXT: [FieldId; 3] = [FieldId::Title, FieldId::Question, FieldId::Answer];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_text(self) -> bool {
        matches!(self, FieldId::Title | FieldId::Question | FieldId::Answer)
    }

    /// snake_case name used in files.
    pub fn as_str(self) -> &'static str {
        match self {
            FieldId::Title => "title",
            FieldId::Question => "question",
            FieldId::Answer => "answer",
            FieldId::ImportDeclaration => "import_declaration",
            FieldId::MethodDeclaration => "method_declaration",
            FieldId::MethodInvocation => "method_invocation",
            FieldId::VariableType => "variable_type",
            FieldId::VariableDeclaration => "variable_declaration",
            FieldId::ClassInstance => "class_instance",
        }
    }

    /// Spelling used in the human-readable query format.
    pub fn display_name(self) -> &'static str {
        match self {
            FieldId::Title => "Title",
            FieldId::Question => "Question",
            FieldId::Answer => "Answer",
            FieldId::ImportDeclaration => "ImportDeclaration",
            FieldId::MethodDeclaration => "MethodDeclaration",
            FieldId::MethodInvocation => "MethodInvocation",
            FieldId::VariableType => "VariableDeclarationType",
            FieldId::VariableDeclaration => "VariableDeclaration",
            FieldId::ClassInstance => "ClassInstance",
        }
    }
}

impl From<FacetKind> for FieldId {
    fn from(kind: FacetKind) -> Self {
        match kind {
            FacetKind::ImportDeclaration => FieldId::ImportDeclaration,
            FacetKind::MethodDeclaration => FieldId::MethodDeclaration,
            FacetKind::MethodInvocation => FieldId::MethodInvocation,
            FacetKind::VariableType => FieldId::VariableType,
            FacetKind::VariableDeclaration => FieldId::VariableDeclaration,
            FacetKind::ClassInstance => FieldId::ClassInstance,
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown field name {0:?}")]
pub struct UnknownField(pub String);

impl FromStr for FieldId {
    type Err = UnknownField;

    /// Accepts snake_case names and the display spellings, including
    /// `VariableType` and `VariableDec`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let field = match s {
            "title" | "Title" => FieldId::Title,
            "question" | "Question" => FieldId::Question,
            "answer" | "Answer" => FieldId::Answer,
            "import_declaration" | "ImportDeclaration" => FieldId::ImportDeclaration,
            "method_declaration" | "MethodDeclaration" => FieldId::MethodDeclaration,
            "method_invocation" | "MethodInvocation" => FieldId::MethodInvocation,
            "variable_type" | "VariableType" | "VariableDeclarationType" => FieldId::VariableType,
            "variable_declaration" | "VariableDeclaration" | "VariableDec" => FieldId::VariableDeclaration,
            "class_instance" | "ClassInstance" => FieldId::ClassInstance,
            other => return Err(UnknownField(other.to_string())),
        };
        Ok(field)
    }
}
