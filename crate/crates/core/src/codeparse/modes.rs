//! Shallow structural recognisers for the four parse modes.
//!
//! These do not implement the Java grammar. They check the outline a real
//! parser would need at each level: a compilation unit is package, imports
//! and type declarations; a class body is a run of member declarations;
//! a statement block is a run of `;`-terminated or braced statements; an
//! expression has no top-level statement terminator.

use super::lexer::{Token, TokenKind};
use serde::{Deserialize, Serialize};

/// How a snippet was parsed, strictest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ParseMode {
    CompilationUnit,
    ClassBodyDeclarations,
    Statements,
    Expression,
}

impl ParseMode {
    pub const ALL: [ParseMode; 4] = [
        ParseMode::CompilationUnit,
        ParseMode::ClassBodyDeclarations,
        ParseMode::Statements,
        ParseMode::Expression,
    ];
}

/// Token slice with precomputed bracket pairs.
pub(crate) struct Outline<'t, 'a> {
    toks: &'t [Token<'a>],
    partner: Vec<usize>,
}

impl<'t, 'a> Outline<'t, 'a> {
    /// `None` when `(`, `[` and `{` are unbalanced or crossed.
    pub fn new(toks: &'t [Token<'a>]) -> Option<Self> {
        let mut partner = vec![usize::MAX; toks.len()];
        let mut stack: Vec<(usize, &str)> = Vec::new();
        for (i, t) in toks.iter().enumerate() {
            if t.kind != TokenKind::Punct {
                continue;
            }
            match t.text {
                "(" => stack.push((i, ")")),
                "[" => stack.push((i, "]")),
                "{" => stack.push((i, "}")),
                ")" | "]" | "}" => {
                    let (open, want) = stack.pop()?;
                    if want != t.text {
                        return None;
                    }
                    partner[open] = i;
                    partner[i] = open;
                }
                _ => {}
            }
        }
        stack.is_empty().then_some(Outline { toks, partner })
    }

    pub fn accepts(&self, mode: ParseMode) -> bool {
        let end = self.toks.len();
        if end == 0 {
            return mode == ParseMode::Expression;
        }
        match mode {
            ParseMode::CompilationUnit => self.compilation_unit(),
            ParseMode::ClassBodyDeclarations => self.class_body(0, end),
            ParseMode::Statements => self.statements(0, end),
            ParseMode::Expression => self.expression(0, end),
        }
    }

    fn at(&self, i: usize, text: &str) -> bool {
        self.toks.get(i).is_some_and(|t| t.is(text))
    }

    fn ident_at(&self, i: usize) -> bool {
        self.toks.get(i).is_some_and(Token::is_ident)
    }

    /// Index just past the bracket group opening at `i`.
    fn skip_group(&self, i: usize) -> usize {
        self.partner[i] + 1
    }

    fn is_open(&self, i: usize) -> bool {
        self.at(i, "(") || self.at(i, "[") || self.at(i, "{")
    }

    /// `a.b.C` starting at `i`; returns the index after it.
    fn qualified_name(&self, mut i: usize, end: usize) -> Option<usize> {
        if !self.ident_at(i) {
            return None;
        }
        i += 1;
        while i + 1 < end && self.at(i, ".") && self.ident_at(i + 1) {
            i += 2;
        }
        Some(i)
    }

    /// `<...>` starting at `i`, tracking angle depth. Only tokens that can
    /// appear in type arguments are allowed.
    fn type_args(&self, mut i: usize, end: usize) -> Option<usize> {
        let mut depth = 0usize;
        while i < end {
            let t = &self.toks[i];
            match t.text {
                "<" => depth += 1,
                ">" => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i + 1);
                    }
                }
                "," | "?" | "." | "&" | "[" | "]" | "extends" | "super" => {}
                _ if t.is_type_name() => {}
                _ => return None,
            }
            i += 1;
        }
        None
    }

    /// A type reference: name, optional type arguments, array dimensions.
    fn type_ref(&self, i: usize, end: usize) -> Option<usize> {
        let mut j = if self.toks.get(i).is_some_and(Token::is_primitive) {
            i + 1
        } else {
            self.qualified_name(i, end)?
        };
        if self.at(j, "<") {
            j = self.type_args(j, end)?;
            // Inner class of a generic type: Map.Entry<K,V> is covered above,
            // Outer<T>.Inner is rare enough to accept loosely.
            while self.at(j, ".") && self.ident_at(j + 1) {
                j += 2;
            }
        }
        while self.at(j, "[") && self.at(j + 1, "]") {
            j += 2;
        }
        (j <= end).then_some(j)
    }

    fn modifiers(&self, mut i: usize, end: usize) -> usize {
        while i < end && self.toks[i].is_modifier() {
            i += 1;
        }
        i
    }

    fn compilation_unit(&self) -> bool {
        let end = self.toks.len();
        let mut i = 0;
        let mut header = false;
        if self.at(i, "package") {
            match self.qualified_name(i + 1, end) {
                Some(j) if self.at(j, ";") => i = j + 1,
                _ => return false,
            }
            header = true;
        }
        while self.at(i, "import") {
            let mut j = i + 1;
            if self.at(j, "static") {
                j += 1;
            }
            let Some(mut k) = self.qualified_name(j, end) else { return false };
            if self.at(k, ".") && self.at(k + 1, "*") {
                k += 2;
            }
            if !self.at(k, ";") {
                return false;
            }
            i = k + 1;
            header = true;
        }
        let mut types = 0;
        while i < end {
            if self.at(i, ";") {
                i += 1;
                continue;
            }
            let j = self.modifiers(i, end);
            match self.type_declaration(j, end) {
                Some(k) => {
                    i = k;
                    types += 1;
                }
                None => return false,
            }
        }
        header || types > 0
    }

    /// `class|interface|enum|record Name ... { body }` starting at the keyword.
    fn type_declaration(&self, i: usize, end: usize) -> Option<usize> {
        let kind = self.toks.get(i)?.text;
        if !matches!(kind, "class" | "interface" | "enum" | "record") || self.toks[i].kind != TokenKind::Keyword {
            return None;
        }
        if !self.ident_at(i + 1) {
            return None;
        }
        let mut j = i + 2;
        while j < end && !self.at(j, "{") {
            if self.at(j, ";") || self.at(j, "}") {
                return None;
            }
            j = if self.is_open(j) { self.skip_group(j) } else { j + 1 };
        }
        if j >= end {
            return None;
        }
        let close = self.partner[j];
        let mut body = j + 1;
        if kind == "enum" {
            // constants run up to the first top-level `;`
            let mut k = body;
            while k < close && !self.at(k, ";") {
                k = if self.is_open(k) { self.skip_group(k) } else { k + 1 };
            }
            body = if k < close { k + 1 } else { close };
        }
        self.class_body(body, close).then_some(close + 1)
    }

    fn class_body(&self, mut i: usize, end: usize) -> bool {
        while i < end {
            if self.at(i, ";") {
                i += 1;
                continue;
            }
            if self.at(i, "{") {
                i = self.skip_group(i);
                continue;
            }
            if self.at(i, "static") && self.at(i + 1, "{") {
                i = self.skip_group(i + 1);
                continue;
            }
            match self.member(self.modifiers(i, end), end) {
                Some(j) => i = j,
                None => return false,
            }
        }
        true
    }

    fn member(&self, mut i: usize, end: usize) -> Option<usize> {
        if let Some(j) = self.type_declaration(i, end) {
            return Some(j);
        }
        if self.at(i, "<") {
            i = self.type_args(i, end)?;
        }
        // constructor
        if self.ident_at(i) && self.at(i + 1, "(") {
            let j = self.after_method_header(self.skip_group(i + 1), end)?;
            return self.at(j, "{").then(|| self.skip_group(j));
        }
        let j = self.type_ref(i, end)?;
        if !self.ident_at(j) {
            return None;
        }
        if self.at(j + 1, "(") {
            let mut k = self.after_method_header(self.skip_group(j + 1), end)?;
            if self.at(k, "default") {
                // annotation element default value
                while k < end && !self.at(k, ";") {
                    k = if self.is_open(k) { self.skip_group(k) } else { k + 1 };
                }
                return (k < end).then_some(k + 1);
            }
            if self.at(k, "{") {
                return Some(self.skip_group(k));
            }
            return self.at(k, ";").then_some(k + 1);
        }
        self.declarators(j, end)
    }

    /// Skip array dims and a `throws` list after a parameter list.
    fn after_method_header(&self, mut i: usize, end: usize) -> Option<usize> {
        while self.at(i, "[") && self.at(i + 1, "]") {
            i += 2;
        }
        if self.at(i, "throws") {
            i = self.type_ref(i + 1, end)?;
            while self.at(i, ",") {
                i = self.type_ref(i + 1, end)?;
            }
        }
        Some(i)
    }

    /// `a [= init] (, b [= init])* ;` starting at the first name.
    fn declarators(&self, mut i: usize, end: usize) -> Option<usize> {
        loop {
            if !self.ident_at(i) {
                return None;
            }
            i += 1;
            while self.at(i, "[") && self.at(i + 1, "]") {
                i += 2;
            }
            if self.at(i, "=") {
                i += 1;
                let start = i;
                // initializer: up to `;` or a `,` that starts another declarator
                while i < end {
                    if self.at(i, ";") {
                        break;
                    }
                    if self.at(i, ",")
                        && self.ident_at(i + 1)
                        && (self.at(i + 2, "=") || self.at(i + 2, ",") || self.at(i + 2, ";") || self.at(i + 2, "["))
                    {
                        break;
                    }
                    i = if self.is_open(i) { self.skip_group(i) } else { i + 1 };
                }
                if i == start {
                    return None;
                }
            }
            if self.at(i, ";") {
                return Some(i + 1);
            }
            if !self.at(i, ",") {
                return None;
            }
            i += 1;
        }
    }

    fn statements(&self, mut i: usize, end: usize) -> bool {
        while i < end {
            let t = self.toks[i];
            if t.is(";") {
                i += 1;
                continue;
            }
            if t.is("{") {
                i = self.skip_group(i);
                continue;
            }
            if t.is_ident() && self.at(i + 1, ":") {
                i += 2;
                continue;
            }
            if t.kind == TokenKind::Keyword {
                match t.text {
                    "if" | "while" | "for" | "switch" | "synchronized" | "catch" => {
                        if !self.at(i + 1, "(") {
                            return false;
                        }
                        i = self.skip_group(i + 1);
                        continue;
                    }
                    "else" | "do" | "finally" => {
                        i += 1;
                        continue;
                    }
                    "try" => {
                        i += 1;
                        if self.at(i, "(") {
                            i = self.skip_group(i);
                        }
                        continue;
                    }
                    "case" | "default" => {
                        let mut j = i + 1;
                        while j < end && !self.at(j, ":") && !self.at(j, "->") {
                            j = if self.is_open(j) { self.skip_group(j) } else { j + 1 };
                        }
                        if j >= end {
                            return false;
                        }
                        i = j + 1;
                        continue;
                    }
                    _ => {}
                }
                let j = self.modifiers(i, end);
                if let Some(k) = self.type_declaration(j, end) {
                    i = k;
                    continue;
                }
            }
            match self.simple_statement(i, end) {
                Some(j) => i = j,
                None => return false,
            }
        }
        true
    }

    /// Expression or local declaration terminated by a top-level `;`.
    /// A parenthesised group directly followed by `{` is a method body, which
    /// is not a statement, unless it belongs to `new T(...) { }`.
    fn simple_statement(&self, mut i: usize, end: usize) -> Option<usize> {
        while i < end {
            if self.at(i, ";") {
                return Some(i + 1);
            }
            if self.at(i, "(") {
                let close = self.partner[i];
                if self.at(close + 1, "{") && !self.is_instance_creation(i) {
                    return None;
                }
            }
            if self.at(i, "}") {
                return None;
            }
            i = if self.is_open(i) { self.skip_group(i) } else { i + 1 };
        }
        None
    }

    /// Whether the `(` at `paren` closes a `new a.b.C<...>` head.
    pub(crate) fn is_instance_creation(&self, paren: usize) -> bool {
        let mut j = paren;
        if j > 0 && self.at(j - 1, ">") {
            let mut depth = 0usize;
            while j > 0 {
                j -= 1;
                match self.toks[j].text {
                    ">" => depth += 1,
                    "<" => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
            }
        }
        // j now points at `(` or `<`
        while j >= 2 && self.ident_at(j - 1) && self.at(j - 2, ".") {
            j -= 2;
        }
        j >= 2 && self.ident_at(j - 1) && self.at(j - 2, "new")
    }

    fn expression(&self, i: usize, end: usize) -> bool {
        let mut j = i;
        while j < end {
            let t = &self.toks[j];
            if t.is(";") {
                return false;
            }
            if t.is("{") {
                j = self.skip_group(j);
                continue;
            }
            if t.is("(") {
                let close = self.partner[j];
                // lambda parameter lists may hold declarations
                if self.at(close + 1, "->") {
                    j = close + 1;
                    continue;
                }
            }
            // two adjacent operands never form an expression
            if j + 1 < end && operand(t) && operand(&self.toks[j + 1]) {
                return false;
            }
            j += 1;
        }
        true
    }
}

fn operand(t: &Token) -> bool {
    matches!(t.kind, TokenKind::Ident | TokenKind::Number | TokenKind::Str | TokenKind::Char)
}
