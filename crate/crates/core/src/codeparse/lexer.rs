//! A forgiving Java tokenizer.
//!
//! Comments and annotations are dropped, string and char literals become a
//! single token each, and `>` is never merged into `>>` so generic argument
//! lists close one bracket at a time. Anything unrecognised becomes a
//! one-character [`TokenKind::Punct`] token instead of an error.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Keyword,
    Number,
    Str,
    Char,
    Punct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    /// Byte offset of the token in the source.
    pub offset: usize,
}

impl<'a> Token<'a> {
    pub fn is(&self, text: &str) -> bool {
        self.text == text && matches!(self.kind, TokenKind::Punct | TokenKind::Keyword)
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }

    pub fn is_primitive(&self) -> bool {
        self.kind == TokenKind::Keyword && PRIMITIVES.contains(&self.text)
    }

    pub fn is_modifier(&self) -> bool {
        self.kind == TokenKind::Keyword && MODIFIERS.contains(&self.text)
    }

    /// An identifier or primitive keyword that can name a type.
    pub fn is_type_name(&self) -> bool {
        self.is_ident() || self.is_primitive()
    }
}

const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null", "yield", "record", "sealed", "permits",
];

pub(crate) const PRIMITIVES: &[&str] =
    &["boolean", "byte", "char", "double", "float", "int", "long", "short", "void"];

pub(crate) const MODIFIERS: &[&str] = &[
    "public", "protected", "private", "static", "final", "abstract", "native", "synchronized",
    "transient", "volatile", "strictfp", "default", "sealed",
];

const OPERATORS: &[&str] = &[
    ">>>=", "<<=", "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "<<",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}

pub fn tokenize(source: &str) -> Vec<Token<'_>> {
    Lexer { src: source, pos: 0, out: Vec::new() }.run()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    out: Vec<Token<'a>>,
}

impl<'a> Lexer<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn push(&mut self, kind: TokenKind, start: usize) {
        self.out.push(Token { kind, text: &self.src[start..self.pos], offset: start });
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        let len: usize = self.rest().chars().take_while(|&c| pred(c)).map(char::len_utf8).sum();
        self.pos += len;
    }

    fn skip_ws(&mut self) {
        self.eat_while(char::is_whitespace);
    }

    /// Consume a quoted literal. Stops at the closing quote or, for an
    /// unterminated literal, at end of line.
    fn quoted(&mut self, quote: char) {
        if quote == '"' && self.rest().starts_with("\"\"\"") {
            self.pos += 3;
            match self.rest().find("\"\"\"") {
                Some(end) => self.pos += end + 3,
                None => self.pos = self.src.len(),
            }
            return;
        }
        self.pos += 1;
        let mut escaped = false;
        while let Some(c) = self.peek() {
            if c == '\n' {
                return;
            }
            self.pos += c.len_utf8();
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == quote {
                return;
            }
        }
    }

    /// Skip `@Name`, `@a.b.Name` and `@Name(...)`. `@interface` is kept as the
    /// `interface` keyword.
    fn annotation(&mut self) {
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        self.eat_while(is_ident_part);
        if &self.src[start..self.pos] == "interface" {
            self.push(TokenKind::Keyword, start);
            return;
        }
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.rest().starts_with('.') {
                self.pos += 1;
                self.skip_ws();
                self.eat_while(is_ident_part);
            } else {
                self.pos = save;
                break;
            }
        }
        let save = self.pos;
        self.skip_ws();
        if self.rest().starts_with('(') {
            let mut depth = 0usize;
            while let Some(c) = self.peek() {
                match c {
                    '"' | '\'' => {
                        self.quoted(c);
                        continue;
                    }
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            self.pos += 1;
                            return;
                        }
                    }
                    _ => {}
                }
                self.pos += c.len_utf8();
            }
        } else {
            self.pos = save;
        }
    }

    fn run(mut self) -> Vec<Token<'a>> {
        while self.pos < self.src.len() {
            self.skip_ws();
            let Some(c) = self.peek() else { break };
            let start = self.pos;
            let rest = self.rest();
            if rest.starts_with("//") {
                match rest.find('\n') {
                    Some(end) => self.pos += end,
                    None => self.pos = self.src.len(),
                }
            } else if let Some(body) = rest.strip_prefix("/*") {
                match body.find("*/") {
                    Some(end) => self.pos += end + 4,
                    None => self.pos = self.src.len(),
                }
            } else if c == '"' {
                self.quoted('"');
                self.push(TokenKind::Str, start);
            } else if c == '\'' {
                self.quoted('\'');
                self.push(TokenKind::Char, start);
            } else if c == '@' {
                self.annotation();
            } else if is_ident_start(c) {
                self.eat_while(is_ident_part);
                let kind = if is_keyword(&self.src[start..self.pos]) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Ident
                };
                self.push(kind, start);
            } else if c.is_ascii_digit()
                || (c == '.' && rest[1..].starts_with(|d: char| d.is_ascii_digit()))
            {
                self.pos += 1;
                let mut prev = c;
                while let Some(d) = self.peek() {
                    let exponent_sign = (d == '+' || d == '-') && matches!(prev, 'e' | 'E' | 'p' | 'P');
                    if d.is_ascii_alphanumeric() || d == '_' || d == '.' || exponent_sign {
                        self.pos += 1;
                        prev = d;
                    } else {
                        break;
                    }
                }
                self.push(TokenKind::Number, start);
            } else {
                match OPERATORS.iter().find(|op| rest.starts_with(**op)) {
                    Some(op) => self.pos += op.len(),
                    None => self.pos += c.len_utf8(),
                }
                self.push(TokenKind::Punct, start);
            }
        }
        self.out
    }
}
