use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use super::ParseError;
use crate::diag::Span;
use crate::ident::{is_ident_continue, is_ident_start, Ident};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Keyword {
    Concept,
    Endc,
    Model,
    Endm,
    Of,
    Bool,
    Nat,
    True,
    False,
    If,
    Then,
    Else,
    Let,
    In,
    Succ,
    Pred,
    IsZero,
    Plus,
}

pub(crate) const KEYWORDS: [(&str, Keyword); 18] = [
    ("concept", Keyword::Concept),
    ("endc", Keyword::Endc),
    ("model", Keyword::Model),
    ("endm", Keyword::Endm),
    ("of", Keyword::Of),
    ("Bool", Keyword::Bool),
    ("Nat", Keyword::Nat),
    ("true", Keyword::True),
    ("false", Keyword::False),
    ("if", Keyword::If),
    ("then", Keyword::Then),
    ("else", Keyword::Else),
    ("let", Keyword::Let),
    ("in", Keyword::In),
    ("succ", Keyword::Succ),
    ("pred", Keyword::Pred),
    ("iszero", Keyword::IsZero),
    ("plus", Keyword::Plus),
];

/// True if `s` is a reserved word and cannot be used as an identifier.
pub fn is_reserved(s: &str) -> bool {
    KEYWORDS.iter().any(|(k, _)| *k == s)
}

impl Keyword {
    pub(crate) fn as_str(self) -> &'static str {
        KEYWORDS.iter().find(|(_, k)| *k == self).map(|(s, _)| *s).unwrap_or("?")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(Ident),
    Kw(Keyword),
    Nat(BigUint),
    Backslash,
    Colon,
    ColonColon,
    Dot,
    Hash,
    Arrow,
    LParen,
    RParen,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(id) => write!(f, "identifier `{id}`"),
            Tok::Kw(k) => write!(f, "`{}`", k.as_str()),
            Tok::Nat(n) => write!(f, "numeral `{n}`"),
            Tok::Backslash => f.write_str("`\\`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::ColonColon => f.write_str("`::`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Hash => f.write_str("`#`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    chars: core::iter::Peekable<core::str::CharIndices<'a>>,
    src: &'a str,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map(|&(i, _)| i).unwrap_or(self.src.len())
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span { line: self.line, col: self.col }
    }
}

fn lex_error(span: Span, found: impl Into<String>, expected: &[&str]) -> ParseError {
    ParseError {
        line: span.line,
        col: span.col,
        found: found.into(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { chars: src.char_indices().peekable(), src, line: 1, col: 1 };
    let mut out = Vec::new();
    loop {
        // whitespace and comments
        loop {
            match cur.peek() {
                Some(c) if c.is_whitespace() => {
                    cur.bump();
                }
                Some('(') if cur.peek2() == Some('*') => {
                    let start = cur.span();
                    cur.bump();
                    cur.bump();
                    loop {
                        match cur.bump() {
                            Some('*') if cur.peek() == Some(')') => {
                                cur.bump();
                                break;
                            }
                            Some(_) => {}
                            None => return Err(lex_error(start, "unterminated comment", &["`*)`"])),
                        }
                    }
                }
                _ => break,
            }
        }

        let span = cur.span();
        let start = cur.offset();
        let Some(c) = cur.peek() else {
            out.push(Token { tok: Tok::Eof, span });
            return Ok(out);
        };

        let tok = if is_ident_start(c) {
            while cur.peek().is_some_and(is_ident_continue) {
                cur.bump();
            }
            let text = &src[start..cur.offset()];
            match KEYWORDS.iter().find(|(k, _)| *k == text) {
                Some((_, kw)) => Tok::Kw(*kw),
                None => Tok::Ident(Ident::new(text).expect("lexed identifier is valid")),
            }
        } else if c.is_ascii_digit() {
            while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                cur.bump();
            }
            let text = &src[start..cur.offset()];
            if cur.peek().is_some_and(is_ident_start) {
                return Err(lex_error(span, text, &["numeral"]));
            }
            Tok::Nat(text.parse().expect("decimal digits"))
        } else {
            cur.bump();
            match c {
                '\\' => Tok::Backslash,
                '.' => Tok::Dot,
                '#' => Tok::Hash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '=' => Tok::Eq,
                ':' => {
                    if cur.peek() == Some(':') {
                        cur.bump();
                        Tok::ColonColon
                    } else {
                        Tok::Colon
                    }
                }
                '-' if cur.peek() == Some('>') => {
                    cur.bump();
                    Tok::Arrow
                }
                other => {
                    let mut s = String::new();
                    s.push(other);
                    return Err(lex_error(span, s, &["token"]));
                }
            }
        };
        out.push(Token { tok, span });
    }
}
