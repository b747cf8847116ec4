//! Abstract and concrete syntax.
//!
//! ```text
//! program    := conceptdef* modeldef* term
//! conceptdef := "concept" IDENT (IDENT ":" type)* "endc"
//! modeldef   := "model" IDENT "of" IDENT (IDENT "=" term)* "endm"
//! type       := IDENT "#" type | arrtype
//! arrtype    := atype "->" arrtype | atype
//! atype      := "Bool" | "Nat" | "(" type ")"
//! term       := "\" IDENT ":" type "." term | "\" IDENT "#" IDENT "." term
//!             | "let" IDENT "=" term "in" term
//!             | "if" term "then" term "else" term
//!             | appterm
//! appterm    := appterm aterm | appterm "#" IDENT
//!             | "succ" aterm | "pred" aterm | "iszero" aterm
//!             | "plus" aterm aterm | aterm
//! aterm      := "true" | "false" | NAT | IDENT "::" IDENT | IDENT | "(" term ")"
//! ```
//!
//! Comments are `(* ... *)`. Application and model application are
//! left-associative and bind tightest; `->` is right-associative; binders
//! extend as far right as possible.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

mod ast;
mod lexer;
mod parser;
mod pretty;

pub use ast::{ConceptDef, ModelDef, Program, Term, Ty};
pub use lexer::is_reserved;
pub use parser::{parse, parse_term, parse_ty};
pub use pretty::pretty;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected ", self.line, self.col)?;
        for (i, e) in self.expected.iter().enumerate() {
            if i > 0 {
                f.write_str(if i + 1 == self.expected.len() { " or " } else { ", " })?;
            }
            f.write_str(e)?;
        }
        write!(f, ", found {}", self.found)
    }
}
