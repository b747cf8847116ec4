//! Static checking and evaluation for the simply typed lambda calculus
//! extended with concepts (module interfaces) and models (module
//! implementations).
//!
//! The crate is layered:
//!
//! * [`ident`] holds identifiers, raw declaration lists and the efficient
//!   finite maps they are converted into.
//! * [`modcheck`] is a generic well-definedness framework for lists of named
//!   declarations. Every check exists twice: a naive reference version that
//!   transliterates the definition, and an efficient version. The two are
//!   kept independent so they can be tested against each other.
//! * [`syntax`] is the AST, parser and pretty-printer.
//! * [`typecheck`] instantiates the framework for concepts, models and
//!   program sections, and provides a list-based reference typechecker.
//! * [`eval`] is a fueled small-step call-by-value evaluator.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diag;
pub mod eval;
pub mod ident;
pub mod modcheck;
pub mod syntax;
pub mod typecheck;

#[cfg(any(test, feature = "gen"))]
pub mod gen;

pub use diag::{DiagCode, Diagnostic, Diagnostics, Span};
pub use ident::{ids_are_unique, list_assoc_lookup, map_from_list, DeclList, FinMap, Ident};
pub use syntax::{parse, pretty, ConceptDef, ModelDef, ParseError, Program, Term, Ty};
