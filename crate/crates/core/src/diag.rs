//! Diagnostics produced by the checkers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ident::Ident;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagCode {
    DuplicateName,
    DeclIllFormed,
    MissingMember,
    ExtraMember,
    MemberTypeMismatch,
    UnboundReference,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::DuplicateName => "duplicate-name",
            DiagCode::DeclIllFormed => "decl-ill-formed",
            DiagCode::MissingMember => "missing-member",
            DiagCode::ExtraMember => "extra-member",
            DiagCode::MemberTypeMismatch => "member-type-mismatch",
            DiagCode::UnboundReference => "unbound-reference",
        }
    }
}

impl fmt::Display for DiagCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub subject: Ident,
    pub message: String,
    pub location: Option<Span>,
}

impl Diagnostic {
    pub fn new(code: DiagCode, subject: Ident, message: impl Into<String>) -> Self {
        Diagnostic { code, subject, message: message.into(), location: None }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = self.location {
            write!(f, "{}:{}: ", span.line, span.col)?;
        }
        write!(f, "error[{}] {}: {}", self.code, self.subject, self.message)
    }
}

/// A non-empty collection of diagnostics: the failure side of a check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics(Vec<Diagnostic>);

/// `Ok(())` or a non-empty set of diagnostics.
pub type CheckOutcome = Result<(), Diagnostics>;

impl Diagnostics {
    pub fn one(d: Diagnostic) -> Self {
        Diagnostics(alloc::vec![d])
    }

    /// `None` when `ds` is empty.
    pub fn from_vec(ds: Vec<Diagnostic>) -> Option<Self> {
        if ds.is_empty() {
            None
        } else {
            Some(Diagnostics(ds))
        }
    }

    pub fn push(&mut self, d: Diagnostic) {
        self.0.push(d);
    }

    pub fn append(&mut self, other: Diagnostics) {
        self.0.extend(other.0);
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Diagnostic> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn into_vec(self) -> Vec<Diagnostic> {
        self.0
    }

    /// The (code, subject) multiset, as a sorted vector.
    pub fn code_subjects(&self) -> Vec<(DiagCode, Ident)> {
        let mut v: Vec<_> = self.0.iter().map(|d| (d.code, d.subject.clone())).collect();
        v.sort();
        v
    }
}

impl<'a> IntoIterator for &'a Diagnostics {
    type Item = &'a Diagnostic;
    type IntoIter = core::slice::Iter<'a, Diagnostic>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Accumulates diagnostics and turns them into an outcome at the end.
#[derive(Debug, Default)]
pub(crate) struct Collector(Vec<Diagnostic>);

impl Collector {
    pub(crate) fn push(&mut self, d: Diagnostic) {
        self.0.push(d);
    }

    pub(crate) fn absorb(&mut self, outcome: CheckOutcome) {
        if let Err(ds) = outcome {
            self.0.extend(ds.0);
        }
    }

    pub(crate) fn finish(self) -> CheckOutcome {
        match Diagnostics::from_vec(self.0) {
            None => Ok(()),
            Some(ds) => Err(ds),
        }
    }
}

/// The (code, subject) multiset of an outcome; empty for `Ok`.
pub fn outcome_code_subjects(outcome: &CheckOutcome) -> Vec<(DiagCode, Ident)> {
    match outcome {
        Ok(()) => Vec::new(),
        Err(ds) => ds.code_subjects(),
    }
}
