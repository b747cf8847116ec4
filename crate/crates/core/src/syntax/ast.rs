use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::ident::{DeclList, Ident};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ty {
    Bool,
    Nat,
    Arrow(Box<Ty>, Box<Ty>),
    /// `C # τ`: the type of a concept abstraction over concept `C`.
    ConceptPrm(Ident, Box<Ty>),
}

impl Ty {
    pub fn arrow(dom: Ty, cod: Ty) -> Ty {
        Ty::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn concept_prm(concept: Ident, body: Ty) -> Ty {
        Ty::ConceptPrm(concept, Box::new(body))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Ident),
    Abs(Ident, Ty, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// `\c # C. body`
    CAbs(Ident, Ident, Box<Term>),
    /// `e # M`
    MApp(Box<Term>, Ident),
    /// `c::f`. The receiver is a concept variable in source programs and
    /// may be a model name once evaluation has applied a model.
    CInvk(Ident, Ident),
    True,
    False,
    If(Box<Term>, Box<Term>, Box<Term>),
    Nat(BigUint),
    Succ(Box<Term>),
    Pred(Box<Term>),
    IsZero(Box<Term>),
    Plus(Box<Term>, Box<Term>),
    Let(Ident, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(x: Ident) -> Term {
        Term::Var(x)
    }

    pub fn abs(x: Ident, ann: Ty, body: Term) -> Term {
        Term::Abs(x, ann, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn cabs(c: Ident, concept: Ident, body: Term) -> Term {
        Term::CAbs(c, concept, Box::new(body))
    }

    pub fn mapp(e: Term, model: Ident) -> Term {
        Term::MApp(Box::new(e), model)
    }

    pub fn nat(n: u64) -> Term {
        Term::Nat(BigUint::from(n))
    }

    pub fn if_(c: Term, t: Term, e: Term) -> Term {
        Term::If(Box::new(c), Box::new(t), Box::new(e))
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn pred(t: Term) -> Term {
        Term::Pred(Box::new(t))
    }

    pub fn iszero(t: Term) -> Term {
        Term::IsZero(Box::new(t))
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Box::new(a), Box::new(b))
    }

    pub fn let_(x: Ident, bound: Term, body: Term) -> Term {
        Term::Let(x, Box::new(bound), Box::new(body))
    }

    /// Values: booleans, numerals, and both kinds of abstraction.
    pub fn is_value(&self) -> bool {
        matches!(self, Term::True | Term::False | Term::Nat(_) | Term::Abs(..) | Term::CAbs(..))
    }
}

/// `concept Name  member : type ...  endc`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptDef {
    pub name: Ident,
    pub members: DeclList<Ty>,
}

/// `model Name of Concept  member = term ...  endm`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelDef {
    pub name: Ident,
    pub concept: Ident,
    pub members: DeclList<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub concepts: Vec<ConceptDef>,
    pub models: Vec<ModelDef>,
    pub main: Term,
}

impl Program {
    pub fn main_only(main: Term) -> Program {
        Program { concepts: Vec::new(), models: Vec::new(), main }
    }
}
