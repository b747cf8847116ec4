use alloc::string::String;
use core::fmt::{self, Write};

use super::ast::{Program, Term, Ty};

// Precedence levels. A term printed at a level tighter than its own gets
// parenthesized.
const TERM: u8 = 0;
const APP: u8 = 1;
const ATOM: u8 = 2;

fn ty_level(t: &Ty) -> u8 {
    match t {
        Ty::ConceptPrm(..) => TERM,
        Ty::Arrow(..) => APP,
        Ty::Bool | Ty::Nat => ATOM,
    }
}

fn write_ty(f: &mut impl Write, t: &Ty, at: u8) -> fmt::Result {
    if ty_level(t) < at {
        f.write_char('(')?;
        write_ty(f, t, TERM)?;
        return f.write_char(')');
    }
    match t {
        Ty::Bool => f.write_str("Bool"),
        Ty::Nat => f.write_str("Nat"),
        Ty::Arrow(d, c) => {
            write_ty(f, d, ATOM)?;
            f.write_str(" -> ")?;
            write_ty(f, c, APP)
        }
        Ty::ConceptPrm(c, body) => {
            write!(f, "{c} # ")?;
            write_ty(f, body, TERM)
        }
    }
}

fn term_level(t: &Term) -> u8 {
    match t {
        Term::Abs(..) | Term::CAbs(..) | Term::Let(..) | Term::If(..) => TERM,
        Term::App(..) | Term::MApp(..) | Term::Succ(_) | Term::Pred(_) | Term::IsZero(_) | Term::Plus(..) => APP,
        Term::Var(_) | Term::CInvk(..) | Term::True | Term::False | Term::Nat(_) => ATOM,
    }
}

fn write_term(f: &mut impl Write, t: &Term, at: u8) -> fmt::Result {
    if term_level(t) < at {
        f.write_char('(')?;
        write_term(f, t, TERM)?;
        return f.write_char(')');
    }
    match t {
        Term::Var(x) => write!(f, "{x}"),
        Term::CInvk(c, m) => write!(f, "{c}::{m}"),
        Term::True => f.write_str("true"),
        Term::False => f.write_str("false"),
        Term::Nat(n) => write!(f, "{n}"),
        Term::Abs(x, ann, body) => {
            write!(f, "\\{x}:")?;
            write_ty(f, ann, TERM)?;
            f.write_str(". ")?;
            write_term(f, body, TERM)
        }
        Term::CAbs(c, concept, body) => {
            write!(f, "\\{c}#{concept}. ")?;
            write_term(f, body, TERM)
        }
        Term::Let(x, bound, body) => {
            write!(f, "let {x} = ")?;
            write_term(f, bound, TERM)?;
            f.write_str(" in ")?;
            write_term(f, body, TERM)
        }
        Term::If(c, th, el) => {
            f.write_str("if ")?;
            write_term(f, c, TERM)?;
            f.write_str(" then ")?;
            write_term(f, th, TERM)?;
            f.write_str(" else ")?;
            write_term(f, el, TERM)
        }
        Term::App(fun, arg) => {
            write_term(f, fun, APP)?;
            f.write_char(' ')?;
            write_term(f, arg, ATOM)
        }
        Term::MApp(e, m) => {
            write_term(f, e, APP)?;
            write!(f, " # {m}")
        }
        Term::Succ(a) => unary(f, "succ", a),
        Term::Pred(a) => unary(f, "pred", a),
        Term::IsZero(a) => unary(f, "iszero", a),
        Term::Plus(a, b) => {
            f.write_str("plus ")?;
            write_term(f, a, ATOM)?;
            f.write_char(' ')?;
            write_term(f, b, ATOM)
        }
    }
}

fn unary(f: &mut impl Write, op: &str, a: &Term) -> fmt::Result {
    f.write_str(op)?;
    f.write_char(' ')?;
    write_term(f, a, ATOM)
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ty(f, self, TERM)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, TERM)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.concepts {
            writeln!(f, "concept {}", c.name)?;
            for (m, ty) in &c.members {
                writeln!(f, "  {m} : {ty}")?;
            }
            writeln!(f, "endc")?;
        }
        for m in &self.models {
            writeln!(f, "model {} of {}", m.name, m.concept)?;
            for (name, body) in &m.members {
                writeln!(f, "  {name} = {body}")?;
            }
            writeln!(f, "endm")?;
        }
        write!(f, "{}", self.main)
    }
}

/// Renders a program in concrete syntax with minimal parentheses.
/// The output parses back to the same AST.
pub fn pretty(p: &Program) -> String {
    let mut s = String::new();
    write!(s, "{p}").expect("writing to a String cannot fail");
    s
}
