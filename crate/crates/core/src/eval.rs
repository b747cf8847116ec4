//! Substitution and small-step call-by-value evaluation.
//!
//! Model application `(\c#C. b) # M` substitutes the model name for the
//! concept variable, turning every `c::f` in `b` into `M::f`. Member
//! invocation `M::f` then steps to the stored, already-closed member term.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::ident::Ident;
use crate::syntax::Term;
use crate::typecheck::ModelTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalResult {
    /// Reached a value.
    Converged(Term),
    /// A non-value with no applicable rule.
    Stuck(Term),
    /// The step budget ran out first.
    OutOfFuel(Term),
}

/// Names occurring free in `t`, counting both variables and the receivers
/// of member invocations.
pub fn free_names(t: &Term) -> BTreeSet<Ident> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut alloc::vec::Vec::new(), &mut out);
    out
}

fn collect_free<'a>(t: &'a Term, bound: &mut alloc::vec::Vec<&'a Ident>, out: &mut BTreeSet<Ident>) {
    let mut note = |x: &Ident, bound: &alloc::vec::Vec<&Ident>| {
        if !bound.contains(&x) {
            out.insert(x.clone());
        }
    };
    match t {
        Term::Var(x) => note(x, bound),
        Term::CInvk(c, _) => note(c, bound),
        Term::MApp(e, _) => collect_free(e, bound, out),
        Term::Abs(x, _, body) | Term::CAbs(x, _, body) => {
            bound.push(x);
            collect_free(body, bound, out);
            bound.pop();
        }
        Term::Let(x, b, body) => {
            collect_free(b, bound, out);
            bound.push(x);
            collect_free(body, bound, out);
            bound.pop();
        }
        Term::App(a, b) | Term::Plus(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::If(a, b, c) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
            collect_free(c, bound, out);
        }
        Term::Succ(a) | Term::Pred(a) | Term::IsZero(a) => collect_free(a, bound, out),
        Term::True | Term::False | Term::Nat(_) => {}
    }
}

fn occurs_free(x: &Ident, t: &Term) -> bool {
    match t {
        Term::Var(y) | Term::CInvk(y, _) => x == y,
        Term::MApp(e, _) => occurs_free(x, e),
        Term::Abs(y, _, body) | Term::CAbs(y, _, body) => x != y && occurs_free(x, body),
        Term::Let(y, b, body) => occurs_free(x, b) || (x != y && occurs_free(x, body)),
        Term::App(a, b) | Term::Plus(a, b) => occurs_free(x, a) || occurs_free(x, b),
        Term::If(a, b, c) => occurs_free(x, a) || occurs_free(x, b) || occurs_free(x, c),
        Term::Succ(a) | Term::Pred(a) | Term::IsZero(a) => occurs_free(x, a),
        Term::True | Term::False | Term::Nat(_) => false,
    }
}

/// `[x ↦ s] t`.
///
/// Binders of `x` stop the substitution. A binder that would capture a free
/// name of `s` is renamed first. When `s` is a bare name `M` (a model being
/// applied), invocations `x::f` become `M::f`.
pub fn substitute(x: &Ident, s: &Term, t: &Term) -> Term {
    let fns = free_names(s);
    Subst { x, s, fns: &fns }.go(t)
}

struct Subst<'a> {
    x: &'a Ident,
    s: &'a Term,
    fns: &'a BTreeSet<Ident>,
}

impl Subst<'_> {
    fn go(&self, t: &Term) -> Term {
        let b = |t: &Term| Box::new(self.go(t));
        match t {
            Term::Var(y) if y == self.x => self.s.clone(),
            Term::CInvk(c, f) if c == self.x => match self.s {
                Term::Var(m) => Term::CInvk(m.clone(), f.clone()),
                _ => t.clone(),
            },
            Term::Var(_) | Term::CInvk(..) | Term::True | Term::False | Term::Nat(_) => t.clone(),
            Term::Abs(y, ann, body) => {
                let (y, body) = self.under_binder(y, body);
                Term::Abs(y, ann.clone(), body)
            }
            Term::CAbs(y, concept, body) => {
                let (y, body) = self.under_binder(y, body);
                Term::CAbs(y, concept.clone(), body)
            }
            Term::Let(y, bound, body) => {
                let bound = b(bound);
                let (y, body) = self.under_binder(y, body);
                Term::Let(y, bound, body)
            }
            Term::App(f, a) => Term::App(b(f), b(a)),
            Term::MApp(e, m) => Term::MApp(b(e), m.clone()),
            Term::If(c, th, el) => Term::If(b(c), b(th), b(el)),
            Term::Succ(a) => Term::Succ(b(a)),
            Term::Pred(a) => Term::Pred(b(a)),
            Term::IsZero(a) => Term::IsZero(b(a)),
            Term::Plus(l, r) => Term::Plus(b(l), b(r)),
        }
    }

    fn under_binder(&self, y: &Ident, body: &Term) -> (Ident, Box<Term>) {
        if y == self.x || !occurs_free(self.x, body) {
            return (y.clone(), Box::new(body.clone()));
        }
        if !self.fns.contains(y) {
            return (y.clone(), Box::new(self.go(body)));
        }
        let in_body = free_names(body);
        let mut fresh = y.primed();
        while self.fns.contains(&fresh) || in_body.contains(&fresh) || &fresh == self.x {
            fresh = fresh.primed();
        }
        let renamed = substitute(y, &Term::Var(fresh.clone()), body);
        (fresh, Box::new(self.go(&renamed)))
    }
}

fn as_nat(t: &Term) -> Option<&BigUint> {
    match t {
        Term::Nat(n) => Some(n),
        _ => None,
    }
}

/// One call-by-value step, leftmost-innermost. `None` for values and for
/// stuck terms.
pub fn step(mt: &ModelTable, t: &Term) -> Option<Term> {
    let boxed = |t: Term| Box::new(t);
    match t {
        Term::App(f, a) => {
            if !f.is_value() {
                return step(mt, f).map(|f| Term::App(boxed(f), a.clone()));
            }
            if !a.is_value() {
                return step(mt, a).map(|a| Term::App(f.clone(), boxed(a)));
            }
            match &**f {
                Term::Abs(x, _, body) => Some(substitute(x, a, body)),
                _ => None,
            }
        }
        Term::Let(x, bound, body) => {
            if bound.is_value() {
                Some(substitute(x, bound, body))
            } else {
                step(mt, bound).map(|b| Term::Let(x.clone(), boxed(b), body.clone()))
            }
        }
        Term::MApp(e, m) => {
            if !e.is_value() {
                return step(mt, e).map(|e| Term::MApp(boxed(e), m.clone()));
            }
            match &**e {
                Term::CAbs(c, _, body) if mt.get(m).is_some() => {
                    Some(substitute(c, &Term::Var(m.clone()), body))
                }
                _ => None,
            }
        }
        Term::CInvk(m, f) => mt.get(m)?.members.get(f).cloned(),
        Term::If(c, th, el) => match &**c {
            Term::True => Some((**th).clone()),
            Term::False => Some((**el).clone()),
            c if !c.is_value() => step(mt, c).map(|c| Term::If(boxed(c), th.clone(), el.clone())),
            _ => None,
        },
        Term::Succ(a) => match as_nat(a) {
            Some(n) => Some(Term::Nat(n + 1u32)),
            None if !a.is_value() => step(mt, a).map(|a| Term::Succ(boxed(a))),
            None => None,
        },
        Term::Pred(a) => match as_nat(a) {
            Some(n) if n.is_zero() => Some(Term::Nat(BigUint::zero())),
            Some(n) => Some(Term::Nat(n - BigUint::one())),
            None if !a.is_value() => step(mt, a).map(|a| Term::Pred(boxed(a))),
            None => None,
        },
        Term::IsZero(a) => match as_nat(a) {
            Some(n) => Some(if n.is_zero() { Term::True } else { Term::False }),
            None if !a.is_value() => step(mt, a).map(|a| Term::IsZero(boxed(a))),
            None => None,
        },
        Term::Plus(l, r) => {
            if !l.is_value() {
                return step(mt, l).map(|l| Term::Plus(boxed(l), r.clone()));
            }
            if !r.is_value() {
                return step(mt, r).map(|r| Term::Plus(l.clone(), boxed(r)));
            }
            match (as_nat(l), as_nat(r)) {
                (Some(a), Some(b)) => Some(Term::Nat(a + b)),
                _ => None,
            }
        }
        Term::Var(_) | Term::True | Term::False | Term::Nat(_) | Term::Abs(..) | Term::CAbs(..) => None,
    }
}

/// Runs at most `fuel` steps.
pub fn eval(mt: &ModelTable, t: &Term, fuel: u64) -> EvalResult {
    let mut cur = t.clone();
    let mut fuel = fuel;
    loop {
        if cur.is_value() {
            return EvalResult::Converged(cur);
        }
        if fuel == 0 {
            return EvalResult::OutOfFuel(cur);
        }
        match step(mt, &cur) {
            Some(next) => cur = next,
            None => return EvalResult::Stuck(cur),
        }
        fuel -= 1;
    }
}

/// The sequence of terms visited from `t`, starting with `t` itself.
pub fn trace<'a>(mt: &'a ModelTable, t: &Term) -> impl Iterator<Item = Term> + 'a {
    core::iter::successors(Some(t.clone()), move |cur| step(mt, cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::id;
    use crate::syntax::{parse, parse_term, Ty};
    use crate::typecheck::check_program;

    const CMONOID: &str = "concept CMonoid
           neutral : Nat
           op : Nat -> Nat -> Nat
         endc
         model MAdd of CMonoid
           neutral = 0
           op = \\x:Nat. \\y:Nat. plus x y
         endm
         (\\c#CMonoid. c::op c::neutral 3) # MAdd";

    fn madd() -> (ModelTable, Term) {
        let p = parse(CMONOID).unwrap();
        let checked = check_program(&p).unwrap();
        (checked.models, p.main)
    }

    #[test]
    fn substitution_examples() {
        let x = id!("x");
        assert_eq!(substitute(&x, &Term::nat(0), &Term::Var(x.clone())), Term::nat(0));
        let shadow = Term::abs(x.clone(), Ty::Nat, Term::Var(x.clone()));
        assert_eq!(substitute(&x, &Term::nat(0), &shadow), shadow);

        let c = id!("c");
        let m = id!("M");
        let t = Term::app(Term::CInvk(c.clone(), id!("f")), Term::CInvk(c.clone(), id!("g")));
        assert_eq!(
            substitute(&c, &Term::Var(m.clone()), &t),
            Term::app(Term::CInvk(m.clone(), id!("f")), Term::CInvk(m, id!("g")))
        );
    }

    #[test]
    fn substitution_avoids_capture_of_model_names() {
        // (\c#C. \M:Nat. c::f) # M must not let the inner binder capture M.
        let body = parse_term("\\M:Nat. c::f").unwrap();
        let out = substitute(&id!("c"), &Term::Var(id!("M")), &body);
        assert_eq!(out, parse_term("\\M':Nat. M::f").unwrap());

        let s = parse_term("\\z:Nat. y").unwrap();
        let out = substitute(&id!("x"), &s, &parse_term("\\y:Nat. x y").unwrap());
        assert_eq!(out, parse_term("\\y':Nat. (\\z:Nat. y) y'").unwrap());
    }

    #[test]
    fn step_examples() {
        assert_eq!(step(&ModelTable::default(), &Term::True), None);
        let (mt, main) = madd();
        let s1 = step(&mt, &main).unwrap();
        assert_eq!(s1, parse_term("MAdd::op MAdd::neutral 3").unwrap());
        assert_eq!(step(&mt, &parse_term("MAdd::neutral").unwrap()), Some(Term::nat(0)));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval(&ModelTable::default(), &Term::True, 0), EvalResult::Converged(Term::True));
        let (mt, main) = madd();
        assert_eq!(eval(&mt, &main, 100), EvalResult::Converged(Term::nat(3)));
        let stuck = Term::app(Term::True, Term::True);
        assert_eq!(eval(&ModelTable::default(), &stuck, 10), EvalResult::Stuck(stuck));
        assert!(matches!(eval(&mt, &main, 2), EvalResult::OutOfFuel(_)));
    }

    #[test]
    fn arithmetic_rules() {
        let mt = ModelTable::default();
        let run = |s: &str| eval(&mt, &parse_term(s).unwrap(), 100);
        assert_eq!(run("pred 0"), EvalResult::Converged(Term::nat(0)));
        assert_eq!(run("pred 5"), EvalResult::Converged(Term::nat(4)));
        assert_eq!(run("succ (plus 2 3)"), EvalResult::Converged(Term::nat(6)));
        assert_eq!(run("iszero (pred 1)"), EvalResult::Converged(Term::True));
        assert_eq!(run("if iszero 2 then 1 else 7"), EvalResult::Converged(Term::nat(7)));
        assert_eq!(run("let x = plus 1 1 in plus x x"), EvalResult::Converged(Term::nat(4)));
        assert_eq!(run("(\\f:Nat -> Nat. f (f 1)) (\\n:Nat. succ n)"), EvalResult::Converged(Term::nat(3)));
    }

    #[test]
    fn values_do_not_step() {
        let mt = ModelTable::default();
        for s in ["true", "false", "42", "\\x:Nat. x", "\\c#C. c::f"] {
            assert_eq!(step(&mt, &parse_term(s).unwrap()), None, "{s}");
        }
    }

    #[test]
    fn unknown_model_is_stuck() {
        let t = parse_term("(\\c#C. c::f) # Nope").unwrap();
        assert!(matches!(eval(&ModelTable::default(), &t, 10), EvalResult::Stuck(_)));
    }

    #[test]
    fn fuel_is_monotone() {
        let (mt, main) = madd();
        let steps = trace(&mt, &main).count() as u64 - 1;
        assert!(matches!(eval(&mt, &main, steps - 1), EvalResult::OutOfFuel(_)));
        for fuel in steps..steps + 5 {
            assert_eq!(eval(&mt, &main, fuel), EvalResult::Converged(Term::nat(3)));
        }
    }
}
