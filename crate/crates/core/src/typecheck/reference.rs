//! List-based reference typechecker.
//!
//! Concepts and models stay in their raw source lists and are looked up by
//! first match; declaration lists are checked with the quadratic
//! `*_spec` oracles. Nothing here touches [`FinMap`](crate::ident::FinMap)
//! or shares code with the efficient pipeline beyond the AST and the error
//! vocabulary.

use alloc::format;
use alloc::vec::Vec;

use super::{main_subject, TyCtx, TypeError, VarBinding};
use crate::diag::{CheckOutcome, Collector, DiagCode, Diagnostic, Diagnostics};
use crate::ident::{list_assoc_lookup, DeclList, Ident};
use crate::modcheck::{check_decls_spec, check_impl_against_interface_spec, CheckStrategy, CoverageMode, FnChecker};
use crate::syntax::{ConceptDef, ModelDef, Program, Term, Ty};

fn find_concept<'a>(cts: &'a [ConceptDef], name: &Ident) -> Option<&'a ConceptDef> {
    cts.iter().find(|c| &c.name == name)
}

fn find_model<'a>(mts: &'a [ModelDef], name: &Ident) -> Option<&'a ModelDef> {
    mts.iter().find(|m| &m.name == name)
}

fn lookup_var<'a>(gamma: &'a [(Ident, VarBinding)], x: &Ident) -> Option<&'a VarBinding> {
    let mut found = None;
    for (n, b) in gamma {
        if n == x {
            found = Some(b);
        }
    }
    found
}

/// First concept mentioned in `t` that is not in `cts`, left to right.
fn first_unknown_concept(cts: &[ConceptDef], t: &Ty) -> Option<Ident> {
    match t {
        Ty::Bool | Ty::Nat => None,
        Ty::Arrow(d, c) => first_unknown_concept(cts, d).or_else(|| first_unknown_concept(cts, c)),
        Ty::ConceptPrm(c, body) => {
            if find_concept(cts, c).is_none() {
                Some(c.clone())
            } else {
                first_unknown_concept(cts, body)
            }
        }
    }
}

fn all_unknown_concepts(cts: &[ConceptDef], t: &Ty) -> Vec<Ident> {
    match t {
        Ty::Bool | Ty::Nat => Vec::new(),
        Ty::Arrow(d, c) => {
            let mut v = all_unknown_concepts(cts, d);
            v.extend(all_unknown_concepts(cts, c));
            v
        }
        Ty::ConceptPrm(c, body) => {
            let mut v = Vec::new();
            if find_concept(cts, c).is_none() {
                v.push(c.clone());
            }
            v.extend(all_unknown_concepts(cts, body));
            v
        }
    }
}

fn member_type(cts: &[ConceptDef], concept: &Ident, member: &Ident) -> Result<Ty, TypeError> {
    let cd = find_concept(cts, concept).ok_or_else(|| TypeError::UnknownConcept(concept.clone()))?;
    list_assoc_lookup(&cd.members, member)
        .cloned()
        .ok_or_else(|| TypeError::UnknownMember { concept: concept.clone(), member: member.clone() })
}

fn same(expected: &Ty, found: &Ty) -> Result<(), TypeError> {
    if expected == found {
        Ok(())
    } else {
        Err(TypeError::Mismatch { expected: expected.clone(), found: found.clone() })
    }
}

fn extended(gamma: &[(Ident, VarBinding)], x: &Ident, b: VarBinding) -> Vec<(Ident, VarBinding)> {
    let mut g = gamma.to_vec();
    g.push((x.clone(), b));
    g
}

fn has_type(cts: &[ConceptDef], mts: &[ModelDef], gamma: &[(Ident, VarBinding)], t: &Term) -> Result<Ty, TypeError> {
    let ty = |t: &Term| has_type(cts, mts, gamma, t);
    match t {
        Term::True => Ok(Ty::Bool),
        Term::False => Ok(Ty::Bool),
        Term::Nat(_) => Ok(Ty::Nat),
        Term::Var(x) => match lookup_var(gamma, x) {
            None => Err(TypeError::UnboundVariable(x.clone())),
            Some(VarBinding::ConceptVar(_)) => Err(TypeError::ConceptVarAsTerm(x.clone())),
            Some(VarBinding::TermVar(t)) => Ok(t.clone()),
        },
        Term::Abs(x, ann, body) => {
            if let Some(c) = first_unknown_concept(cts, ann) {
                return Err(TypeError::UnknownConcept(c));
            }
            let g = extended(gamma, x, VarBinding::TermVar(ann.clone()));
            let cod = has_type(cts, mts, &g, body)?;
            Ok(Ty::Arrow(alloc::boxed::Box::new(ann.clone()), alloc::boxed::Box::new(cod)))
        }
        Term::App(f, a) => {
            let tf = ty(f)?;
            let ta = ty(a)?;
            if let Ty::Arrow(dom, cod) = &tf {
                same(dom, &ta)?;
                Ok((**cod).clone())
            } else {
                Err(TypeError::NotAFunction(tf))
            }
        }
        Term::CAbs(c, concept, body) => {
            if find_concept(cts, concept).is_none() {
                return Err(TypeError::UnknownConcept(concept.clone()));
            }
            let g = extended(gamma, c, VarBinding::ConceptVar(concept.clone()));
            let body_ty = has_type(cts, mts, &g, body)?;
            Ok(Ty::ConceptPrm(concept.clone(), alloc::boxed::Box::new(body_ty)))
        }
        Term::MApp(e, m) => {
            let te = ty(e)?;
            let Ty::ConceptPrm(concept, body_ty) = te else {
                return Err(TypeError::NotAConceptAbstraction(te));
            };
            let Some(md) = find_model(mts, m) else {
                return Err(TypeError::UnknownModel(m.clone()));
            };
            if md.concept == concept {
                Ok(*body_ty)
            } else {
                Err(TypeError::ModelOfWrongConcept { model: m.clone(), expected: concept, found: md.concept.clone() })
            }
        }
        Term::CInvk(recv, f) => {
            if let Some(b) = lookup_var(gamma, recv) {
                return match b {
                    VarBinding::ConceptVar(concept) => member_type(cts, concept, f),
                    VarBinding::TermVar(_) => Err(TypeError::NotAConceptVar(recv.clone())),
                };
            }
            if let Some(md) = find_model(mts, recv) {
                return member_type(cts, &md.concept, f);
            }
            Err(TypeError::UnknownReceiver(recv.clone()))
        }
        Term::If(c, th, el) => {
            same(&Ty::Bool, &ty(c)?)?;
            let tt = ty(th)?;
            same(&tt, &ty(el)?)?;
            Ok(tt)
        }
        Term::Succ(a) => {
            same(&Ty::Nat, &ty(a)?)?;
            Ok(Ty::Nat)
        }
        Term::Pred(a) => {
            same(&Ty::Nat, &ty(a)?)?;
            Ok(Ty::Nat)
        }
        Term::IsZero(a) => {
            same(&Ty::Nat, &ty(a)?)?;
            Ok(Ty::Bool)
        }
        Term::Plus(a, b) => {
            same(&Ty::Nat, &ty(a)?)?;
            same(&Ty::Nat, &ty(b)?)?;
            Ok(Ty::Nat)
        }
        Term::Let(x, bound, body) => {
            let tb = ty(bound)?;
            has_type(cts, mts, &extended(gamma, x, VarBinding::TermVar(tb)), body)
        }
    }
}

/// Reference typing over raw concept and model sections.
pub fn type_of_ref(cts: &[ConceptDef], mts: &[ModelDef], gamma: &TyCtx, t: &Term) -> Result<Ty, TypeError> {
    has_type(cts, mts, &gamma.0, t)
}

fn concept_ok(cts: &[ConceptDef], cd: &ConceptDef) -> CheckOutcome {
    let checker = FnChecker::new(
        |_: &(), name: &Ident, ty: &Ty| {
            let unknown = all_unknown_concepts(cts, ty);
            if unknown.is_empty() {
                Ok(())
            } else {
                Err(Diagnostics::one(Diagnostic::new(
                    DiagCode::DeclIllFormed,
                    name.clone(),
                    format!("type of `{name}` mentions unknown concept(s)"),
                )))
            }
        },
        |_: (), _: &Ident, _: &Ty| (),
    );
    check_decls_spec(CheckStrategy::Independent, &checker, &(), &cd.members)
}

fn model_ok(cts: &[ConceptDef], mts: &[ModelDef], md: &ModelDef) -> CheckOutcome {
    let Some(cd) = find_concept(cts, &md.concept) else {
        return Err(Diagnostics::one(Diagnostic::new(
            DiagCode::UnboundReference,
            md.concept.clone(),
            "unknown concept",
        )));
    };
    let checker = FnChecker::new(
        |gamma: &Vec<(Ident, VarBinding)>, name: &Ident, body: &Term| {
            let Some(declared) = list_assoc_lookup(&cd.members, name) else {
                return Ok(());
            };
            match has_type(cts, mts, gamma, body) {
                Err(e) => Err(Diagnostics::one(e.to_diagnostic(name))),
                Ok(found) if &found == declared => Ok(()),
                Ok(_) => Err(Diagnostics::one(Diagnostic::new(
                    DiagCode::MemberTypeMismatch,
                    name.clone(),
                    "member type differs from declaration",
                ))),
            }
        },
        |mut gamma: Vec<(Ident, VarBinding)>, name: &Ident, _: &Term| {
            if let Some(declared) = list_assoc_lookup(&cd.members, name) {
                gamma.push((name.clone(), VarBinding::TermVar(declared.clone())));
            }
            gamma
        },
    );
    let mut out = Collector::default();
    out.absorb(check_decls_spec(CheckStrategy::Sequential, &checker, &Vec::new(), &md.members));

    // First occurrences only, for both the interface and the implementation.
    let mut interface: Vec<(Ident, Ty)> = Vec::new();
    for (n, t) in &cd.members {
        if !interface.iter().any(|(m, _)| m == n) {
            interface.push((n.clone(), t.clone()));
        }
    }
    let mut impl_names: Vec<Ident> = Vec::new();
    for n in md.members.names() {
        if !impl_names.contains(n) {
            impl_names.push(n.clone());
        }
    }
    out.absorb(check_impl_against_interface_spec(&interface, &CoverageMode::Full, &impl_names, |_, _| true));
    out.finish()
}

/// Reference program check: returns the main type or every diagnostic.
pub fn check_program_ref(p: &Program) -> Result<Ty, Diagnostics> {
    let mut out = Collector::default();

    let concepts: DeclList<ConceptDef> = p.concepts.iter().map(|c| (c.name.clone(), c.clone())).collect();
    let concept_section = FnChecker::new(
        |seen: &Vec<ConceptDef>, _: &Ident, cd: &ConceptDef| concept_ok(seen, cd),
        |mut seen: Vec<ConceptDef>, _: &Ident, cd: &ConceptDef| {
            seen.push(cd.clone());
            seen
        },
    );
    out.absorb(check_decls_spec(CheckStrategy::Sequential, &concept_section, &Vec::new(), &concepts));

    let models: DeclList<ModelDef> = p.models.iter().map(|m| (m.name.clone(), m.clone())).collect();
    let model_section = FnChecker::new(
        |seen: &Vec<ModelDef>, _: &Ident, md: &ModelDef| model_ok(&p.concepts, seen, md),
        |mut seen: Vec<ModelDef>, _: &Ident, md: &ModelDef| {
            seen.push(md.clone());
            seen
        },
    );
    out.absorb(check_decls_spec(CheckStrategy::Sequential, &model_section, &Vec::new(), &models));

    let main = has_type(&p.concepts, &p.models, &[], &p.main);
    if let Err(e) = &main {
        out.push(e.to_diagnostic(&main_subject()));
    }
    out.finish()?;
    Ok(main.expect("no diagnostics means main typed"))
}
