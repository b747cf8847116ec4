//! Typing for concept-STLC and program checking.
//!
//! Terms are typed under a concept table, a model table and a variable
//! context. A program is checked with the declaration framework four
//! times: each concept's members (independently), each model's members
//! (sequentially, earlier members in scope), the concept section and the
//! model section (both sequentially).
//!
//! [`reference`] contains an independent list-based pipeline used as an
//! oracle for this one.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::diag::{CheckOutcome, Collector, DiagCode, Diagnostic, Diagnostics};
use crate::eval::substitute;
use crate::ident::{map_from_list, DeclList, FinMap, Ident};
use crate::modcheck::{check_decls, check_impl_against_interface, CheckStrategy, CoverageMode, FnChecker};
use crate::syntax::{ConceptDef, ModelDef, Program, Term, Ty};

pub mod reference;

/// Checked concepts: concept name to member name to declared type.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConceptTable(pub FinMap<FinMap<Ty>>);

impl ConceptTable {
    pub fn get(&self, concept: &str) -> Option<&FinMap<Ty>> {
        self.0.get(concept)
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.0.contains_key(concept)
    }
}

/// A checked model. Member terms are closed: references to earlier members
/// have been inlined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelEntry {
    pub concept: Ident,
    pub members: FinMap<Term>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelTable(pub FinMap<ModelEntry>);

impl ModelTable {
    pub fn get(&self, model: &str) -> Option<&ModelEntry> {
        self.0.get(model)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarBinding {
    TermVar(Ty),
    ConceptVar(Ident),
}

/// Variable context. Later bindings shadow earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TyCtx(pub Vec<(Ident, VarBinding)>);

impl TyCtx {
    pub fn new() -> Self {
        TyCtx(Vec::new())
    }

    pub fn lookup(&self, x: &str) -> Option<&VarBinding> {
        self.0.iter().rev().find(|(n, _)| n.as_str() == x).map(|(_, b)| b)
    }

    pub fn push(&mut self, x: Ident, b: VarBinding) {
        self.0.push((x, b));
    }

    pub fn pop(&mut self) {
        self.0.pop();
    }

    pub fn with(mut self, x: Ident, b: VarBinding) -> Self {
        self.push(x, b);
        self
    }
}

/// Why a term has no type. Every rule failure maps to exactly one of these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeError {
    UnboundVariable(Ident),
    UnknownConcept(Ident),
    UnknownModel(Ident),
    /// `r::f` where `r` is neither a variable nor a model.
    UnknownReceiver(Ident),
    UnknownMember { concept: Ident, member: Ident },
    /// A concept variable used as a term.
    ConceptVarAsTerm(Ident),
    /// `x::f` where `x` is a term variable.
    NotAConceptVar(Ident),
    NotAFunction(Ty),
    NotAConceptAbstraction(Ty),
    Mismatch { expected: Ty, found: Ty },
    ModelOfWrongConcept { model: Ident, expected: Ident, found: Ident },
}

impl TypeError {
    pub fn code(&self) -> DiagCode {
        match self {
            TypeError::UnboundVariable(_)
            | TypeError::UnknownConcept(_)
            | TypeError::UnknownModel(_)
            | TypeError::UnknownReceiver(_)
            | TypeError::UnknownMember { .. } => DiagCode::UnboundReference,
            _ => DiagCode::MemberTypeMismatch,
        }
    }

    /// Unbound names are the subject of their own diagnostic; every other
    /// error is reported against `owner`, the declaration being checked.
    pub fn to_diagnostic(&self, owner: &Ident) -> Diagnostic {
        let subject = match self {
            TypeError::UnboundVariable(x)
            | TypeError::UnknownConcept(x)
            | TypeError::UnknownModel(x)
            | TypeError::UnknownReceiver(x) => x.clone(),
            TypeError::UnknownMember { member, .. } => member.clone(),
            _ => owner.clone(),
        };
        Diagnostic::new(self.code(), subject, format!("in `{owner}`: {self}"))
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeError::UnboundVariable(x) => write!(f, "unbound variable `{x}`"),
            TypeError::UnknownConcept(c) => write!(f, "unknown concept `{c}`"),
            TypeError::UnknownModel(m) => write!(f, "unknown model `{m}`"),
            TypeError::UnknownReceiver(r) => write!(f, "`{r}` is neither a concept variable nor a model"),
            TypeError::UnknownMember { concept, member } => {
                write!(f, "concept `{concept}` has no member `{member}`")
            }
            TypeError::ConceptVarAsTerm(c) => write!(f, "concept variable `{c}` used as a term"),
            TypeError::NotAConceptVar(x) => write!(f, "`{x}` is a term variable, not a concept variable"),
            TypeError::NotAFunction(t) => write!(f, "expected a function, found `{t}`"),
            TypeError::NotAConceptAbstraction(t) => {
                write!(f, "expected a concept abstraction, found `{t}`")
            }
            TypeError::Mismatch { expected, found } => write!(f, "expected `{expected}`, found `{found}`"),
            TypeError::ModelOfWrongConcept { model, expected, found } => {
                write!(f, "model `{model}` implements `{found}`, expected a model of `{expected}`")
            }
        }
    }
}

fn unbound_concepts(ct: &ConceptTable, t: &Ty, out: &mut Vec<Ident>) {
    match t {
        Ty::Bool | Ty::Nat => {}
        Ty::Arrow(d, c) => {
            unbound_concepts(ct, d, out);
            unbound_concepts(ct, c, out);
        }
        Ty::ConceptPrm(c, body) => {
            if !ct.contains(c) {
                out.push(c.clone());
            }
            unbound_concepts(ct, body, out);
        }
    }
}

/// Every concept named in `t` must be in `ct`.
pub fn well_formed_type(ct: &ConceptTable, t: &Ty) -> CheckOutcome {
    let mut missing = Vec::new();
    unbound_concepts(ct, t, &mut missing);
    let mut out = Collector::default();
    for c in missing {
        out.push(Diagnostic::new(DiagCode::UnboundReference, c.clone(), format!("unknown concept `{c}`")));
    }
    out.finish()
}

struct Typer<'a> {
    ct: &'a ConceptTable,
    mt: &'a ModelTable,
    gamma: TyCtx,
}

impl Typer<'_> {
    fn expect(&self, expected: Ty, found: Ty) -> Result<(), TypeError> {
        if expected == found {
            Ok(())
        } else {
            Err(TypeError::Mismatch { expected, found })
        }
    }

    fn member(&self, concept: &Ident, member: &Ident) -> Result<Ty, TypeError> {
        let members = self.ct.get(concept).ok_or_else(|| TypeError::UnknownConcept(concept.clone()))?;
        members
            .get(member)
            .cloned()
            .ok_or_else(|| TypeError::UnknownMember { concept: concept.clone(), member: member.clone() })
    }

    fn under(&mut self, x: &Ident, b: VarBinding, body: &Term) -> Result<Ty, TypeError> {
        self.gamma.push(x.clone(), b);
        let r = self.type_of(body);
        self.gamma.pop();
        r
    }

    fn type_of(&mut self, t: &Term) -> Result<Ty, TypeError> {
        match t {
            Term::Var(x) => match self.gamma.lookup(x) {
                Some(VarBinding::TermVar(ty)) => Ok(ty.clone()),
                Some(VarBinding::ConceptVar(_)) => Err(TypeError::ConceptVarAsTerm(x.clone())),
                None => Err(TypeError::UnboundVariable(x.clone())),
            },
            Term::Abs(x, ann, body) => {
                let mut missing = Vec::new();
                unbound_concepts(self.ct, ann, &mut missing);
                if let Some(c) = missing.into_iter().next() {
                    return Err(TypeError::UnknownConcept(c));
                }
                let cod = self.under(x, VarBinding::TermVar(ann.clone()), body)?;
                Ok(Ty::arrow(ann.clone(), cod))
            }
            Term::App(f, a) => {
                let tf = self.type_of(f)?;
                let ta = self.type_of(a)?;
                match tf {
                    Ty::Arrow(dom, cod) => {
                        self.expect(*dom, ta)?;
                        Ok(*cod)
                    }
                    other => Err(TypeError::NotAFunction(other)),
                }
            }
            Term::CAbs(c, concept, body) => {
                if !self.ct.contains(concept) {
                    return Err(TypeError::UnknownConcept(concept.clone()));
                }
                let ty = self.under(c, VarBinding::ConceptVar(concept.clone()), body)?;
                Ok(Ty::concept_prm(concept.clone(), ty))
            }
            Term::MApp(e, m) => {
                let (concept, body) = match self.type_of(e)? {
                    Ty::ConceptPrm(c, body) => (c, *body),
                    other => return Err(TypeError::NotAConceptAbstraction(other)),
                };
                let entry = self.mt.get(m).ok_or_else(|| TypeError::UnknownModel(m.clone()))?;
                if entry.concept != concept {
                    return Err(TypeError::ModelOfWrongConcept {
                        model: m.clone(),
                        expected: concept,
                        found: entry.concept.clone(),
                    });
                }
                Ok(body)
            }
            Term::CInvk(recv, f) => match self.gamma.lookup(recv) {
                Some(VarBinding::ConceptVar(concept)) => {
                    let concept = concept.clone();
                    self.member(&concept, f)
                }
                Some(VarBinding::TermVar(_)) => Err(TypeError::NotAConceptVar(recv.clone())),
                None => match self.mt.get(recv) {
                    Some(entry) => self.member(&entry.concept, f),
                    None => Err(TypeError::UnknownReceiver(recv.clone())),
                },
            },
            Term::True | Term::False => Ok(Ty::Bool),
            Term::Nat(_) => Ok(Ty::Nat),
            Term::If(c, th, el) => {
                let tc = self.type_of(c)?;
                self.expect(Ty::Bool, tc)?;
                let tt = self.type_of(th)?;
                let te = self.type_of(el)?;
                self.expect(tt.clone(), te)?;
                Ok(tt)
            }
            Term::Succ(a) | Term::Pred(a) => {
                let ta = self.type_of(a)?;
                self.expect(Ty::Nat, ta)?;
                Ok(Ty::Nat)
            }
            Term::IsZero(a) => {
                let ta = self.type_of(a)?;
                self.expect(Ty::Nat, ta)?;
                Ok(Ty::Bool)
            }
            Term::Plus(a, b) => {
                let ta = self.type_of(a)?;
                self.expect(Ty::Nat, ta)?;
                let tb = self.type_of(b)?;
                self.expect(Ty::Nat, tb)?;
                Ok(Ty::Nat)
            }
            Term::Let(x, bound, body) => {
                let tb = self.type_of(bound)?;
                self.under(x, VarBinding::TermVar(tb), body)
            }
        }
    }
}

/// The type of `t` under `ct`, `mt` and `gamma`.
pub fn type_of(ct: &ConceptTable, mt: &ModelTable, gamma: &TyCtx, t: &Term) -> Result<Ty, TypeError> {
    Typer { ct, mt, gamma: gamma.clone() }.type_of(t)
}

/// Checks a concept's member types against the concepts defined so far and
/// returns the member map.
pub fn check_concept_def(ct: &ConceptTable, cd: &ConceptDef) -> Result<FinMap<Ty>, Diagnostics> {
    let checker = FnChecker::new(
        |_: &(), name: &Ident, ty: &Ty| {
            well_formed_type(ct, ty).map_err(|ds| {
                let names: Vec<&str> = ds.iter().map(|d| d.subject.as_str()).collect();
                Diagnostics::one(Diagnostic::new(
                    DiagCode::DeclIllFormed,
                    name.clone(),
                    format!("type of `{name}` mentions unknown concept(s) {}", names.join(", ")),
                ))
            })
        },
        |_: (), _: &Ident, _: &Ty| (),
    );
    check_decls(CheckStrategy::Independent, &checker, &(), &cd.members)?;
    Ok(map_from_list(&cd.members))
}

/// Checks a model against its concept and returns the entry with closed
/// member terms.
pub fn check_model_def(ct: &ConceptTable, mt: &ModelTable, md: &ModelDef) -> Result<ModelEntry, Diagnostics> {
    let Some(interface) = ct.get(&md.concept) else {
        return Err(Diagnostics::one(Diagnostic::new(
            DiagCode::UnboundReference,
            md.concept.clone(),
            format!("model `{}` implements unknown concept `{}`", md.name, md.concept),
        )));
    };

    // Member bodies see earlier members at their declared types. Members the
    // concept does not declare are left to the coverage check.
    let checker = FnChecker::new(
        |gamma: &TyCtx, name: &Ident, body: &Term| {
            let Some(declared) = interface.get(name) else {
                return Ok(());
            };
            match type_of(ct, mt, gamma, body) {
                Err(e) => Err(Diagnostics::one(e.to_diagnostic(name))),
                Ok(found) if &found != declared => Err(Diagnostics::one(Diagnostic::new(
                    DiagCode::MemberTypeMismatch,
                    name.clone(),
                    format!("member `{name}` has type `{found}`, but the concept declares `{declared}`"),
                ))),
                Ok(_) => Ok(()),
            }
        },
        |gamma: TyCtx, name: &Ident, _: &Term| match interface.get(name) {
            Some(declared) => gamma.with(name.clone(), VarBinding::TermVar(declared.clone())),
            None => gamma,
        },
    );
    let mut out = Collector::default();
    out.absorb(check_decls(CheckStrategy::Sequential, &checker, &TyCtx::new(), &md.members));

    let mut seen = BTreeSet::new();
    let impl_names: Vec<Ident> = md.members.names().filter(|n| seen.insert(n.as_str())).cloned().collect();
    out.absorb(check_impl_against_interface(interface, &CoverageMode::Full, &impl_names, |_, _| true));
    out.finish()?;

    let mut closed: Vec<(Ident, Term)> = Vec::with_capacity(md.members.len());
    for (name, body) in &md.members {
        let term = closed.iter().fold(body.clone(), |t, (n, s)| substitute(n, s, &t));
        closed.push((name.clone(), term));
    }
    Ok(ModelEntry { concept: md.concept.clone(), members: map_from_list(&closed.into()) })
}

/// The result of checking a whole program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedProgram {
    pub concepts: ConceptTable,
    pub models: ModelTable,
    pub main_ty: Ty,
}

fn add_concept(mut ct: ConceptTable, name: &Ident, cd: &&ConceptDef) -> ConceptTable {
    ct.0.insert_if_absent(name.clone(), map_from_list(&cd.members));
    ct
}

/// Subject used for diagnostics raised while typing the main term.
pub fn main_subject() -> Ident {
    crate::id!("main")
}

/// Checks the concept section, the model section and the main term.
/// All three phases run even when an earlier one fails, so the failure
/// lists every problem found.
pub fn check_program(p: &Program) -> Result<CheckedProgram, Diagnostics> {
    let mut out = Collector::default();

    let concepts: DeclList<&ConceptDef> = p.concepts.iter().map(|c| (c.name.clone(), c)).collect();
    let concept_checker = FnChecker::new(
        |ct: &ConceptTable, _: &Ident, cd: &&ConceptDef| check_concept_def(ct, cd).map(|_| ()),
        add_concept,
    );
    out.absorb(check_decls(CheckStrategy::Sequential, &concept_checker, &ConceptTable::default(), &concepts));
    let ct = concepts.iter().fold(ConceptTable::default(), |ct, (n, cd)| add_concept(ct, n, cd));

    let models: DeclList<&ModelDef> = p.models.iter().map(|m| (m.name.clone(), m)).collect();
    let add_model = |mut mt: ModelTable, name: &Ident, md: &&ModelDef| {
        let entry = check_model_def(&ct, &mt, md).unwrap_or_else(|_| ModelEntry {
            concept: md.concept.clone(),
            members: map_from_list(&md.members),
        });
        mt.0.insert_if_absent(name.clone(), entry);
        mt
    };
    let model_checker = FnChecker::new(
        |mt: &ModelTable, _: &Ident, md: &&ModelDef| check_model_def(&ct, mt, md).map(|_| ()),
        add_model,
    );
    out.absorb(check_decls(CheckStrategy::Sequential, &model_checker, &ModelTable::default(), &models));
    let mt = models.iter().fold(ModelTable::default(), |mt, (n, md)| add_model(mt, n, md));

    let main_ty = match type_of(&ct, &mt, &TyCtx::new(), &p.main) {
        Ok(ty) => Some(ty),
        Err(e) => {
            out.push(e.to_diagnostic(&main_subject()));
            None
        }
    };

    out.finish()?;
    Ok(CheckedProgram { concepts: ct, models: mt, main_ty: main_ty.expect("no diagnostics means main typed") })
}

#[cfg(test)]
mod tests;
