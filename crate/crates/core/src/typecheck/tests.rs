use super::reference::{check_program_ref, type_of_ref};
use super::*;
use crate::diag::outcome_code_subjects;
use crate::id;
use crate::syntax::{parse, parse_term, parse_ty};
use alloc::vec;
use alloc::vec::Vec;

const CMONOID: &str = "concept CMonoid
     neutral : Nat
     op : Nat -> Nat -> Nat
   endc
   model MAdd of CMonoid
     neutral = 0
     op = \\x:Nat. \\y:Nat. plus x y
   endm
   (\\c#CMonoid. c::op c::neutral 3) # MAdd";

fn ty(s: &str) -> Ty {
    parse_ty(s).unwrap()
}

fn term(s: &str) -> Term {
    parse_term(s).unwrap()
}

fn cmonoid_ct() -> ConceptTable {
    let mut members = FinMap::new();
    members.insert(id!("neutral"), Ty::Nat);
    members.insert(id!("op"), ty("Nat -> Nat -> Nat"));
    let mut ct = ConceptTable::default();
    ct.0.insert(id!("CMonoid"), members);
    ct
}

fn codes(r: &Result<impl core::fmt::Debug, Diagnostics>) -> Vec<(DiagCode, Ident)> {
    match r {
        Ok(_) => vec![],
        Err(ds) => ds.code_subjects(),
    }
}

fn concept(src: &str) -> ConceptDef {
    parse(&alloc::format!("{src} true")).unwrap().concepts.remove(0)
}

fn model(src: &str) -> ModelDef {
    parse(&alloc::format!("{src} true")).unwrap().models.remove(0)
}

#[test]
fn well_formed_type_examples() {
    let ct = cmonoid_ct();
    assert_eq!(well_formed_type(&ct, &Ty::Nat), Ok(()));
    assert_eq!(well_formed_type(&ct, &ty("CMonoid # Nat")), Ok(()));
    let r = well_formed_type(&ct, &ty("(D # Nat) -> Nat"));
    assert_eq!(outcome_code_subjects(&r), vec![(DiagCode::UnboundReference, id!("D"))]);
}

#[test]
fn type_of_examples() {
    let empty = (ConceptTable::default(), ModelTable::default());
    assert_eq!(type_of(&empty.0, &empty.1, &TyCtx::new(), &Term::True), Ok(Ty::Bool));

    let ct = cmonoid_ct();
    let t = term("\\c#CMonoid. plus (c::op c::neutral 1) 0");
    assert_eq!(type_of(&ct, &ModelTable::default(), &TyCtx::new(), &t), Ok(ty("CMonoid # Nat")));

    let p = parse(CMONOID).unwrap();
    let checked = check_program(&p).unwrap();
    assert_eq!(type_of(&checked.concepts, &checked.models, &TyCtx::new(), &p.main), Ok(Ty::Nat));
    assert_eq!(type_of_ref(&p.concepts, &p.models, &TyCtx::new(), &p.main), Ok(Ty::Nat));
}

#[test]
fn type_of_ref_examples() {
    let x = id!("x");
    assert_eq!(
        type_of_ref(&[], &[], &TyCtx::new(), &Term::Var(x.clone())),
        Err(TypeError::UnboundVariable(x.clone()))
    );
    let gamma = TyCtx::new()
        .with(x.clone(), VarBinding::TermVar(Ty::Nat))
        .with(x.clone(), VarBinding::TermVar(Ty::Bool));
    assert_eq!(type_of_ref(&[], &[], &gamma, &Term::Var(x.clone())), Ok(Ty::Bool));
    assert_eq!(
        type_of(&ConceptTable::default(), &ModelTable::default(), &gamma, &Term::Var(x)),
        Ok(Ty::Bool)
    );
}

#[test]
fn type_errors() {
    let ct = cmonoid_ct();
    let mt = ModelTable::default();
    let g = TyCtx::new();
    let t = |s: &str| type_of(&ct, &mt, &g, &term(s));
    assert_eq!(t("if 1 then 2 else 3"), Err(TypeError::Mismatch { expected: Ty::Bool, found: Ty::Nat }));
    assert_eq!(t("true 1"), Err(TypeError::NotAFunction(Ty::Bool)));
    assert_eq!(t("\\c#CMonoid. c"), Err(TypeError::ConceptVarAsTerm(id!("c"))));
    assert_eq!(t("\\x:Nat. x::op"), Err(TypeError::NotAConceptVar(id!("x"))));
    assert_eq!(
        t("\\c#CMonoid. c::nope"),
        Err(TypeError::UnknownMember { concept: id!("CMonoid"), member: id!("nope") })
    );
    assert_eq!(t("\\c#Nope. 1"), Err(TypeError::UnknownConcept(id!("Nope"))));
    assert_eq!(t("\\x:Nope # Nat. 1"), Err(TypeError::UnknownConcept(id!("Nope"))));
    assert_eq!(t("(\\c#CMonoid. 1) # M"), Err(TypeError::UnknownModel(id!("M"))));
    assert_eq!(t("3 # M"), Err(TypeError::NotAConceptAbstraction(Ty::Nat)));
    assert_eq!(t("M::op"), Err(TypeError::UnknownReceiver(id!("M"))));
}

#[test]
fn model_of_wrong_concept_is_a_mismatch() {
    let src = "concept A f : Nat endc
               concept B f : Nat endc
               model MB of B f = 1 endm
               (\\c#A. c::f) # MB";
    let r = check_program(&parse(src).unwrap());
    assert_eq!(codes(&r), vec![(DiagCode::MemberTypeMismatch, id!("main"))]);
}

#[test]
fn type_directed_model_application() {
    let src = "concept A f : Nat endc
               model M of A f = 4 endm
               (if true then \\c#A. c::f else \\d#A. succ d::f) # M";
    assert_eq!(check_program(&parse(src).unwrap()).unwrap().main_ty, Ty::Nat);
}

#[test]
fn check_concept_def_examples() {
    let ct = ConceptTable::default();
    let m = check_concept_def(&ct, &concept("concept C f : Nat endc")).unwrap();
    assert_eq!(m.get("f"), Some(&Ty::Nat));

    let r = check_concept_def(&ct, &concept("concept C f : Nat f : Bool endc"));
    assert_eq!(codes(&r), vec![(DiagCode::DuplicateName, id!("f"))]);

    let r = check_concept_def(&ct, &concept("concept C f : D # Nat endc"));
    assert_eq!(codes(&r), vec![(DiagCode::DeclIllFormed, id!("f"))]);
}

#[test]
fn check_model_def_examples() {
    let ct = cmonoid_ct();
    let mt = ModelTable::default();
    let entry = check_model_def(
        &ct,
        &mt,
        &model("model MAdd of CMonoid neutral = 0 op = \\x:Nat. \\y:Nat. plus x y endm"),
    )
    .unwrap();
    assert_eq!(entry.concept, id!("CMonoid"));
    assert_eq!(entry.members.get("neutral"), Some(&Term::nat(0)));
    assert_eq!(entry.members.get("op"), Some(&term("\\x:Nat. \\y:Nat. plus x y")));

    let r = check_model_def(&ct, &mt, &model("model M of CMonoid neutral = 0 endm"));
    assert_eq!(codes(&r), vec![(DiagCode::MissingMember, id!("op"))]);

    let r = check_model_def(&ct, &mt, &model("model M of CMonoid neutral = 0 op = \\x:Nat. x endm"));
    assert_eq!(codes(&r), vec![(DiagCode::MemberTypeMismatch, id!("op"))]);

    let r = check_model_def(&ct, &mt, &model("model M of Nope endm"));
    assert_eq!(codes(&r), vec![(DiagCode::UnboundReference, id!("Nope"))]);

    let r = check_model_def(
        &ct,
        &mt,
        &model("model M of CMonoid neutral = 0 neutral = 1 op = \\x:Nat. \\y:Nat. x extra = 3 endm"),
    );
    assert_eq!(
        codes(&r),
        vec![(DiagCode::DuplicateName, id!("neutral")), (DiagCode::ExtraMember, id!("extra"))]
    );
}

#[test]
fn model_members_are_inlined_in_order() {
    let src = "concept C one : Nat two : Nat add1 : Nat -> Nat endc
               model M of C
                 one = 1
                 add1 = \\n:Nat. plus n one
                 two = add1 one
               endm
               true";
    let checked = check_program(&parse(src).unwrap()).unwrap();
    let m = checked.models.get("M").unwrap();
    assert_eq!(m.members.get("add1"), Some(&term("\\n:Nat. plus n 1")));
    assert_eq!(m.members.get("two"), Some(&term("(\\n:Nat. plus n 1) 1")));
}

#[test]
fn model_members_see_only_earlier_members() {
    let src = "concept C a : Nat b : Nat endc
               model M of C a = b b = 1 endm
               true";
    let r = check_program(&parse(src).unwrap());
    assert_eq!(codes(&r), vec![(DiagCode::UnboundReference, id!("b"))]);
}

#[test]
fn check_program_examples() {
    let p = parse("true").unwrap();
    let c = check_program(&p).unwrap();
    assert!(c.concepts.0.is_empty() && c.models.0.is_empty());
    assert_eq!(c.main_ty, Ty::Bool);

    assert_eq!(check_program(&parse(CMONOID).unwrap()).unwrap().main_ty, Ty::Nat);

    let r = check_program(&parse("concept C endc concept C endc true").unwrap());
    assert_eq!(codes(&r), vec![(DiagCode::DuplicateName, id!("C"))]);
}

#[test]
fn concept_and_model_namespaces_are_disjoint() {
    let src = "concept C f : Nat endc model C of C f = 2 endm (\\c#C. c::f) # C";
    assert_eq!(check_program(&parse(src).unwrap()).unwrap().main_ty, Ty::Nat);
}

#[test]
fn later_concepts_may_mention_earlier_ones() {
    let ok = "concept A f : Nat endc concept B g : A # Nat endc true";
    assert!(check_program(&parse(ok).unwrap()).is_ok());
    let bad = "concept B g : A # Nat endc concept A f : Nat endc true";
    let r = check_program(&parse(bad).unwrap());
    assert_eq!(codes(&r), vec![(DiagCode::DeclIllFormed, id!("g"))]);
}

#[test]
fn models_may_use_earlier_models() {
    let src = "concept C f : Nat endc
               model M1 of C f = 2 endm
               model M2 of C f = succ M1::f endm
               (\\c#C. c::f) # M2";
    let p = parse(src).unwrap();
    let checked = check_program(&p).unwrap();
    assert_eq!(checked.main_ty, Ty::Nat);
    assert_eq!(check_program_ref(&p), Ok(Ty::Nat));
    let r = check_program(&parse(&src.replace("M1::f", "M2::f")).unwrap());
    assert_eq!(codes(&r), vec![(DiagCode::UnboundReference, id!("M2"))]);
}

#[test]
fn reference_pipeline_agrees_on_examples() {
    for src in [
        CMONOID,
        "true",
        "concept C endc concept C endc true",
        "concept C f : Nat f : Bool endc 1",
        "concept C f : Nat endc model M of C g = 1 endm M::f",
        "concept C a : Nat b : Nat endc model M of C a = b b = 1 endm x",
        "model M of Nope f = 1 endm (\\c#Nope. 1) # M",
    ] {
        let p = parse(src).unwrap();
        let fast = check_program(&p).map(|c| c.main_ty);
        let slow = check_program_ref(&p);
        assert_eq!(fast.clone().ok(), slow.clone().ok(), "{src}");
        assert_eq!(codes(&fast), codes(&slow), "{src}");
    }
}

#[test]
fn weakening_with_unused_binding() {
    let ct = cmonoid_ct();
    let mt = ModelTable::default();
    let t = term("\\c#CMonoid. c::op c::neutral 1");
    let base = type_of(&ct, &mt, &TyCtx::new(), &t).unwrap();
    let wider = TyCtx::new().with(id!("unused"), VarBinding::TermVar(Ty::Bool));
    assert_eq!(type_of(&ct, &mt, &wider, &t), Ok(base));
}
