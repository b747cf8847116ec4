//! Random program generators for property and acceptance tests.
//!
//! [`arbitrary_program`] produces syntactically valid programs with no
//! regard for typing, for parser round-trips. [`typed_program`] produces
//! programs that are well-typed by construction, then injects faults with
//! a configurable probability so that a batch mixes accepted and rejected
//! programs.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::ident::{DeclList, Ident};
use crate::syntax::{ConceptDef, ModelDef, Program, Term, Ty};

fn ident(s: &str) -> Ident {
    Ident::new(s).expect("generator pools hold valid identifiers")
}

fn pick<R: Rng + ?Sized>(rng: &mut R, pool: &[&str]) -> Ident {
    ident(pool.choose(rng).expect("non-empty pool"))
}

fn numeral<R: Rng + ?Sized>(rng: &mut R) -> BigUint {
    match rng.gen_range(0..10) {
        0 => BigUint::from(rng.gen::<u64>()) * BigUint::from(rng.gen::<u64>()),
        1..=3 => BigUint::from(rng.gen_range(0u64..1000)),
        _ => BigUint::from(rng.gen_range(0u64..4)),
    }
}

// ---------------------------------------------------------------------------
// Syntax-only generation

const VARS: [&str; 7] = ["x", "y", "z", "f", "c", "x'", "_t0"];
const CONCEPTS: [&str; 3] = ["C", "Monoid", "D_1"];
const MODELS: [&str; 3] = ["M", "MAdd", "N'"];
const MEMBERS: [&str; 4] = ["op", "unit", "f", "g"];

/// A random type of at most `depth` levels.
pub fn arbitrary_ty<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Ty {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen() { Ty::Bool } else { Ty::Nat };
    }
    if rng.gen_bool(0.7) {
        Ty::arrow(arbitrary_ty(rng, depth - 1), arbitrary_ty(rng, depth - 1))
    } else {
        Ty::concept_prm(pick(rng, &CONCEPTS), arbitrary_ty(rng, depth - 1))
    }
}

/// A random term of at most `depth` levels, every constructor reachable.
pub fn arbitrary_term<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.15) {
        return match rng.gen_range(0..5) {
            0 => Term::True,
            1 => Term::False,
            2 => Term::Nat(numeral(rng)),
            3 => Term::Var(pick(rng, &VARS)),
            _ => Term::CInvk(pick(rng, &VARS), pick(rng, &MEMBERS)),
        };
    }
    let d = depth - 1;
    let sub = |rng: &mut R| Box::new(arbitrary_term(rng, d));
    match rng.gen_range(0..11) {
        0 => Term::Abs(pick(rng, &VARS), arbitrary_ty(rng, 2), sub(rng)),
        1 => Term::App(sub(rng), sub(rng)),
        2 => Term::CAbs(pick(rng, &VARS), pick(rng, &CONCEPTS), sub(rng)),
        3 => Term::MApp(sub(rng), pick(rng, &MODELS)),
        4 => Term::If(sub(rng), sub(rng), sub(rng)),
        5 => Term::Succ(sub(rng)),
        6 => Term::Pred(sub(rng)),
        7 => Term::IsZero(sub(rng)),
        8 => Term::Plus(sub(rng), sub(rng)),
        9 => Term::Let(pick(rng, &VARS), sub(rng), sub(rng)),
        _ => Term::App(sub(rng), sub(rng)),
    }
}

/// A random program with up to three concepts and models, terms of depth
/// at most `depth`.
pub fn arbitrary_program<R: Rng + ?Sized>(rng: &mut R, depth: u32) -> Program {
    let concepts = (0..rng.gen_range(0..=3))
        .map(|_| ConceptDef {
            name: pick(rng, &CONCEPTS),
            members: (0..rng.gen_range(0..=3)).map(|_| (pick(rng, &MEMBERS), arbitrary_ty(rng, 3))).collect(),
        })
        .collect();
    let models = (0..rng.gen_range(0..=3))
        .map(|_| ModelDef {
            name: pick(rng, &MODELS),
            concept: pick(rng, &CONCEPTS),
            members: (0..rng.gen_range(0..=3))
                .map(|_| (pick(rng, &MEMBERS), arbitrary_term(rng, depth.min(4))))
                .collect(),
        })
        .collect();
    Program { concepts, models, main: arbitrary_term(rng, depth) }
}

// ---------------------------------------------------------------------------
// Type-directed generation

const TVARS: [&str; 4] = ["x", "y", "z", "w"];
const CVARS: [&str; 2] = ["c", "d"];
const TCONCEPTS: [&str; 5] = ["C0", "C1", "C2", "C3", "C4"];
const TMODELS: [&str; 5] = ["M0", "M1", "M2", "M3", "M4"];
const TMEMBERS: [&str; 6] = ["f0", "f1", "f2", "f3", "f4", "f5"];

/// Knobs for [`typed_program`].
#[derive(Debug, Clone, Copy)]
pub struct TypedGenConfig {
    /// Probability of each fault injection point firing. `0.0` yields only
    /// well-typed programs.
    pub fault_rate: f64,
    /// Term depth budget before type structure is accounted for.
    pub term_depth: u32,
}

impl Default for TypedGenConfig {
    fn default() -> Self {
        TypedGenConfig { fault_rate: 0.05, term_depth: 4 }
    }
}

#[derive(Clone)]
enum Bind {
    Term(Ty),
    Concept(usize),
}

struct Env {
    concepts: Vec<(Ident, Vec<(Ident, Ty)>)>,
    /// (model name, index of its concept)
    models: Vec<(Ident, usize)>,
    fault_rate: f64,
}

impl Env {
    fn concept_index(&self, name: &Ident) -> Option<usize> {
        self.concepts.iter().position(|(n, _)| n == name)
    }
}

fn visible(gamma: &[(Ident, Bind)]) -> Vec<(Ident, Bind)> {
    let mut out: Vec<(Ident, Bind)> = Vec::new();
    for (n, b) in gamma.iter().rev() {
        if !out.iter().any(|(m, _)| m == n) {
            out.push((n.clone(), b.clone()));
        }
    }
    out
}

fn small_ty<R: Rng + ?Sized>(rng: &mut R, env: &Env, depth: u32) -> Ty {
    if depth == 0 || rng.gen_bool(0.5) {
        return if rng.gen() { Ty::Bool } else { Ty::Nat };
    }
    if !env.concepts.is_empty() && rng.gen_bool(0.25) {
        let (c, _) = env.concepts.choose(rng).expect("non-empty");
        return Ty::concept_prm(c.clone(), small_ty(rng, env, depth - 1));
    }
    Ty::arrow(small_ty(rng, env, depth - 1), small_ty(rng, env, depth - 1))
}

fn faulty_term<R: Rng + ?Sized>(rng: &mut R, ty: &Ty) -> Term {
    match rng.gen_range(0..5) {
        0 => Term::Var(ident("unbound")),
        1 => match ty {
            Ty::Bool => Term::nat(1),
            _ => Term::True,
        },
        2 => Term::app(Term::True, Term::nat(0)),
        3 => Term::CInvk(ident("c"), ident("nope")),
        _ => Term::mapp(Term::nat(0), ident("M0")),
    }
}

/// A term of type `ty` under `gamma`, barring injected faults.
fn gen_term<R: Rng + ?Sized>(rng: &mut R, env: &Env, gamma: &mut Vec<(Ident, Bind)>, ty: &Ty, depth: u32) -> Term {
    if env.fault_rate > 0.0 && rng.gen_bool(env.fault_rate) {
        return faulty_term(rng, ty);
    }

    let vis = visible(gamma);
    let vars: Vec<Term> = vis
        .iter()
        .filter_map(|(n, b)| match b {
            Bind::Term(t) if t == ty => Some(Term::Var(n.clone())),
            _ => None,
        })
        .collect();
    let mut invocations: Vec<Term> = Vec::new();
    for (n, b) in &vis {
        if let Bind::Concept(ci) = b {
            for (f, t) in &env.concepts[*ci].1 {
                if t == ty {
                    invocations.push(Term::CInvk(n.clone(), f.clone()));
                }
            }
        }
    }
    for (m, ci) in &env.models {
        for (f, t) in &env.concepts[*ci].1 {
            if t == ty {
                invocations.push(Term::CInvk(m.clone(), f.clone()));
            }
        }
    }

    if depth == 0 || rng.gen_bool(0.1) {
        if !vars.is_empty() && rng.gen_bool(0.5) {
            return vars.choose(rng).expect("non-empty").clone();
        }
        if !invocations.is_empty() && rng.gen_bool(0.5) {
            return invocations.choose(rng).expect("non-empty").clone();
        }
        return intro_form(rng, env, gamma, ty, 0);
    }

    let d = depth - 1;
    match rng.gen_range(0..12) {
        0 | 10 => {
            let c = gen_term(rng, env, gamma, &Ty::Bool, d);
            let t = gen_term(rng, env, gamma, ty, d);
            let e = gen_term(rng, env, gamma, ty, d);
            Term::if_(c, t, e)
        }
        1 => {
            let x = pick(rng, &TVARS);
            let sigma = small_ty(rng, env, 1);
            let bound = gen_term(rng, env, gamma, &sigma, d);
            gamma.push((x.clone(), Bind::Term(sigma)));
            let body = gen_term(rng, env, gamma, ty, d);
            gamma.pop();
            Term::let_(x, bound, body)
        }
        2 | 11 => {
            let sigma = small_ty(rng, env, 1);
            let f = gen_term(rng, env, gamma, &Ty::arrow(sigma.clone(), ty.clone()), d);
            let a = gen_term(rng, env, gamma, &sigma, d);
            Term::app(f, a)
        }
        3 if !env.models.is_empty() => {
            let (m, ci) = env.models.choose(rng).expect("non-empty").clone();
            let cty = Ty::concept_prm(env.concepts[ci].0.clone(), ty.clone());
            Term::mapp(gen_term(rng, env, gamma, &cty, d), m)
        }
        4 | 5 if !invocations.is_empty() => invocations.choose(rng).expect("non-empty").clone(),
        6 if !vars.is_empty() => vars.choose(rng).expect("non-empty").clone(),
        _ => intro_form(rng, env, gamma, ty, d),
    }
}

fn intro_form<R: Rng + ?Sized>(rng: &mut R, env: &Env, gamma: &mut Vec<(Ident, Bind)>, ty: &Ty, d: u32) -> Term {
    match ty {
        Ty::Bool => {
            if d > 0 && rng.gen_bool(0.3) {
                Term::iszero(gen_term(rng, env, gamma, &Ty::Nat, d - 1))
            } else if rng.gen() {
                Term::True
            } else {
                Term::False
            }
        }
        Ty::Nat => {
            if d == 0 {
                return Term::Nat(BigUint::from(rng.gen_range(0u64..10)));
            }
            match rng.gen_range(0..4) {
                0 => Term::succ(gen_term(rng, env, gamma, &Ty::Nat, d - 1)),
                1 => Term::pred(gen_term(rng, env, gamma, &Ty::Nat, d - 1)),
                2 => {
                    let a = gen_term(rng, env, gamma, &Ty::Nat, d - 1);
                    Term::plus(a, gen_term(rng, env, gamma, &Ty::Nat, d - 1))
                }
                _ => Term::Nat(BigUint::from(rng.gen_range(0u64..10))),
            }
        }
        Ty::Arrow(dom, cod) => {
            let x = pick(rng, &TVARS);
            gamma.push((x.clone(), Bind::Term((**dom).clone())));
            let body = gen_term(rng, env, gamma, cod, d);
            gamma.pop();
            Term::abs(x, (**dom).clone(), body)
        }
        Ty::ConceptPrm(c, body_ty) => {
            let ci = env.concept_index(c).expect("generated types only mention known concepts");
            let v = pick(rng, &CVARS);
            gamma.push((v.clone(), Bind::Concept(ci)));
            let body = gen_term(rng, env, gamma, body_ty, d);
            gamma.pop();
            Term::cabs(v, c.clone(), body)
        }
    }
}

/// A program that is well-typed by construction when
/// `config.fault_rate == 0.0`. At most five concepts and five models, each
/// with at most five members.
pub fn typed_program<R: Rng + ?Sized>(rng: &mut R, config: TypedGenConfig) -> Program {
    let fault = |rng: &mut R| config.fault_rate > 0.0 && rng.gen_bool(config.fault_rate);
    let mut env = Env { concepts: Vec::new(), models: Vec::new(), fault_rate: config.fault_rate };
    let mut concepts = Vec::new();

    let mut concept_names = TCONCEPTS.to_vec();
    concept_names.shuffle(rng);
    for name in concept_names.iter().take(rng.gen_range(0..=5)) {
        let mut name = ident(name);
        if fault(rng) && !concepts.is_empty() {
            name = concepts.choose(rng).map(|c: &ConceptDef| c.name.clone()).expect("non-empty");
        }
        let mut member_names = TMEMBERS.to_vec();
        member_names.shuffle(rng);
        let members: Vec<(Ident, Ty)> = member_names
            .iter()
            .take(rng.gen_range(1..=5))
            .map(|m| (ident(m), small_ty(rng, &env, 2)))
            .collect();
        let mut written = members.clone();
        if fault(rng) {
            written.push((members[0].0.clone(), Ty::Bool));
        }
        if fault(rng) {
            written[0].1 = Ty::concept_prm(ident("Unknown"), Ty::Nat);
        }
        concepts.push(ConceptDef { name: name.clone(), members: written.into_iter().collect() });
        if env.concept_index(&name).is_none() {
            env.concepts.push((name, members));
        }
    }

    let mut models = Vec::new();
    if !env.concepts.is_empty() {
        let mut model_names = TMODELS.to_vec();
        model_names.shuffle(rng);
        for name in model_names.iter().take(rng.gen_range(0..=5)) {
            let mut name = ident(name);
            if fault(rng) && !models.is_empty() {
                name = models.choose(rng).map(|m: &ModelDef| m.name.clone()).expect("non-empty");
            }
            let ci = rng.gen_range(0..env.concepts.len());
            let concept = env.concepts[ci].0.clone();

            // Member types by first occurrence, matching table semantics.
            let mut sig: Vec<(Ident, Ty)> = Vec::new();
            for (n, t) in &env.concepts[ci].1 {
                if !sig.iter().any(|(m, _)| m == n) {
                    sig.push((n.clone(), t.clone()));
                }
            }
            sig.shuffle(rng);
            if fault(rng) && sig.len() > 1 {
                sig.pop();
            }
            let mut gamma: Vec<(Ident, Bind)> = Vec::new();
            let mut members: DeclList<Term> = DeclList::new();
            for (m, t) in &sig {
                let body = if fault(rng) {
                    let other = if *t == Ty::Nat { Ty::Bool } else { Ty::Nat };
                    gen_term(rng, &env, &mut gamma, &other, config.term_depth)
                } else {
                    gen_term(rng, &env, &mut gamma, t, config.term_depth)
                };
                members.push(m.clone(), body);
                gamma.push((m.clone(), Bind::Term(t.clone())));
            }
            if fault(rng) {
                members.push(ident("extra"), Term::nat(0));
            }
            let concept = if fault(rng) { ident("Unknown") } else { concept };
            models.push(ModelDef { name: name.clone(), concept, members });
            if !env.models.iter().any(|(n, _)| *n == name) {
                env.models.push((name, ci));
            }
        }
    }

    // Mostly ground, so that main has something to compute.
    let main_ty = if rng.gen_bool(0.75) { small_ty(rng, &env, 0) } else { small_ty(rng, &env, 2) };
    let main = gen_term(rng, &env, &mut Vec::new(), &main_ty, config.term_depth);
    Program { concepts, models, main }
}

/// Maximum nesting depth of a term.
pub fn term_depth(t: &Term) -> u32 {
    match t {
        Term::Var(_) | Term::CInvk(..) | Term::True | Term::False | Term::Nat(_) => 0,
        Term::Abs(_, _, b) | Term::CAbs(_, _, b) | Term::MApp(b, _) => 1 + term_depth(b),
        Term::Succ(a) | Term::Pred(a) | Term::IsZero(a) => 1 + term_depth(a),
        Term::App(a, b) | Term::Plus(a, b) | Term::Let(_, a, b) => 1 + term_depth(a).max(term_depth(b)),
        Term::If(a, b, c) => 1 + term_depth(a).max(term_depth(b)).max(term_depth(c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval, EvalResult};
    use crate::typecheck::{check_program, reference::check_program_ref};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fault_free_programs_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let config = TypedGenConfig { fault_rate: 0.0, ..TypedGenConfig::default() };
        for _ in 0..300 {
            let p = typed_program(&mut rng, config);
            let checked = check_program(&p).unwrap_or_else(|e| panic!("{p}\n{e:?}"));
            assert_eq!(check_program_ref(&p).ok(), Some(checked.main_ty.clone()));
            assert!(!matches!(eval(&checked.models, &p.main, 1000), EvalResult::Stuck(_)), "{p}");
        }
    }

    #[test]
    fn faults_produce_rejections() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let config = TypedGenConfig { fault_rate: 0.2, ..TypedGenConfig::default() };
        let rejected = (0..300).filter(|_| check_program(&typed_program(&mut rng, config)).is_err()).count();
        assert!(rejected > 30 && rejected < 290, "{rejected}");
    }

    #[test]
    fn syntactic_generator_is_deterministic() {
        let a = arbitrary_program(&mut ChaCha8Rng::seed_from_u64(1), 4);
        let b = arbitrary_program(&mut ChaCha8Rng::seed_from_u64(1), 4);
        assert_eq!(a, b);
    }
}
