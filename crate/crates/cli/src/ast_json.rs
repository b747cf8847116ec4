//! JSON encoding of the AST for `dump-ast --format json`.

use cstlc_core::{Program, Term, Ty};
use serde_json::{json, Value};

pub fn ty(t: &Ty) -> Value {
    match t {
        Ty::Bool => json!({ "tag": "Bool" }),
        Ty::Nat => json!({ "tag": "Nat" }),
        Ty::Arrow(d, c) => json!({ "tag": "Arrow", "dom": ty(d), "cod": ty(c) }),
        Ty::ConceptPrm(c, b) => json!({ "tag": "ConceptPrm", "concept": c.as_str(), "body": ty(b) }),
    }
}

pub fn term(t: &Term) -> Value {
    match t {
        Term::Var(x) => json!({ "tag": "Var", "name": x.as_str() }),
        Term::Abs(x, a, b) => json!({ "tag": "Abs", "var": x.as_str(), "ty": ty(a), "body": term(b) }),
        Term::App(f, a) => json!({ "tag": "App", "fun": term(f), "arg": term(a) }),
        Term::CAbs(c, k, b) => json!({ "tag": "CAbs", "var": c.as_str(), "concept": k.as_str(), "body": term(b) }),
        Term::MApp(e, m) => json!({ "tag": "MApp", "fun": term(e), "model": m.as_str() }),
        Term::CInvk(r, f) => json!({ "tag": "CInvk", "receiver": r.as_str(), "member": f.as_str() }),
        Term::True => json!({ "tag": "True" }),
        Term::False => json!({ "tag": "False" }),
        Term::If(c, a, b) => json!({ "tag": "If", "cond": term(c), "then": term(a), "else": term(b) }),
        // Numerals are unbounded, so they travel as decimal strings.
        Term::Nat(n) => json!({ "tag": "Nat", "value": n.to_string() }),
        Term::Succ(a) => json!({ "tag": "Succ", "arg": term(a) }),
        Term::Pred(a) => json!({ "tag": "Pred", "arg": term(a) }),
        Term::IsZero(a) => json!({ "tag": "IsZero", "arg": term(a) }),
        Term::Plus(a, b) => json!({ "tag": "Plus", "lhs": term(a), "rhs": term(b) }),
        Term::Let(x, a, b) => json!({ "tag": "Let", "var": x.as_str(), "bound": term(a), "body": term(b) }),
    }
}

pub fn program(p: &Program) -> Value {
    let concepts: Vec<Value> = p
        .concepts
        .iter()
        .map(|c| {
            let members: Vec<Value> =
                c.members.iter().map(|(n, t)| json!({ "name": n.as_str(), "ty": ty(t) })).collect();
            json!({ "name": c.name.as_str(), "members": members })
        })
        .collect();
    let models: Vec<Value> = p
        .models
        .iter()
        .map(|m| {
            let members: Vec<Value> =
                m.members.iter().map(|(n, t)| json!({ "name": n.as_str(), "body": term(t) })).collect();
            json!({ "name": m.name.as_str(), "concept": m.concept.as_str(), "members": members })
        })
        .collect();
    json!({ "concepts": concepts, "models": models, "main": term(&p.main) })
}
