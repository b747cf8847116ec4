//! Generic well-definedness checking for lists of named declarations.
//!
//! A declaration list is well-defined when its names are pairwise distinct
//! and every declaration is well-defined in a context chosen by a
//! [`CheckStrategy`]. The per-declaration predicate and the way a context
//! grows are supplied by a [`DeclChecker`].
//!
//! Each check comes in two versions. The `*_spec` functions are reference
//! oracles: quadratic list scans that follow the definition literally and
//! share no code with the efficient versions. [`check_decls`] and
//! [`check_impl_against_interface`] are what the typechecker runs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::marker::PhantomData;

use crate::diag::{CheckOutcome, Collector, DiagCode, Diagnostic};
use crate::ident::{duplicate_ids, ids_are_unique, map_from_list, DeclList, FinMap, Ident};

/// Which local declarations are visible while checking a declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStrategy {
    /// Every declaration sees only the outer context.
    Independent,
    /// Declaration `k` sees the outer context plus declarations `0..k`.
    Sequential,
    /// Every declaration sees the outer context plus all declarations.
    /// Declarations are only checked once names are known to be unique.
    Recursive,
}

impl CheckStrategy {
    pub const ALL: [CheckStrategy; 3] =
        [CheckStrategy::Independent, CheckStrategy::Sequential, CheckStrategy::Recursive];
}

/// The per-declaration predicate and context extension of a module flavour.
///
/// Both methods must be pure. Extending with distinct names must commute as
/// far as lookups of unrelated names are concerned.
pub trait DeclChecker<D> {
    type Ctx: Clone;

    fn decl_ok(&self, ctx: &Self::Ctx, name: &Ident, decl: &D) -> CheckOutcome;

    fn extend(&self, ctx: Self::Ctx, name: &Ident, decl: &D) -> Self::Ctx;
}

/// A [`DeclChecker`] assembled from two closures.
pub struct FnChecker<C, F, G> {
    decl_ok: F,
    extend: G,
    _ctx: PhantomData<fn(C) -> C>,
}

impl<C, F, G> FnChecker<C, F, G> {
    pub fn new<D>(decl_ok: F, extend: G) -> Self
    where
        F: Fn(&C, &Ident, &D) -> CheckOutcome,
        G: Fn(C, &Ident, &D) -> C,
    {
        FnChecker { decl_ok, extend, _ctx: PhantomData }
    }
}

impl<C, D, F, G> DeclChecker<D> for FnChecker<C, F, G>
where
    C: Clone,
    F: Fn(&C, &Ident, &D) -> CheckOutcome,
    G: Fn(C, &Ident, &D) -> C,
{
    type Ctx = C;

    fn decl_ok(&self, ctx: &C, name: &Ident, decl: &D) -> CheckOutcome {
        (self.decl_ok)(ctx, name, decl)
    }

    fn extend(&self, ctx: C, name: &Ident, decl: &D) -> C {
        (self.extend)(ctx, name, decl)
    }
}

fn duplicate(name: &Ident) -> Diagnostic {
    Diagnostic::new(DiagCode::DuplicateName, name.clone(), format!("`{name}` is declared more than once"))
}

/// Reference oracle for [`check_decls`].
///
/// Duplicates are found by comparing every pair; the context for each
/// declaration is rebuilt from scratch by re-scanning the list.
pub fn check_decls_spec<D, K>(
    strategy: CheckStrategy,
    checker: &K,
    ctx: &K::Ctx,
    decls: &DeclList<D>,
) -> CheckOutcome
where
    K: DeclChecker<D>,
{
    let entries = &decls.entries;
    let mut out = Collector::default();

    // NoDup: an entry is a duplicate if some earlier entry has its name.
    let mut has_dup = false;
    for j in 0..entries.len() {
        if (0..j).any(|i| entries[i].0 == entries[j].0) {
            has_dup = true;
            out.push(duplicate(&entries[j].0));
        }
    }

    if strategy == CheckStrategy::Recursive && has_dup {
        return out.finish();
    }

    for (k, (name, decl)) in entries.iter().enumerate() {
        let visible = match strategy {
            CheckStrategy::Independent => 0,
            CheckStrategy::Sequential => k,
            CheckStrategy::Recursive => entries.len(),
        };
        let mut local = ctx.clone();
        for (n, d) in &entries[..visible] {
            local = checker.extend(local, n, d);
        }
        out.absorb(checker.decl_ok(&local, name, decl));
    }
    out.finish()
}

/// Checks that names are unique and every declaration is well-defined
/// under `strategy`.
///
/// Agrees with [`check_decls_spec`] on the decision and on the multiset of
/// (code, subject) pairs; diagnostic order may differ. Runs in
/// `O(n log n)` plus one `decl_ok` call per declaration.
pub fn check_decls<D, K>(
    strategy: CheckStrategy,
    checker: &K,
    ctx: &K::Ctx,
    decls: &DeclList<D>,
) -> CheckOutcome
where
    K: DeclChecker<D>,
{
    let mut out = Collector::default();
    let unique = ids_are_unique(decls.names());
    if !unique {
        for name in duplicate_ids(decls.names()) {
            out.push(duplicate(&name));
        }
    }

    match strategy {
        CheckStrategy::Independent => {
            for (name, decl) in decls {
                out.absorb(checker.decl_ok(ctx, name, decl));
            }
        }
        CheckStrategy::Sequential => {
            let mut local = ctx.clone();
            for (name, decl) in decls {
                out.absorb(checker.decl_ok(&local, name, decl));
                local = checker.extend(local, name, decl);
            }
        }
        CheckStrategy::Recursive => {
            if unique {
                let by_name: FinMap<&D> =
                    map_from_list(&decls.iter().map(|(n, d)| (n.clone(), d)).collect());
                let mut local = ctx.clone();
                for (name, decl) in &by_name {
                    local = checker.extend(local, name, decl);
                }
                for (name, decl) in decls {
                    out.absorb(checker.decl_ok(&local, name, decl));
                }
            }
        }
    }
    out.finish()
}

/// Whether an implementation must define every interface member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverageMode {
    /// Every member must be implemented.
    Full,
    /// Members listed here have defaults and may be left out.
    Relaxed(BTreeSet<Ident>),
}

impl CoverageMode {
    fn has_default(&self, name: &Ident) -> bool {
        match self {
            CoverageMode::Full => false,
            CoverageMode::Relaxed(defaults) => defaults.contains(name),
        }
    }
}

fn missing(name: &Ident) -> Diagnostic {
    Diagnostic::new(DiagCode::MissingMember, name.clone(), format!("member `{name}` is not implemented"))
}

fn extra(name: &Ident) -> Diagnostic {
    Diagnostic::new(DiagCode::ExtraMember, name.clone(), format!("`{name}` is not a member of the interface"))
}

fn mismatch(name: &Ident) -> Diagnostic {
    Diagnostic::new(
        DiagCode::MemberTypeMismatch,
        name.clone(),
        format!("member `{name}` does not match its interface declaration"),
    )
}

/// Checks an implementation's member names against an interface.
///
/// `impl_names` must be pairwise distinct. Reports members required by
/// `mode` that are absent, implemented names the interface does not
/// declare, and implemented members for which `member_matches` fails.
pub fn check_impl_against_interface<S, F>(
    interface: &FinMap<S>,
    mode: &CoverageMode,
    impl_names: &[Ident],
    member_matches: F,
) -> CheckOutcome
where
    F: Fn(&Ident, &S) -> bool,
{
    let implemented: BTreeSet<&str> = impl_names.iter().map(Ident::as_str).collect();
    let mut out = Collector::default();
    for name in interface.keys() {
        if !implemented.contains(name.as_str()) && !mode.has_default(name) {
            out.push(missing(name));
        }
    }
    for name in impl_names {
        match interface.get(name) {
            None => out.push(extra(name)),
            Some(sig) if !member_matches(name, sig) => out.push(mismatch(name)),
            Some(_) => {}
        }
    }
    out.finish()
}

/// Reference oracle for [`check_impl_against_interface`], over the
/// interface as a plain list of (name, signature) pairs with unique names.
pub fn check_impl_against_interface_spec<S, F>(
    interface: &[(Ident, S)],
    mode: &CoverageMode,
    impl_names: &[Ident],
    member_matches: F,
) -> CheckOutcome
where
    F: Fn(&Ident, &S) -> bool,
{
    let defaults: Vec<&Ident> = match mode {
        CoverageMode::Full => Vec::new(),
        CoverageMode::Relaxed(ds) => ds.iter().collect(),
    };
    let mut out = Collector::default();
    for (name, _) in interface {
        let implemented = impl_names.contains(name);
        let defaulted = defaults.contains(&name);
        if !implemented && !defaulted {
            out.push(missing(name));
        }
    }
    for name in impl_names {
        match interface.iter().find(|(n, _)| n == name) {
            None => out.push(extra(name)),
            Some((_, sig)) => {
                if !member_matches(name, sig) {
                    out.push(mismatch(name));
                }
            }
        }
    }
    out.finish()
}
