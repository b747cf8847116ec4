//! Identifiers, raw declaration lists and finite maps.

use alloc::collections::{btree_map, BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::borrow::Borrow;
use core::fmt;

/// A lexical identifier: `[A-Za-z_][A-Za-z0-9_']*`.
///
/// Cloning is cheap (the text is shared). Ordering is by text.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidIdent(pub String);

impl fmt::Display for InvalidIdent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid identifier {:?}", self.0)
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl Ident {
    pub fn new(text: &str) -> Result<Ident, InvalidIdent> {
        let mut chars = text.chars();
        match chars.next() {
            Some(c) if is_ident_start(c) && chars.all(is_ident_continue) => {
                Ok(Ident(Arc::from(text)))
            }
            _ => Err(InvalidIdent(String::from(text))),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The same name with a trailing prime.
    pub fn primed(&self) -> Ident {
        let mut s = String::with_capacity(self.0.len() + 1);
        s.push_str(&self.0);
        s.push('\'');
        Ident(Arc::from(s))
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl core::ops::Deref for Ident {
    type Target = str;

    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Ident {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Builds an identifier from a literal; panics if it is not lexically valid.
#[macro_export]
macro_rules! id {
    ($s:expr) => {
        $crate::ident::Ident::new($s).expect("valid identifier literal")
    };
}

/// A raw list of named declarations in source order. Duplicate names are
/// allowed; checking is what rules them out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclList<V> {
    pub entries: Vec<(Ident, V)>,
}

impl<V> DeclList<V> {
    pub fn new() -> Self {
        DeclList { entries: Vec::new() }
    }

    pub fn push(&mut self, name: Ident, payload: V) {
        self.entries.push((name, payload));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, (Ident, V)> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &Ident> + '_ {
        self.entries.iter().map(|(n, _)| n)
    }
}

impl<V> Default for DeclList<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V> From<Vec<(Ident, V)>> for DeclList<V> {
    fn from(entries: Vec<(Ident, V)>) -> Self {
        DeclList { entries }
    }
}

impl<V> FromIterator<(Ident, V)> for DeclList<V> {
    fn from_iter<I: IntoIterator<Item = (Ident, V)>>(iter: I) -> Self {
        DeclList { entries: iter.into_iter().collect() }
    }
}

impl<'a, V> IntoIterator for &'a DeclList<V> {
    type Item = &'a (Ident, V);
    type IntoIter = core::slice::Iter<'a, (Ident, V)>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// A finite map with unique keys, iterated in ascending key order.
#[derive(Clone, PartialEq, Eq)]
pub struct FinMap<V> {
    inner: BTreeMap<Ident, V>,
}

impl<V> FinMap<V> {
    pub fn new() -> Self {
        FinMap { inner: BTreeMap::new() }
    }

    pub fn get(&self, key: &str) -> Option<&V> {
        self.inner.get(key)
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.inner.contains_key(key)
    }

    /// Inserts or replaces, returning the previous payload.
    pub fn insert(&mut self, key: Ident, value: V) -> Option<V> {
        self.inner.insert(key, value)
    }

    /// Inserts only if `key` is unbound. Returns whether it inserted.
    pub fn insert_if_absent(&mut self, key: Ident, value: V) -> bool {
        match self.inner.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(value);
                true
            }
            btree_map::Entry::Occupied(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, Ident, V> {
        self.inner.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, Ident, V> {
        self.inner.keys()
    }

    pub fn values(&self) -> btree_map::Values<'_, Ident, V> {
        self.inner.values()
    }
}

impl<V> Default for FinMap<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: fmt::Debug> fmt::Debug for FinMap<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.inner.iter()).finish()
    }
}

impl<'a, V> IntoIterator for &'a FinMap<V> {
    type Item = (&'a Ident, &'a V);
    type IntoIter = btree_map::Iter<'a, Ident, V>;

    fn into_iter(self) -> Self::IntoIter {
        self.inner.iter()
    }
}

/// Names that repeat an earlier name, one entry per repeated occurrence,
/// in source order.
pub fn duplicate_ids<'a, I>(ids: I) -> Vec<Ident>
where
    I: IntoIterator<Item = &'a Ident>,
{
    let mut seen = BTreeSet::new();
    ids.into_iter()
        .filter(|id| !seen.insert(id.as_str()))
        .cloned()
        .collect()
}

/// True iff no identifier occurs twice.
pub fn ids_are_unique<'a, I>(ids: I) -> bool
where
    I: IntoIterator<Item = &'a Ident>,
{
    let mut seen = BTreeSet::new();
    ids.into_iter().all(|id| seen.insert(id.as_str()))
}

/// Payload of the first entry named `name`.
pub fn list_assoc_lookup<'a, V>(decls: &'a DeclList<V>, name: &str) -> Option<&'a V> {
    decls
        .entries
        .iter()
        .find(|(n, _)| n.as_str() == name)
        .map(|(_, v)| v)
}

/// Converts a declaration list into a map. When a name repeats, the first
/// binding wins, so lookups agree with [`list_assoc_lookup`].
pub fn map_from_list<V: Clone>(decls: &DeclList<V>) -> FinMap<V> {
    let mut map = FinMap::new();
    for (name, payload) in &decls.entries {
        map.insert_if_absent(name.clone(), payload.clone());
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn pairwise_unique(ids: &[Ident]) -> bool {
        for i in 0..ids.len() {
            for j in 0..ids.len() {
                if i != j && ids[i] == ids[j] {
                    return false;
                }
            }
        }
        true
    }

    fn decls(pairs: &[(&str, i32)]) -> DeclList<i32> {
        pairs.iter().map(|(n, v)| (id!(n), *v)).collect()
    }

    #[test]
    fn ident_lexical_rule() {
        assert!(Ident::new("x").is_ok());
        assert!(Ident::new("_a1'").is_ok());
        assert!(Ident::new("Foo_bar''").is_ok());
        assert!(Ident::new("").is_err());
        assert!(Ident::new("1x").is_err());
        assert!(Ident::new("'x").is_err());
        assert!(Ident::new("a-b").is_err());
        assert_eq!(id!("a").primed().as_str(), "a'");
    }

    #[test]
    fn uniqueness_examples() {
        assert!(ids_are_unique(&[]));
        assert!(ids_are_unique(&[id!("a"), id!("b"), id!("c")]));
        assert!(!ids_are_unique(&[id!("a"), id!("b"), id!("a")]));
        assert_eq!(
            duplicate_ids(&[id!("a"), id!("a"), id!("b"), id!("a")]),
            vec![id!("a"), id!("a")]
        );
    }

    #[test]
    fn assoc_lookup_examples() {
        assert_eq!(list_assoc_lookup(&decls(&[]), "x"), None);
        assert_eq!(list_assoc_lookup(&decls(&[("a", 1), ("b", 2)]), "b"), Some(&2));
        assert_eq!(list_assoc_lookup(&decls(&[("a", 1), ("a", 9)]), "a"), Some(&1));
    }

    #[test]
    fn map_from_list_examples() {
        assert!(map_from_list(&decls(&[])).is_empty());

        let m = map_from_list(&decls(&[("a", 1), ("b", 2)]));
        assert_eq!(m.len(), 2);
        assert_eq!(m.get("a"), Some(&1));
        assert_eq!(m.get("b"), Some(&2));

        let m = map_from_list(&decls(&[("a", 1), ("a", 9)]));
        assert_eq!(m.len(), 1);
        assert_eq!(m.get("a"), Some(&1));
    }

    #[test]
    fn iteration_is_ascending() {
        let m = map_from_list(&decls(&[("c", 1), ("a", 2), ("b", 3)]));
        let keys: Vec<&str> = m.keys().map(Ident::as_str).collect();
        assert_eq!(keys, ["a", "b", "c"]);
    }

    fn arb_decls() -> impl Strategy<Value = DeclList<u8>> {
        proptest::collection::vec(("[a-j]", 0u8..4), 0..=50)
            .prop_map(|v| v.into_iter().map(|(n, d)| (id!(&n), d)).collect())
    }

    proptest! {
        #[test]
        fn map_bindings_come_from_list(ds in arb_decls()) {
            let m = map_from_list(&ds);
            for (n, d) in &m {
                prop_assert!(ds.iter().any(|(n2, d2)| n2 == n && d2 == d));
            }
        }

        #[test]
        fn map_lookup_agrees_with_first_match(ds in arb_decls(), probe in "[a-l]") {
            let m = map_from_list(&ds);
            prop_assert_eq!(m.get(&probe), list_assoc_lookup(&ds, &probe));
        }

        #[test]
        fn uniqueness_agrees_with_pairwise(ds in arb_decls()) {
            let ids: Vec<Ident> = ds.names().cloned().collect();
            prop_assert_eq!(ids_are_unique(&ids), pairwise_unique(&ids));
            prop_assert_eq!(duplicate_ids(&ids).is_empty(), pairwise_unique(&ids));
        }

        #[test]
        fn unique_names_keep_every_entry(ds in arb_decls()) {
            if ids_are_unique(ds.names()) {
                prop_assert_eq!(map_from_list(&ds).len(), ds.len());
            }
        }
    }
}
