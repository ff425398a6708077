//! Finite relational structures over a fixed signature.
//!
//! Ground sets are always `{0, .., n-1}`. Each relation is stored as a bit set
//! indexed by the base-`n` encoding of its tuples, so the stored tuple order is
//! lexicographic and equality is structural.
//!
//! Morphisms are embeddings in the strong sense: injective maps that preserve
//! *and* reflect every relation, i.e. maps identifying the source with an
//! induced substructure of the target.

mod canon;
mod json;

use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

pub use canon::{are_isomorphic, automorphisms, canonical_form, Canonical};
pub use json::{EmbeddingJson, StructureJson, SymbolJson};

use crate::error::{Error, Result};

/// Largest number of tuple slots a single relation may address.
const MAX_TUPLE_SLOTS: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of relation symbols with their arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(
        symbols: impl IntoIterator<Item = (S, usize)>,
    ) -> Result<Arc<Self>> {
        let symbols: Vec<Symbol> = symbols
            .into_iter()
            .map(|(name, arity)| Symbol {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, s) in symbols.iter().enumerate() {
            if s.arity == 0 {
                return Err(Error::InvalidSignature(format!(
                    "relation {:?} has arity 0",
                    s.name
                )));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::InvalidSignature(format!(
                    "duplicate relation name {:?}",
                    s.name
                )));
            }
        }
        Ok(Arc::new(Signature { symbols }))
    }

    pub fn empty() -> Arc<Self> {
        Arc::new(Signature { symbols: vec![] })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

/// The tuples of one relation on a ground set of size `n`, as a bit set over
/// the `n^arity` possible tuples.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleSet {
    arity: usize,
    n: usize,
    bits: Vec<u64>,
}

impl TupleSet {
    fn empty(arity: usize, n: usize) -> Result<Self> {
        let slots = slot_count(n, arity)?;
        Ok(TupleSet {
            arity,
            n,
            bits: vec![0; slots.div_ceil(64)],
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    fn encode(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &x| acc * self.n + x)
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = idx % self.n;
            idx /= self.n;
        }
        t
    }

    #[inline]
    fn contains_index(&self, idx: usize) -> bool {
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    #[inline]
    pub fn contains(&self, t: &[usize]) -> bool {
        debug_assert_eq!(t.len(), self.arity);
        self.contains_index(self.encode(t))
    }

    fn insert(&mut self, t: &[usize]) {
        let idx = self.encode(t);
        self.bits[idx / 64] |= 1 << (idx % 64);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Tuples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.bits.iter().enumerate().flat_map(move |(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| self.decode(w * 64 + b))
        })
    }
}

impl fmt::Debug for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn slot_count(n: usize, arity: usize) -> Result<usize> {
    let mut slots: usize = 1;
    for _ in 0..arity {
        slots = slots
            .checked_mul(n)
            .filter(|&s| s <= MAX_TUPLE_SLOTS)
            .ok_or_else(|| {
                Error::InvalidStructure(format!(
                    "{n}^{arity} tuple slots exceed the supported maximum"
                ))
            })?;
    }
    Ok(slots)
}

#[derive(PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Inner {
    signature: Arc<Signature>,
    size: usize,
    relations: Vec<TupleSet>,
}

/// A finite relational structure. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure(Arc<Inner>);

impl Structure {
    /// Builds a structure from explicit tuple lists, one list per signature entry.
    pub fn new(
        signature: Arc<Signature>,
        size: usize,
        relations: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if relations.len() != signature.len() {
            return Err(Error::InvalidStructure(format!(
                "expected {} relations, got {}",
                signature.len(),
                relations.len()
            )));
        }
        let mut b = StructureBuilder::new(signature, size)?;
        for (r, tuples) in relations.into_iter().enumerate() {
            for t in tuples {
                b.add(r, &t)?;
            }
        }
        Ok(b.build())
    }

    pub fn empty(signature: Arc<Signature>, size: usize) -> Result<Self> {
        Ok(StructureBuilder::new(signature, size)?.build())
    }

    /// A structure over the empty signature.
    pub fn set(size: usize) -> Self {
        Structure::empty(Signature::empty(), size).expect("empty signature")
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.0.signature
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn relation(&self, r: usize) -> &TupleSet {
        &self.0.relations[r]
    }

    pub fn relations(&self) -> &[TupleSet] {
        &self.0.relations
    }

    #[inline]
    pub fn holds(&self, r: usize, t: &[usize]) -> bool {
        self.0.relations[r].contains(t)
    }

    pub fn tuple_count(&self) -> usize {
        self.0.relations.iter().map(TupleSet::len).sum()
    }

    /// Applies a relabeling `perm[old] = new` of the ground set.
    pub fn relabel(&self, perm: &[usize]) -> Structure {
        debug_assert!(is_bijection(perm, self.size()));
        let mut b = StructureBuilder::new(self.signature().clone(), self.size())
            .expect("same size as an existing structure");
        for (r, rel) in self.relations().iter().enumerate() {
            for t in rel.iter() {
                let image: Vec<usize> = t.iter().map(|&x| perm[x]).collect();
                b.rels[r].insert(&image);
            }
        }
        b.build()
    }

    /// Converts into a builder holding a copy of the relations.
    pub fn to_builder(&self) -> StructureBuilder {
        StructureBuilder {
            signature: self.signature().clone(),
            size: self.size(),
            rels: self.0.relations.clone(),
        }
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Structure(n={}", self.size())?;
        for (sym, rel) in self.signature().symbols().iter().zip(self.relations()) {
            write!(f, "; {}:", sym.name)?;
            for t in rel.iter() {
                write!(f, " {t:?}")?;
            }
        }
        write!(f, ")")
    }
}

/// Incremental construction of a [`Structure`].
#[derive(Clone, Debug)]
pub struct StructureBuilder {
    signature: Arc<Signature>,
    size: usize,
    rels: Vec<TupleSet>,
}

impl StructureBuilder {
    pub fn new(signature: Arc<Signature>, size: usize) -> Result<Self> {
        let rels = signature
            .symbols()
            .iter()
            .map(|s| TupleSet::empty(s.arity, size))
            .collect::<Result<_>>()?;
        Ok(StructureBuilder {
            signature,
            size,
            rels,
        })
    }

    pub fn add(&mut self, r: usize, t: &[usize]) -> Result<&mut Self> {
        let sym =
            self.signature.symbols().get(r).ok_or_else(|| {
                Error::InvalidStructure(format!("relation index {r} out of range"))
            })?;
        if t.len() != sym.arity {
            return Err(Error::InvalidStructure(format!(
                "tuple {t:?} does not have arity {} of {:?}",
                sym.arity, sym.name
            )));
        }
        if let Some(&x) = t.iter().find(|&&x| x >= self.size) {
            return Err(Error::IndexOutOfRange {
                index: x,
                size: self.size,
            });
        }
        self.rels[r].insert(t);
        Ok(self)
    }

    pub fn add_named(&mut self, name: &str, t: &[usize]) -> Result<&mut Self> {
        let r = self
            .signature
            .index_of(name)
            .ok_or_else(|| Error::InvalidStructure(format!("no relation named {name:?}")))?;
        self.add(r, t)
    }

    pub fn holds(&self, r: usize, t: &[usize]) -> bool {
        self.rels[r].contains(t)
    }

    pub fn build(self) -> Structure {
        Structure(Arc::new(Inner {
            signature: self.signature,
            size: self.size,
            relations: self.rels,
        }))
    }
}

pub(crate) fn is_bijection(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter()
        .all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

fn is_injective(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.iter()
        .all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// An embedding `source -> target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    source: Structure,
    target: Structure,
    map: Vec<usize>,
}

impl Embedding {
    /// Validates and wraps a candidate map.
    pub fn new(source: Structure, target: Structure, map: Vec<usize>) -> Result<Self> {
        if !is_embedding(&map, &source, &target)? {
            return Err(Error::InvalidMap(format!(
                "{map:?} is not an embedding of {source:?} into {target:?}"
            )));
        }
        Ok(Embedding {
            source,
            target,
            map,
        })
    }

    pub(crate) fn new_unchecked(source: Structure, target: Structure, map: Vec<usize>) -> Self {
        debug_assert!(is_embedding(&map, &source, &target).unwrap_or(false));
        Embedding {
            source,
            target,
            map,
        }
    }

    pub fn identity(x: &Structure) -> Self {
        Embedding {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.size()).collect(),
        }
    }

    pub fn source(&self) -> &Structure {
        &self.source
    }

    pub fn target(&self) -> &Structure {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Embedding) -> Result<Embedding> {
        if first.target != self.source {
            return Err(Error::TypeMismatch(
                "composing embeddings with mismatched middle structure".into(),
            ));
        }
        Ok(Embedding {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size()
    }

    pub fn inverse(&self) -> Option<Embedding> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Some(Embedding {
            source: self.target.clone(),
            target: self.source.clone(),
            map: inv,
        })
    }

    /// Sorted image of the ground set.
    pub fn image(&self) -> Vec<usize> {
        let mut im = self.map.clone();
        im.sort_unstable();
        im
    }
}

fn check_same_signature(x: &Structure, y: &Structure) -> Result<()> {
    if x.signature() != y.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{:?} vs {:?}",
            x.signature().symbols(),
            y.signature().symbols()
        )));
    }
    Ok(())
}

/// Calls `f` on every tuple of length `arity` over `{0..=top}` that mentions `top`.
fn for_each_tuple_touching(arity: usize, top: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut t = vec![0; arity];
    loop {
        if t.contains(&top) && !f(&t) {
            return false;
        }
        let mut k = arity;
        loop {
            if k == 0 {
                return true;
            }
            k -= 1;
            if t[k] < top {
                t[k] += 1;
                for slot in &mut t[k + 1..] {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Checks that extending a partial map by its last entry keeps every relation
/// preserved and reflected on tuples mentioning the new point.
fn extends_consistently(x: &Structure, y: &Structure, partial: &[usize]) -> bool {
    let top = partial.len() - 1;
    let mut image = Vec::new();
    for (r, sym) in x.signature().symbols().iter().enumerate() {
        let ok = for_each_tuple_touching(sym.arity, top, |t| {
            image.clear();
            image.extend(t.iter().map(|&i| partial[i]));
            x.holds(r, t) == y.holds(r, &image)
        });
        if !ok {
            return false;
        }
    }
    true
}

/// Whether `map` is an embedding of `x` into `y`.
pub fn is_embedding(map: &[usize], x: &Structure, y: &Structure) -> Result<bool> {
    check_same_signature(x, y)?;
    if map.len() != x.size() {
        return Err(Error::InvalidMap(format!(
            "map has length {}, source has size {}",
            map.len(),
            x.size()
        )));
    }
    if let Some(&bad) = map.iter().find(|&&v| v >= y.size()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            size: y.size(),
        });
    }
    if !is_injective(map, y.size()) {
        return Ok(false);
    }
    Ok((1..=map.len()).all(|k| extends_consistently(x, y, &map[..k])))
}

/// Visits every embedding map `x -> y` in lexicographic order until `visit` breaks.
pub fn for_each_embedding<B>(
    x: &Structure,
    y: &Structure,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> Result<Option<B>> {
    check_same_signature(x, y)?;
    if x.size() > y.size() {
        return Ok(None);
    }
    let mut partial = Vec::with_capacity(x.size());
    let mut used = vec![false; y.size()];
    Ok(search(x, y, &mut partial, &mut used, &mut visit))
}

fn search<B>(
    x: &Structure,
    y: &Structure,
    partial: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
) -> Option<B> {
    if partial.len() == x.size() {
        return match visit(partial) {
            ControlFlow::Break(b) => Some(b),
            ControlFlow::Continue(()) => None,
        };
    }
    for v in 0..y.size() {
        if used[v] {
            continue;
        }
        partial.push(v);
        if extends_consistently(x, y, partial) {
            used[v] = true;
            let found = search(x, y, partial, used, visit);
            used[v] = false;
            if found.is_some() {
                partial.pop();
                return found;
            }
        }
        partial.pop();
    }
    None
}

/// All embeddings `x -> y`, in lexicographic order of their maps.
pub fn embeddings(x: &Structure, y: &Structure) -> Result<Vec<Embedding>> {
    let mut out = Vec::new();
    for_each_embedding::<()>(x, y, |m| {
        out.push(Embedding {
            source: x.clone(),
            target: y.clone(),
            map: m.to_vec(),
        });
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Whether some embedding `x -> y` exists.
pub fn embeds(x: &Structure, y: &Structure) -> Result<bool> {
    Ok(for_each_embedding(x, y, |_| ControlFlow::Break(()))?.is_some())
}

/// The substructure induced on `subset` (element `k` of the result is
/// `subset[k]`), together with the inclusion embedding.
pub fn induced_substructure(y: &Structure, subset: &[usize]) -> Result<(Structure, Embedding)> {
    if let Some(&bad) = subset.iter().find(|&&v| v >= y.size()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            size: y.size(),
        });
    }
    if !is_injective(subset, y.size()) {
        return Err(Error::InvalidMap(format!("{subset:?} repeats an index")));
    }
    let k = subset.len();
    let mut b = StructureBuilder::new(y.signature().clone(), k)?;
    let mut image = Vec::new();
    for (r, sym) in y.signature().symbols().iter().enumerate() {
        let mut t = vec![0; sym.arity];
        if k == 0 {
            continue;
        }
        loop {
            image.clear();
            image.extend(t.iter().map(|&i| subset[i]));
            if y.holds(r, &image) {
                b.rels[r].insert(&t);
            }
            let mut p = sym.arity;
            let mut done = true;
            while p > 0 {
                p -= 1;
                if t[p] + 1 < k {
                    t[p] += 1;
                    for slot in &mut t[p + 1..] {
                        *slot = 0;
                    }
                    done = false;
                    break;
                }
            }
            if done {
                break;
            }
        }
    }
    let sub = b.build();
    let inc = Embedding {
        source: sub.clone(),
        target: y.clone(),
        map: subset.to_vec(),
    };
    Ok((sub, inc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
        let sig = Signature::new([("edge", 2)]).unwrap();
        let mut b = StructureBuilder::new(sig, n).unwrap();
        for &(u, v) in edges {
            b.add(0, &[u, v]).unwrap();
            b.add(0, &[v, u]).unwrap();
        }
        b.build()
    }

    #[test]
    fn signature_rejects_duplicates_and_nullary() {
        assert!(Signature::new([("r", 2), ("r", 1)]).is_err());
        assert!(Signature::new([("r", 0)]).is_err());
    }

    #[test]
    fn identity_is_embedding() {
        let x = graph(3, &[(0, 1)]);
        assert!(is_embedding(&[0, 1, 2], &x, &x).unwrap());
    }

    #[test]
    fn constant_map_is_not_embedding() {
        let x = Structure::set(2);
        let y = Structure::set(3);
        assert!(!is_embedding(&[1, 1], &x, &y).unwrap());
    }

    #[test]
    fn out_of_range_map_is_an_error() {
        let x = Structure::set(2);
        let y = Structure::set(2);
        assert!(matches!(
            is_embedding(&[0, 5], &x, &y),
            Err(Error::IndexOutOfRange { index: 5, .. })
        ));
        assert!(is_embedding(&[0], &x, &y).is_err());
    }

    #[test]
    fn reflection_is_required() {
        // a non-edge may not land on an edge
        let x = graph(2, &[]);
        let y = graph(2, &[(0, 1)]);
        assert!(!is_embedding(&[0, 1], &x, &y).unwrap());
        assert!(embeddings(&x, &y).unwrap().is_empty());
    }

    #[test]
    fn empty_source_has_one_embedding() {
        let y = graph(3, &[(0, 1), (1, 2)]);
        let x = Structure::empty(y.signature().clone(), 0).unwrap();
        assert_eq!(embeddings(&x, &y).unwrap().len(), 1);
    }

    #[test]
    fn point_into_set() {
        for n in 0..6 {
            assert_eq!(
                embeddings(&Structure::set(1), &Structure::set(n))
                    .unwrap()
                    .len(),
                n
            );
        }
    }

    #[test]
    fn embeddings_are_lexicographic() {
        let all = embeddings(&Structure::set(2), &Structure::set(3)).unwrap();
        let maps: Vec<_> = all.iter().map(|e| e.map().to_vec()).collect();
        let mut sorted = maps.clone();
        sorted.sort();
        assert_eq!(maps, sorted);
        assert_eq!(maps.len(), 6);
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let x = Structure::set(1);
        let y = graph(2, &[]);
        assert!(matches!(
            embeddings(&x, &y),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn induced_substructure_edges() {
        let y = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let (sub, inc) = induced_substructure(&y, &[1, 2, 3]).unwrap();
        assert_eq!(sub, graph(3, &[(0, 1), (1, 2)]));
        assert_eq!(inc.map(), &[1, 2, 3]);
        let (empty, _) = induced_substructure(&y, &[]).unwrap();
        assert_eq!(empty.size(), 0);
        let (all, _) = induced_substructure(&y, &[0, 1, 2, 3]).unwrap();
        assert_eq!(all, y);
        assert!(induced_substructure(&y, &[4]).is_err());
        assert!(induced_substructure(&y, &[1, 1]).is_err());
    }

    #[test]
    fn composition_of_embeddings_is_embedding() {
        let x = graph(2, &[(0, 1)]);
        let y = graph(3, &[(0, 1)]);
        let z = graph(4, &[(2, 3), (0, 1)]);
        for f in embeddings(&x, &y).unwrap() {
            for g in embeddings(&y, &z).unwrap() {
                let h = g.after(&f).unwrap();
                assert!(is_embedding(h.map(), &x, &z).unwrap());
            }
        }
    }

    #[test]
    fn tuple_iteration_is_sorted() {
        let x = graph(3, &[(2, 0), (1, 0)]);
        let tuples: Vec<_> = x.relation(0).iter().collect();
        assert_eq!(tuples, vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![2, 0]]);
    }
}
