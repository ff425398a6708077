//! Amalgamation sets, self-amalgamations and the bounded AP / JEP /
//! A-category checks, over an abstract interface.

mod permgroups;
mod structures;

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

pub use permgroups::{
    PermGroupMorphism, PermGroupObject, PermutationGroupCategory, PERM_APEX_CAP, PERM_OBJECT_CAP,
};
pub use structures::ClassCategory;

use crate::error::Result;

/// A cocone `left: B -> apex`, `right: C -> apex` over a span `B <- A -> C`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Amalgam<O, M> {
    pub apex: O,
    pub left: M,
    pub right: M,
}

/// A category with a finite initial set and finite amalgamation sets, in
/// which every morphism is a monomorphism.
///
/// Objects are assumed to be canonical representatives of their
/// isomorphism classes whenever they come out of [`ACategory::objects`],
/// [`ACategory::canonical`] or an amalgamation set.
pub trait ACategory: Send + Sync {
    type Object: Clone + Eq + Ord + Hash + Debug + Send + Sync;
    type Morphism: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn name(&self) -> String;
    fn source(&self, f: &Self::Morphism) -> Self::Object;
    fn target(&self, f: &Self::Morphism) -> Self::Object;
    /// A size that never decreases along morphisms and is preserved by isomorphisms.
    fn size(&self, x: &Self::Object) -> usize;
    /// Canonical representatives of all objects of size `<= max_size`, by size.
    fn objects(&self, max_size: usize) -> Result<Vec<Self::Object>>;
    fn hom(&self, x: &Self::Object, y: &Self::Object) -> Result<Vec<Self::Morphism>>;
    fn identity(&self, x: &Self::Object) -> Self::Morphism;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism>;
    fn is_iso(&self, f: &Self::Morphism) -> bool;
    fn inverse(&self, f: &Self::Morphism) -> Option<Self::Morphism>;
    fn initial_set(&self) -> Result<Vec<Self::Object>>;
    /// The canonical representative of `x` and an isomorphism `x -> rep`.
    fn canonical(&self, x: &Self::Object) -> (Self::Object, Self::Morphism);
    /// Minimal amalgams of `b: A -> B`, `c: A -> C`, one per cocone-isomorphism
    /// class, in a deterministic order.
    fn amalgamation_set(
        &self,
        b: &Self::Morphism,
        c: &Self::Morphism,
    ) -> Result<Vec<Amalgam<Self::Object, Self::Morphism>>>;

    fn has_amalgam(&self, b: &Self::Morphism, c: &Self::Morphism) -> Result<bool> {
        Ok(!self.amalgamation_set(b, c)?.is_empty())
    }

    /// Some self-amalgamation of `f` other than `(id, id)`, if one exists.
    fn nontrivial_self_amalgam(
        &self,
        f: &Self::Morphism,
    ) -> Result<Option<Amalgam<Self::Object, Self::Morphism>>> {
        Ok(self
            .amalgamation_set(f, f)?
            .into_iter()
            .find(|am| !is_trivial_self_amalgam(self, am)))
    }

    fn are_isomorphic(&self, x: &Self::Object, y: &Self::Object) -> bool {
        self.canonical(x).0 == self.canonical(y).0
    }

    /// The unique morphism into `x` from a member of the initial set.
    fn initial_morphism(&self, x: &Self::Object) -> Result<Self::Morphism> {
        for i in self.initial_set()? {
            if let Some(f) = self.hom(&i, x)?.into_iter().next() {
                return Ok(f);
            }
        }
        Err(crate::Error::Consistency(format!(
            "no initial-set member maps to {x:?}"
        )))
    }
}

pub fn is_trivial_self_amalgam<A: ACategory + ?Sized>(
    cat: &A,
    am: &Amalgam<A::Object, A::Morphism>,
) -> bool {
    am.left == am.right && cat.is_iso(&am.left)
}

pub fn self_amalgamations<A: ACategory + ?Sized>(
    cat: &A,
    f: &A::Morphism,
) -> Result<Vec<Amalgam<A::Object, A::Morphism>>> {
    cat.amalgamation_set(f, f)
}

/// `f` is an epimorphism of the A-category iff its only self-amalgamation is the trivial one.
pub fn is_epimorphism_in_a<A: ACategory + ?Sized>(cat: &A, f: &A::Morphism) -> Result<bool> {
    Ok(self_amalgamations(cat, f)?.len() == 1)
}

/// Outcome of a bounded check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "lowercase")]
pub enum Verdict<W> {
    Pass,
    Counterexample(W),
}

impl<W> Verdict<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Pass => None,
            Verdict::Counterexample(w) => Some(w),
        }
    }
}

/// A non-isomorphism with only the trivial self-amalgamation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpiWitness<O, M> {
    pub x: O,
    pub y: O,
    pub f: M,
}

/// A span with no amalgam.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanWitness<O, M> {
    pub a: O,
    pub b: O,
    pub c: O,
    pub left: M,
    pub right: M,
}

/// Checks that every non-isomorphism `f: X -> Y` with `|Y| <= n_max` has a
/// nontrivial self-amalgamation, i.e. that no non-isomorphism is epimorphic.
pub fn is_a_category<A: ACategory + ?Sized>(
    cat: &A,
    n_max: usize,
) -> Result<Verdict<EpiWitness<A::Object, A::Morphism>>> {
    let objects = cat.objects(n_max)?;
    for y in &objects {
        for x in objects.iter().filter(|x| cat.size(x) <= cat.size(y)) {
            for f in cat.hom(x, y)? {
                if cat.is_iso(&f) {
                    continue;
                }
                if cat.nontrivial_self_amalgam(&f)?.is_none() {
                    return Ok(Verdict::Counterexample(EpiWitness {
                        x: x.clone(),
                        y: y.clone(),
                        f,
                    }));
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Every endomorphism among objects of size `<= n_max` is an isomorphism.
pub fn endomorphisms_are_isos<A: ACategory + ?Sized>(cat: &A, n_max: usize) -> Result<bool> {
    for x in cat.objects(n_max)? {
        if cat.hom(&x, &x)?.iter().any(|f| !cat.is_iso(f)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that every span `B <- A -> C` with `|B|, |C| <= n_max` has an
/// amalgam.
///
/// Spans are visited with the shared part `A` largest first, then `B` in
/// listing order and `C` in reverse listing order, so the reported witness
/// has the largest failing overlap and pairs extensions from opposite ends of
/// the listing.
pub fn has_amalgamation_property<A: ACategory + ?Sized>(
    cat: &A,
    n_max: usize,
) -> Result<Verdict<SpanWitness<A::Object, A::Morphism>>> {
    let objects = cat.objects(n_max)?;
    let mut shared: Vec<&A::Object> = objects.iter().collect();
    shared.sort_by_key(|a| std::cmp::Reverse(cat.size(a)));
    for a in shared {
        for b_obj in objects.iter().filter(|b| cat.size(b) >= cat.size(a)) {
            let bs = cat.hom(a, b_obj)?;
            if bs.is_empty() {
                continue;
            }
            for c_obj in objects.iter().rev().filter(|c| cat.size(c) >= cat.size(a)) {
                let cs = cat.hom(a, c_obj)?;
                for b in &bs {
                    for c in &cs {
                        if !cat.has_amalgam(b, c)? {
                            return Ok(Verdict::Counterexample(SpanWitness {
                                a: a.clone(),
                                b: b_obj.clone(),
                                c: c_obj.clone(),
                                left: b.clone(),
                                right: c.clone(),
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Checks that every two objects of size `<= n_max` map into a common object.
pub fn has_joint_embedding<A: ACategory + ?Sized>(
    cat: &A,
    n_max: usize,
) -> Result<Verdict<(A::Object, A::Object)>> {
    let objects = cat.objects(n_max)?;
    let into: Vec<A::Morphism> = objects
        .iter()
        .map(|x| cat.initial_morphism(x))
        .collect::<Result<_>>()?;
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate().skip(i) {
            let (fx, fy) = (&into[i], &into[j]);
            if cat.source(fx) != cat.source(fy) || !cat.has_amalgam(fx, fy)? {
                return Ok(Verdict::Counterexample((x.clone(), y.clone())));
            }
        }
    }
    Ok(Verdict::Pass)
}
