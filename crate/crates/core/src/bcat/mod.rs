//! Finite sequences of objects of an amalgamation category, and the
//! coproduct / fiber product / quotient calculus on them.
//!
//! A morphism `X -> Y` is an index map `a` on atoms together with, for each
//! atom `X_i`, a morphism `Y_{a(i)} -> X_i` of the underlying category.

mod axioms;
mod constructions;
mod nondegenerate;
mod relation;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::amalgam::{has_amalgamation_property, ACategory, Verdict};
use crate::error::{Error, Result};

pub use axioms::{axiom_suite, AxiomReport, Check, SuiteBounds};
pub use constructions::{
    generated_subcategory, GeneratedCategory, ProductCategory, SliceCategory, SliceObject,
    SumCategory, Tagged,
};
pub use nondegenerate::{nondegeneracy_conditions, ConditionReport};
pub use relation::{EffectivityReport, Relation};

/// A finite sequence of atoms; the empty sequence is the initial object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BObject<O> {
    pub atoms: Vec<O>,
}

impl<O> BObject<O> {
    pub fn new(atoms: Vec<O>) -> Self {
        BObject { atoms }
    }

    pub fn atom(x: O) -> Self {
        BObject { atoms: vec![x] }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// `components[i]` goes from `target.atoms[a[i]]` to `source.atoms[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BMorphism<O, M> {
    pub source: BObject<O>,
    pub target: BObject<O>,
    pub a: Vec<usize>,
    pub components: Vec<M>,
}

/// A fiber product (or product) with its two projections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberProduct<O, M> {
    pub object: BObject<O>,
    pub first: BMorphism<O, M>,
    pub second: BMorphism<O, M>,
}

/// A coproduct with its two injections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coproduct<O, M> {
    pub object: BObject<O>,
    pub left: BMorphism<O, M>,
    pub right: BMorphism<O, M>,
}

/// Why a finite-sequence category fails to be non-degenerate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Degeneracy<O, M> {
    FinalNotAtomic {
        atoms: Vec<O>,
    },
    /// Atom maps `x -> z`, `y -> z` with empty fiber product, given by the
    /// underlying morphisms `left: z -> x`, `right: z -> y`.
    EmptyFiberProduct {
        x: O,
        y: O,
        z: O,
        left: M,
        right: M,
    },
}

pub type BMor<A> = BMorphism<<A as ACategory>::Object, <A as ACategory>::Morphism>;
pub type BObj<A> = BObject<<A as ACategory>::Object>;

/// All tuples choosing one entry from each list, in lexicographic order.
pub(crate) fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::with_capacity(lists.len())];
    for list in lists {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for prefix in &out {
            for item in list {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Set partitions of `0..n` as block lists, blocks ordered by least element.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// The category of finite sequences over an amalgamation category.
#[derive(Clone, Debug)]
pub struct BCat<A> {
    cat: A,
}

impl<A: ACategory> BCat<A> {
    pub fn new(cat: A) -> Self {
        BCat { cat }
    }

    pub fn inner(&self) -> &A {
        &self.cat
    }

    pub fn zero(&self) -> BObj<A> {
        BObject::new(Vec::new())
    }

    /// Builds and validates a morphism.
    pub fn morphism(
        &self,
        source: BObj<A>,
        target: BObj<A>,
        a: Vec<usize>,
        components: Vec<A::Morphism>,
    ) -> Result<BMor<A>> {
        if a.len() != source.len() || components.len() != source.len() {
            return Err(Error::InvalidMap(format!(
                "{} atoms but {} indices and {} components",
                source.len(),
                a.len(),
                components.len()
            )));
        }
        for (i, (&j, c)) in a.iter().zip(&components).enumerate() {
            if j >= target.len() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    size: target.len(),
                });
            }
            if self.cat.source(c) != target.atoms[j] || self.cat.target(c) != source.atoms[i] {
                return Err(Error::TypeMismatch(format!(
                    "component {i} does not go from target atom {j} to source atom {i}"
                )));
            }
        }
        Ok(BMorphism {
            source,
            target,
            a,
            components,
        })
    }

    pub fn identity(&self, x: &BObj<A>) -> BMor<A> {
        BMorphism {
            source: x.clone(),
            target: x.clone(),
            a: (0..x.len()).collect(),
            components: x.atoms.iter().map(|o| self.cat.identity(o)).collect(),
        }
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: &BMor<A>, f: &BMor<A>) -> Result<BMor<A>> {
        if f.target != g.source {
            return Err(Error::TypeMismatch(
                "the target of the first map is not the source of the second".into(),
            ));
        }
        let components =
            f.a.iter()
                .zip(&f.components)
                .map(|(&j, c)| self.cat.compose(c, &g.components[j]))
                .collect::<Result<_>>()?;
        Ok(BMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            a: f.a.iter().map(|&j| g.a[j]).collect(),
            components,
        })
    }

    /// The index map and components of `f`.
    pub fn factor(f: &BMor<A>) -> (Vec<usize>, Vec<A::Morphism>) {
        (f.a.clone(), f.components.clone())
    }

    /// Every morphism `x -> y`, lexicographic in `(a, components)`.
    pub fn hom(&self, x: &BObj<A>, y: &BObj<A>) -> Result<Vec<BMor<A>>> {
        let mut options = Vec::with_capacity(x.len());
        for xi in &x.atoms {
            let mut opts = Vec::new();
            for (j, yj) in y.atoms.iter().enumerate() {
                for m in self.cat.hom(yj, xi)? {
                    opts.push((j, m));
                }
            }
            options.push(opts);
        }
        Ok(cartesian(&options)
            .into_iter()
            .map(|choice| {
                let (a, components) = choice.into_iter().unzip();
                BMorphism {
                    source: x.clone(),
                    target: y.clone(),
                    a,
                    components,
                }
            })
            .collect())
    }

    pub fn is_mono(&self, f: &BMor<A>) -> bool {
        let mut seen = vec![false; f.target.len()];
        f.a.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
            && f.components.iter().all(|c| self.cat.is_iso(c))
    }

    pub fn is_epi(&self, f: &BMor<A>) -> bool {
        let hit: BTreeSet<usize> = f.a.iter().copied().collect();
        hit.len() == f.target.len()
    }

    pub fn is_iso(&self, f: &BMor<A>) -> bool {
        self.is_mono(f) && self.is_epi(f)
    }

    pub fn inverse(&self, f: &BMor<A>) -> Option<BMor<A>> {
        if !self.is_iso(f) {
            return None;
        }
        let mut a = vec![0; f.a.len()];
        for (i, &j) in f.a.iter().enumerate() {
            a[j] = i;
        }
        let components = a
            .iter()
            .map(|&i| self.cat.inverse(&f.components[i]))
            .collect::<Option<_>>()?;
        Some(BMorphism {
            source: f.target.clone(),
            target: f.source.clone(),
            a,
            components,
        })
    }

    pub fn coproduct(&self, x: &BObj<A>, y: &BObj<A>) -> Coproduct<A::Object, A::Morphism> {
        let mut atoms = x.atoms.clone();
        atoms.extend(y.atoms.iter().cloned());
        let object = BObject::new(atoms);
        let left = BMorphism {
            source: x.clone(),
            target: object.clone(),
            a: (0..x.len()).collect(),
            components: x.atoms.iter().map(|o| self.cat.identity(o)).collect(),
        };
        let right = BMorphism {
            source: y.clone(),
            target: object.clone(),
            a: (x.len()..x.len() + y.len()).collect(),
            components: y.atoms.iter().map(|o| self.cat.identity(o)).collect(),
        };
        Coproduct {
            object,
            left,
            right,
        }
    }

    /// The map `X ⊔ Y -> Z` restricting to `f` and `g`.
    pub fn copair(&self, f: &BMor<A>, g: &BMor<A>) -> Result<BMor<A>> {
        if f.target != g.target {
            return Err(Error::TypeMismatch(
                "copairing needs a common target".into(),
            ));
        }
        let mut atoms = f.source.atoms.clone();
        atoms.extend(g.source.atoms.iter().cloned());
        Ok(BMorphism {
            source: BObject::new(atoms),
            target: f.target.clone(),
            a: f.a.iter().chain(&g.a).copied().collect(),
            components: f.components.iter().chain(&g.components).cloned().collect(),
        })
    }

    /// `f ⊔ g: X ⊔ X' -> Y ⊔ Y'`.
    pub fn sum_map(&self, f: &BMor<A>, g: &BMor<A>) -> BMor<A> {
        let cs = self.coproduct(&f.source, &g.source);
        let ct = self.coproduct(&f.target, &g.target);
        let shift = f.target.len();
        BMorphism {
            source: cs.object,
            target: ct.object,
            a: f.a
                .iter()
                .copied()
                .chain(g.a.iter().map(|j| j + shift))
                .collect(),
            components: f.components.iter().chain(&g.components).cloned().collect(),
        }
    }

    /// The sequence of the initial set.
    pub fn final_object(&self) -> Result<BObj<A>> {
        Ok(BObject::new(self.cat.initial_set()?))
    }

    /// The unique morphism to the final object.
    pub fn to_final(&self, x: &BObj<A>) -> Result<BMor<A>> {
        let fin = self.final_object()?;
        let mut a = Vec::with_capacity(x.len());
        let mut components = Vec::with_capacity(x.len());
        for xi in &x.atoms {
            let mut found = Vec::new();
            for (k, i) in fin.atoms.iter().enumerate() {
                for m in self.cat.hom(i, xi)? {
                    found.push((k, m));
                }
            }
            if found.len() != 1 {
                return Err(Error::Consistency(format!(
                    "{} maps from the initial set into {xi:?}",
                    found.len()
                )));
            }
            let (k, m) = found.pop().expect("one map");
            a.push(k);
            components.push(m);
        }
        Ok(BMorphism {
            source: x.clone(),
            target: fin,
            a,
            components,
        })
    }

    /// Indices of the target atoms hit by `f`.
    pub fn image(&self, f: &BMor<A>) -> Vec<usize> {
        let hit: BTreeSet<usize> = f.a.iter().copied().collect();
        hit.into_iter().collect()
    }

    /// The inclusion `X_S -> X` of the atoms listed in `s`.
    pub fn subobject(&self, x: &BObj<A>, s: &[usize]) -> Result<BMor<A>> {
        if let Some(&bad) = s.iter().find(|&&i| i >= x.len()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                size: x.len(),
            });
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMap(format!(
                "{s:?} is not strictly increasing"
            )));
        }
        let atoms: Vec<A::Object> = s.iter().map(|&i| x.atoms[i].clone()).collect();
        Ok(BMorphism {
            components: atoms.iter().map(|o| self.cat.identity(o)).collect(),
            source: BObject::new(atoms),
            target: x.clone(),
            a: s.to_vec(),
        })
    }

    /// All index subsets of `x`, by bitmask, which lists every subset after
    /// its own subsets.
    pub fn subobjects(&self, x: &BObj<A>) -> Vec<Vec<usize>> {
        let n = x.len();
        (0u64..1 << n)
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    }

    /// `f = inclusion ∘ e` with `e: X -> im(f)` an epimorphism.
    pub fn corestrict(&self, f: &BMor<A>) -> Result<(BMor<A>, BMor<A>)> {
        let s = self.image(f);
        let inclusion = self.subobject(&f.target, &s)?;
        let e = BMorphism {
            source: f.source.clone(),
            target: inclusion.source.clone(),
            a: f.a
                .iter()
                .map(|j| s.binary_search(j).expect("image index"))
                .collect(),
            components: f.components.clone(),
        };
        Ok((inclusion, e))
    }

    /// Fiber product, atom pair by atom pair, from amalgamation sets.
    pub fn fiber_product(
        &self,
        f: &BMor<A>,
        g: &BMor<A>,
    ) -> Result<FiberProduct<A::Object, A::Morphism>> {
        if f.target != g.target {
            return Err(Error::TypeMismatch(
                "fiber product needs a common target".into(),
            ));
        }
        let mut atoms = Vec::new();
        let (mut a1, mut c1, mut a2, mut c2) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for i in 0..f.source.len() {
            for j in 0..g.source.len() {
                if f.a[i] != g.a[j] {
                    continue;
                }
                for am in self
                    .cat
                    .amalgamation_set(&f.components[i], &g.components[j])?
                {
                    atoms.push(am.apex);
                    a1.push(i);
                    c1.push(am.left);
                    a2.push(j);
                    c2.push(am.right);
                }
            }
        }
        let object = BObject::new(atoms);
        Ok(FiberProduct {
            first: BMorphism {
                source: object.clone(),
                target: f.source.clone(),
                a: a1,
                components: c1,
            },
            second: BMorphism {
                source: object.clone(),
                target: g.source.clone(),
                a: a2,
                components: c2,
            },
            object,
        })
    }

    /// `X × Y`, the fiber product over the final object.
    pub fn product(
        &self,
        x: &BObj<A>,
        y: &BObj<A>,
    ) -> Result<FiberProduct<A::Object, A::Morphism>> {
        self.fiber_product(&self.to_final(x)?, &self.to_final(y)?)
    }

    /// Every `u: w -> P` with `m ∘ u = h` for each pair `(h, m)`, where all
    /// `m` share the source `P`.
    pub fn lifts(&self, w: &BObj<A>, cone: &[(&BMor<A>, &BMor<A>)]) -> Result<Vec<BMor<A>>> {
        let p = match cone.first() {
            Some((_, m)) => m.source.clone(),
            None => return Err(Error::InvalidMap("empty cone".into())),
        };
        for (h, m) in cone {
            if m.source != p || &h.source != w || h.target != m.target {
                return Err(Error::TypeMismatch("cone legs do not match".into()));
            }
        }
        let mut options = Vec::with_capacity(w.len());
        for (wi, wo) in w.atoms.iter().enumerate() {
            let mut opts = Vec::new();
            for (pi, po) in p.atoms.iter().enumerate() {
                if cone.iter().any(|(h, m)| m.a[pi] != h.a[wi]) {
                    continue;
                }
                for phi in self.cat.hom(po, wo)? {
                    let mut ok = true;
                    for (h, m) in cone {
                        if self.cat.compose(&phi, &m.components[pi])? != h.components[wi] {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        opts.push((pi, phi));
                    }
                }
            }
            if opts.is_empty() {
                return Ok(Vec::new());
            }
            options.push(opts);
        }
        Ok(cartesian(&options)
            .into_iter()
            .map(|choice| {
                let (a, components) = choice.into_iter().unzip();
                BMorphism {
                    source: w.clone(),
                    target: p.clone(),
                    a,
                    components,
                }
            })
            .collect())
    }

    /// Every `k` with `k ∘ q = e`.
    pub fn factorizations(&self, e: &BMor<A>, q: &BMor<A>) -> Result<Vec<BMor<A>>> {
        if e.source != q.source {
            return Err(Error::TypeMismatch("maps need a common source".into()));
        }
        let (qo, eo) = (&q.target, &e.target);
        let mut options = Vec::with_capacity(qo.len());
        for (b, bo) in qo.atoms.iter().enumerate() {
            let fiber: Vec<usize> = (0..q.a.len()).filter(|&i| q.a[i] == b).collect();
            let mut opts = Vec::new();
            for (j, jo) in eo.atoms.iter().enumerate() {
                if fiber.iter().any(|&i| e.a[i] != j) {
                    continue;
                }
                for phi in self.cat.hom(jo, bo)? {
                    let mut ok = true;
                    for &i in &fiber {
                        if self.cat.compose(&q.components[i], &phi)? != e.components[i] {
                            ok = false;
                            break;
                        }
                    }
                    if ok {
                        opts.push((j, phi));
                    }
                }
            }
            if opts.is_empty() {
                return Ok(Vec::new());
            }
            options.push(opts);
        }
        Ok(cartesian(&options)
            .into_iter()
            .map(|choice| {
                let (a, components) = choice.into_iter().unzip();
                BMorphism {
                    source: qo.clone(),
                    target: eo.clone(),
                    a,
                    components,
                }
            })
            .collect())
    }

    /// Atomic subobjects, which are indexed by the atoms themselves.
    pub fn orbit_set(&self, x: &BObj<A>) -> usize {
        x.len()
    }

    pub fn orbit_map(&self, f: &BMor<A>) -> Vec<usize> {
        f.a.clone()
    }

    /// Epimorphisms out of `x`, one per isomorphism class under the target.
    ///
    /// For each partition of the atoms, each block maps onto one target atom;
    /// targets range over object representatives no larger than the block's
    /// atoms, and the component tuples are taken modulo automorphisms of the
    /// target.
    pub fn epis_out_of(&self, x: &BObj<A>) -> Result<Vec<BMor<A>>> {
        let mut out = Vec::new();
        for blocks in set_partitions(x.len()) {
            let mut per_block = Vec::with_capacity(blocks.len());
            for block in &blocks {
                let bound = block
                    .iter()
                    .map(|&i| self.cat.size(&x.atoms[i]))
                    .min()
                    .expect("blocks are nonempty");
                let mut opts = Vec::new();
                for y in self.cat.objects(bound)? {
                    let homs = block
                        .iter()
                        .map(|&i| self.cat.hom(&y, &x.atoms[i]))
                        .collect::<Result<Vec<_>>>()?;
                    if homs.iter().any(Vec::is_empty) {
                        continue;
                    }
                    let autos = self.cat.hom(&y, &y)?;
                    let mut reps: BTreeSet<Vec<A::Morphism>> = BTreeSet::new();
                    for tuple in cartesian(&homs) {
                        let mut least: Option<Vec<A::Morphism>> = None;
                        for t in &autos {
                            let moved = tuple
                                .iter()
                                .map(|c| self.cat.compose(c, t))
                                .collect::<Result<Vec<_>>>()?;
                            if least.as_ref().is_none_or(|l| &moved < l) {
                                least = Some(moved);
                            }
                        }
                        reps.insert(least.unwrap_or(tuple));
                    }
                    opts.extend(reps.into_iter().map(|r| (y.clone(), r)));
                }
                per_block.push(opts);
            }
            for choice in cartesian(&per_block) {
                let mut a = vec![0; x.len()];
                let mut components: Vec<Option<A::Morphism>> = vec![None; x.len()];
                let mut atoms = Vec::with_capacity(blocks.len());
                for (b, (block, (y, tuple))) in blocks.iter().zip(choice).enumerate() {
                    atoms.push(y);
                    for (&i, c) in block.iter().zip(tuple) {
                        a[i] = b;
                        components[i] = Some(c);
                    }
                }
                out.push(BMorphism {
                    source: x.clone(),
                    target: BObject::new(atoms),
                    a,
                    components: components
                        .into_iter()
                        .map(|c| c.expect("covered"))
                        .collect(),
                });
            }
        }
        Ok(out)
    }

    /// The equalizing epimorphism through which every other equalizing
    /// epimorphism out of the target factors.
    pub fn coequalizer(&self, f: &BMor<A>, g: &BMor<A>) -> Result<BMor<A>> {
        if f.source != g.source || f.target != g.target {
            return Err(Error::TypeMismatch(
                "coequalizer needs a parallel pair".into(),
            ));
        }
        let mut equalizing = Vec::new();
        for e in self.epis_out_of(&f.target)? {
            if self.compose(&e, f)? == self.compose(&e, g)? {
                equalizing.push(e);
            }
        }
        let mut universal = Vec::new();
        for c in &equalizing {
            let mut all = true;
            for e in &equalizing {
                if self.factorizations(e, c)?.is_empty() {
                    all = false;
                    break;
                }
            }
            if all {
                universal.push(c.clone());
            }
        }
        match universal.len() {
            1 => Ok(universal.pop().expect("one")),
            0 => Err(Error::Consistency(format!(
                "none of {} equalizing epimorphisms is universal",
                equalizing.len()
            ))),
            k => Err(Error::Consistency(format!(
                "{k} equalizing epimorphisms are universal"
            ))),
        }
    }

    /// Final object atomic, and every span of atoms of size `<= n_max` has an
    /// amalgam.
    pub fn is_nondegenerate(
        &self,
        n_max: usize,
    ) -> Result<Verdict<Degeneracy<A::Object, A::Morphism>>> {
        let fin = self.cat.initial_set()?;
        if fin.len() != 1 {
            return Ok(Verdict::Counterexample(Degeneracy::FinalNotAtomic {
                atoms: fin,
            }));
        }
        Ok(match has_amalgamation_property(&self.cat, n_max)? {
            Verdict::Pass => Verdict::Pass,
            Verdict::Counterexample(w) => Verdict::Counterexample(Degeneracy::EmptyFiberProduct {
                x: w.b,
                y: w.c,
                z: w.a,
                left: w.left,
                right: w.right,
            }),
        })
    }

    /// Every sequence of at most `max_atoms` objects of size `<= max_size`.
    pub fn probes(&self, max_size: usize, max_atoms: usize) -> Result<Vec<BObj<A>>> {
        let objs = self.cat.objects(max_size)?;
        let mut out = vec![self.zero()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_atoms {
            let mut next = Vec::new();
            for prefix in &layer {
                for o in &objs {
                    let mut v: Vec<A::Object> = prefix.clone();
                    v.push(o.clone());
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned().map(BObject::new));
            layer = next;
        }
        Ok(out)
    }
}
