//! New amalgamation categories from old ones: sums, products (whose sequence
//! categories are tensor products), slices over a sequence, and the
//! subcategory generated by a sequence.

use std::collections::BTreeSet;

use serde::Serialize;

use super::BObject;
use crate::amalgam::{ACategory, Amalgam};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tagged<L, R> {
    Left(L),
    Right(R),
}

/// Disjoint union of two categories; its sequence category is the sum of the
/// two sequence categories.
#[derive(Clone, Debug)]
pub struct SumCategory<A1, A2> {
    pub left: A1,
    pub right: A2,
}

impl<A1: ACategory, A2: ACategory> SumCategory<A1, A2> {
    pub fn new(left: A1, right: A2) -> Self {
        SumCategory { left, right }
    }
}

fn mismatch<T>() -> Result<T> {
    Err(Error::TypeMismatch(
        "summands of a sum category do not mix".into(),
    ))
}

impl<A1: ACategory, A2: ACategory> ACategory for SumCategory<A1, A2> {
    type Object = Tagged<A1::Object, A2::Object>;
    type Morphism = Tagged<A1::Morphism, A2::Morphism>;

    fn name(&self) -> String {
        format!("sum({}, {})", self.left.name(), self.right.name())
    }

    fn source(&self, f: &Self::Morphism) -> Self::Object {
        match f {
            Tagged::Left(m) => Tagged::Left(self.left.source(m)),
            Tagged::Right(m) => Tagged::Right(self.right.source(m)),
        }
    }

    fn target(&self, f: &Self::Morphism) -> Self::Object {
        match f {
            Tagged::Left(m) => Tagged::Left(self.left.target(m)),
            Tagged::Right(m) => Tagged::Right(self.right.target(m)),
        }
    }

    fn size(&self, x: &Self::Object) -> usize {
        match x {
            Tagged::Left(o) => self.left.size(o),
            Tagged::Right(o) => self.right.size(o),
        }
    }

    fn objects(&self, max_size: usize) -> Result<Vec<Self::Object>> {
        let mut out: Vec<Self::Object> = self
            .left
            .objects(max_size)?
            .into_iter()
            .map(Tagged::Left)
            .chain(self.right.objects(max_size)?.into_iter().map(Tagged::Right))
            .collect();
        out.sort_by_key(|o| self.size(o));
        Ok(out)
    }

    fn hom(&self, x: &Self::Object, y: &Self::Object) -> Result<Vec<Self::Morphism>> {
        Ok(match (x, y) {
            (Tagged::Left(a), Tagged::Left(b)) => {
                self.left.hom(a, b)?.into_iter().map(Tagged::Left).collect()
            }
            (Tagged::Right(a), Tagged::Right(b)) => self
                .right
                .hom(a, b)?
                .into_iter()
                .map(Tagged::Right)
                .collect(),
            _ => Vec::new(),
        })
    }

    fn identity(&self, x: &Self::Object) -> Self::Morphism {
        match x {
            Tagged::Left(o) => Tagged::Left(self.left.identity(o)),
            Tagged::Right(o) => Tagged::Right(self.right.identity(o)),
        }
    }

    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism> {
        match (g, f) {
            (Tagged::Left(g), Tagged::Left(f)) => Ok(Tagged::Left(self.left.compose(g, f)?)),
            (Tagged::Right(g), Tagged::Right(f)) => Ok(Tagged::Right(self.right.compose(g, f)?)),
            _ => mismatch(),
        }
    }

    fn is_iso(&self, f: &Self::Morphism) -> bool {
        match f {
            Tagged::Left(m) => self.left.is_iso(m),
            Tagged::Right(m) => self.right.is_iso(m),
        }
    }

    fn inverse(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        match f {
            Tagged::Left(m) => self.left.inverse(m).map(Tagged::Left),
            Tagged::Right(m) => self.right.inverse(m).map(Tagged::Right),
        }
    }

    fn initial_set(&self) -> Result<Vec<Self::Object>> {
        Ok(self
            .left
            .initial_set()?
            .into_iter()
            .map(Tagged::Left)
            .chain(self.right.initial_set()?.into_iter().map(Tagged::Right))
            .collect())
    }

    fn canonical(&self, x: &Self::Object) -> (Self::Object, Self::Morphism) {
        match x {
            Tagged::Left(o) => {
                let (r, m) = self.left.canonical(o);
                (Tagged::Left(r), Tagged::Left(m))
            }
            Tagged::Right(o) => {
                let (r, m) = self.right.canonical(o);
                (Tagged::Right(r), Tagged::Right(m))
            }
        }
    }

    fn amalgamation_set(
        &self,
        b: &Self::Morphism,
        c: &Self::Morphism,
    ) -> Result<Vec<Amalgam<Self::Object, Self::Morphism>>> {
        match (b, c) {
            (Tagged::Left(b), Tagged::Left(c)) => Ok(self
                .left
                .amalgamation_set(b, c)?
                .into_iter()
                .map(|am| Amalgam {
                    apex: Tagged::Left(am.apex),
                    left: Tagged::Left(am.left),
                    right: Tagged::Left(am.right),
                })
                .collect()),
            (Tagged::Right(b), Tagged::Right(c)) => Ok(self
                .right
                .amalgamation_set(b, c)?
                .into_iter()
                .map(|am| Amalgam {
                    apex: Tagged::Right(am.apex),
                    left: Tagged::Right(am.left),
                    right: Tagged::Right(am.right),
                })
                .collect()),
            _ => mismatch(),
        }
    }
}

/// The product of two categories. Sizes add. The sequence category over it
/// is the tensor product of the two sequence categories.
#[derive(Clone, Debug)]
pub struct ProductCategory<A1, A2> {
    pub first: A1,
    pub second: A2,
}

impl<A1: ACategory, A2: ACategory> ProductCategory<A1, A2> {
    pub fn new(first: A1, second: A2) -> Self {
        ProductCategory { first, second }
    }
}

impl<A1: ACategory, A2: ACategory> ACategory for ProductCategory<A1, A2> {
    type Object = (A1::Object, A2::Object);
    type Morphism = (A1::Morphism, A2::Morphism);

    fn name(&self) -> String {
        format!("product({}, {})", self.first.name(), self.second.name())
    }

    fn source(&self, f: &Self::Morphism) -> Self::Object {
        (self.first.source(&f.0), self.second.source(&f.1))
    }

    fn target(&self, f: &Self::Morphism) -> Self::Object {
        (self.first.target(&f.0), self.second.target(&f.1))
    }

    fn size(&self, x: &Self::Object) -> usize {
        self.first.size(&x.0) + self.second.size(&x.1)
    }

    fn objects(&self, max_size: usize) -> Result<Vec<Self::Object>> {
        let ones = self.first.objects(max_size)?;
        let twos = self.second.objects(max_size)?;
        let mut out = Vec::new();
        for a in &ones {
            for b in &twos {
                if self.first.size(a) + self.second.size(b) <= max_size {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out.sort_by_key(|o| self.size(o));
        Ok(out)
    }

    fn hom(&self, x: &Self::Object, y: &Self::Object) -> Result<Vec<Self::Morphism>> {
        let ones = self.first.hom(&x.0, &y.0)?;
        if ones.is_empty() {
            return Ok(Vec::new());
        }
        let twos = self.second.hom(&x.1, &y.1)?;
        Ok(ones
            .iter()
            .flat_map(|f| twos.iter().map(move |g| (f.clone(), g.clone())))
            .collect())
    }

    fn identity(&self, x: &Self::Object) -> Self::Morphism {
        (self.first.identity(&x.0), self.second.identity(&x.1))
    }

    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism> {
        Ok((
            self.first.compose(&g.0, &f.0)?,
            self.second.compose(&g.1, &f.1)?,
        ))
    }

    fn is_iso(&self, f: &Self::Morphism) -> bool {
        self.first.is_iso(&f.0) && self.second.is_iso(&f.1)
    }

    fn inverse(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        Some((self.first.inverse(&f.0)?, self.second.inverse(&f.1)?))
    }

    fn initial_set(&self) -> Result<Vec<Self::Object>> {
        let ones = self.first.initial_set()?;
        let twos = self.second.initial_set()?;
        Ok(ones
            .iter()
            .flat_map(|a| twos.iter().map(move |b| (a.clone(), b.clone())))
            .collect())
    }

    fn canonical(&self, x: &Self::Object) -> (Self::Object, Self::Morphism) {
        let (r1, m1) = self.first.canonical(&x.0);
        let (r2, m2) = self.second.canonical(&x.1);
        ((r1, r2), (m1, m2))
    }

    fn amalgamation_set(
        &self,
        b: &Self::Morphism,
        c: &Self::Morphism,
    ) -> Result<Vec<Amalgam<Self::Object, Self::Morphism>>> {
        let ones = self.first.amalgamation_set(&b.0, &c.0)?;
        if ones.is_empty() {
            return Ok(Vec::new());
        }
        let twos = self.second.amalgamation_set(&b.1, &c.1)?;
        let mut out = Vec::with_capacity(ones.len() * twos.len());
        for p in &ones {
            for q in &twos {
                out.push(Amalgam {
                    apex: (p.apex.clone(), q.apex.clone()),
                    left: (p.left.clone(), q.left.clone()),
                    right: (p.right.clone(), q.right.clone()),
                });
            }
        }
        Ok(out)
    }
}

/// An atom over the base: the base atom it lies over, and the underlying
/// morphism from that base atom.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SliceObject<O, M> {
    pub over: usize,
    pub object: O,
    pub structure: M,
}

/// Atoms over a fixed sequence `S`; its sequence category is the category of
/// objects over `S`.
#[derive(Clone, Debug)]
pub struct SliceCategory<A: ACategory> {
    cat: A,
    base: BObject<A::Object>,
}

/// A morphism of atoms over the base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SliceMorphism<O, M> {
    pub source: SliceObject<O, M>,
    pub target: SliceObject<O, M>,
    pub map: M,
}

type SObj<A> = SliceObject<<A as ACategory>::Object, <A as ACategory>::Morphism>;
type SMor<A> = SliceMorphism<<A as ACategory>::Object, <A as ACategory>::Morphism>;

impl<A: ACategory> SliceCategory<A> {
    pub fn new(cat: A, base: BObject<A::Object>) -> Self {
        SliceCategory { cat, base }
    }

    pub fn base(&self) -> &BObject<A::Object> {
        &self.base
    }

    /// Representative and an isomorphism of the underlying objects.
    fn normalize(&self, x: &SObj<A>) -> Result<(SObj<A>, A::Morphism)> {
        let (rep, theta) = self.cat.canonical(&x.object);
        let moved = self.cat.compose(&theta, &x.structure)?;
        let mut best: Option<(A::Morphism, A::Morphism)> = None;
        for alpha in self.cat.hom(&rep, &rep)? {
            let s = self.cat.compose(&alpha, &moved)?;
            if best.as_ref().is_none_or(|(b, _)| &s < b) {
                let iso = self.cat.compose(&alpha, &theta)?;
                best = Some((s, iso));
            }
        }
        let (structure, iso) = best.unwrap_or((moved, theta));
        Ok((
            SliceObject {
                over: x.over,
                object: rep,
                structure,
            },
            iso,
        ))
    }
}

impl<A: ACategory> ACategory for SliceCategory<A> {
    type Object = SObj<A>;
    type Morphism = SMor<A>;

    fn name(&self) -> String {
        format!("slice({} over {:?})", self.cat.name(), self.base.atoms)
    }

    fn source(&self, f: &SMor<A>) -> SObj<A> {
        f.source.clone()
    }

    fn target(&self, f: &SMor<A>) -> SObj<A> {
        f.target.clone()
    }

    fn size(&self, x: &SObj<A>) -> usize {
        self.cat.size(&x.object)
    }

    fn objects(&self, max_size: usize) -> Result<Vec<SObj<A>>> {
        let mut out: BTreeSet<(usize, SObj<A>)> = BTreeSet::new();
        for (j, s) in self.base.atoms.iter().enumerate() {
            for x in self.cat.objects(max_size)? {
                for phi in self.cat.hom(s, &x)? {
                    let o = SliceObject {
                        over: j,
                        object: x.clone(),
                        structure: phi,
                    };
                    let (rep, _) = self.normalize(&o)?;
                    out.insert((self.size(&rep), rep));
                }
            }
        }
        Ok(out.into_iter().map(|(_, o)| o).collect())
    }

    fn hom(&self, x: &SObj<A>, y: &SObj<A>) -> Result<Vec<SMor<A>>> {
        if x.over != y.over {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for h in self.cat.hom(&x.object, &y.object)? {
            if self.cat.compose(&h, &x.structure)? == y.structure {
                out.push(SliceMorphism {
                    source: x.clone(),
                    target: y.clone(),
                    map: h,
                });
            }
        }
        Ok(out)
    }

    fn identity(&self, x: &SObj<A>) -> SMor<A> {
        SliceMorphism {
            source: x.clone(),
            target: x.clone(),
            map: self.cat.identity(&x.object),
        }
    }

    fn compose(&self, g: &SMor<A>, f: &SMor<A>) -> Result<SMor<A>> {
        if f.target != g.source {
            return Err(Error::TypeMismatch(
                "slice morphisms are not composable".into(),
            ));
        }
        Ok(SliceMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            map: self.cat.compose(&g.map, &f.map)?,
        })
    }

    fn is_iso(&self, f: &SMor<A>) -> bool {
        self.cat.is_iso(&f.map)
    }

    fn inverse(&self, f: &SMor<A>) -> Option<SMor<A>> {
        Some(SliceMorphism {
            source: f.target.clone(),
            target: f.source.clone(),
            map: self.cat.inverse(&f.map)?,
        })
    }

    fn initial_set(&self) -> Result<Vec<SObj<A>>> {
        self.base
            .atoms
            .iter()
            .enumerate()
            .map(|(j, s)| {
                let o = SliceObject {
                    over: j,
                    object: s.clone(),
                    structure: self.cat.identity(s),
                };
                Ok(self.normalize(&o)?.0)
            })
            .collect()
    }

    fn canonical(&self, x: &SObj<A>) -> (SObj<A>, SMor<A>) {
        match self.normalize(x) {
            Ok((rep, iso)) => (
                rep.clone(),
                SliceMorphism {
                    source: x.clone(),
                    target: rep,
                    map: iso,
                },
            ),
            Err(_) => (x.clone(), self.identity(x)),
        }
    }

    fn amalgamation_set(&self, b: &SMor<A>, c: &SMor<A>) -> Result<Vec<Amalgam<SObj<A>, SMor<A>>>> {
        if b.source != c.source {
            return Err(Error::TypeMismatch(
                "the span legs need a common source".into(),
            ));
        }
        let mut out = Vec::new();
        for am in self.cat.amalgamation_set(&b.map, &c.map)? {
            let apex = SliceObject {
                over: b.source.over,
                object: am.apex.clone(),
                structure: self.cat.compose(&am.left, &b.target.structure)?,
            };
            out.push(Amalgam {
                left: SliceMorphism {
                    source: b.target.clone(),
                    target: apex.clone(),
                    map: am.left,
                },
                right: SliceMorphism {
                    source: c.target.clone(),
                    target: apex.clone(),
                    map: am.right,
                },
                apex,
            });
        }
        out.sort();
        Ok(out)
    }
}

/// The full subcategory on the atoms of the powers of a fixed sequence,
/// listed up to a size bound.
#[derive(Clone, Debug)]
pub struct GeneratedCategory<A: ACategory> {
    cat: A,
    members: BTreeSet<A::Object>,
    bound: usize,
}

/// Collects the atoms of `X^0, X^1, ...` of size `<= bound`.
pub fn generated_subcategory<A: ACategory>(
    cat: A,
    x: &BObject<A::Object>,
    bound: usize,
) -> Result<GeneratedCategory<A>> {
    let init = cat.initial_set()?;
    let mut members: BTreeSet<A::Object> = init.iter().cloned().collect();
    let gens: Vec<A::Object> = x.atoms.iter().map(|o| cat.canonical(o).0).collect();
    members.extend(gens.iter().filter(|o| cat.size(o) <= bound).cloned());
    loop {
        let mut fresh = Vec::new();
        for s in &members {
            let fs = cat.initial_morphism(s)?;
            for g in &gens {
                let fg = cat.initial_morphism(g)?;
                if cat.source(&fs) != cat.source(&fg) {
                    continue;
                }
                for am in cat.amalgamation_set(&fs, &fg)? {
                    if cat.size(&am.apex) <= bound && !members.contains(&am.apex) {
                        fresh.push(am.apex);
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        members.extend(fresh);
    }
    Ok(GeneratedCategory {
        cat,
        members,
        bound,
    })
}

impl<A: ACategory> GeneratedCategory<A> {
    pub fn members(&self) -> &BTreeSet<A::Object> {
        &self.members
    }

    fn check(&self, x: &A::Object) -> Result<()> {
        let rep = self.cat.canonical(x).0;
        if self.cat.size(&rep) > self.bound {
            return Err(Error::CapExceeded {
                what: "generated subcategory".into(),
                requested: self.cat.size(&rep),
                cap: self.bound,
            });
        }
        if !self.members.contains(&rep) {
            return Err(Error::InvalidStructure(format!(
                "{x:?} is not in the generated subcategory"
            )));
        }
        Ok(())
    }
}

impl<A: ACategory> ACategory for GeneratedCategory<A> {
    type Object = A::Object;
    type Morphism = A::Morphism;

    fn name(&self) -> String {
        format!("generated({})", self.cat.name())
    }

    fn source(&self, f: &A::Morphism) -> A::Object {
        self.cat.source(f)
    }

    fn target(&self, f: &A::Morphism) -> A::Object {
        self.cat.target(f)
    }

    fn size(&self, x: &A::Object) -> usize {
        self.cat.size(x)
    }

    fn objects(&self, max_size: usize) -> Result<Vec<A::Object>> {
        if max_size > self.bound {
            return Err(Error::CapExceeded {
                what: "generated subcategory".into(),
                requested: max_size,
                cap: self.bound,
            });
        }
        let mut out: Vec<A::Object> = self
            .members
            .iter()
            .filter(|o| self.cat.size(o) <= max_size)
            .cloned()
            .collect();
        out.sort_by_key(|o| self.cat.size(o));
        Ok(out)
    }

    fn hom(&self, x: &A::Object, y: &A::Object) -> Result<Vec<A::Morphism>> {
        self.check(x)?;
        self.check(y)?;
        self.cat.hom(x, y)
    }

    fn identity(&self, x: &A::Object) -> A::Morphism {
        self.cat.identity(x)
    }

    fn compose(&self, g: &A::Morphism, f: &A::Morphism) -> Result<A::Morphism> {
        self.cat.compose(g, f)
    }

    fn is_iso(&self, f: &A::Morphism) -> bool {
        self.cat.is_iso(f)
    }

    fn inverse(&self, f: &A::Morphism) -> Option<A::Morphism> {
        self.cat.inverse(f)
    }

    fn initial_set(&self) -> Result<Vec<A::Object>> {
        self.cat.initial_set()
    }

    fn canonical(&self, x: &A::Object) -> (A::Object, A::Morphism) {
        self.cat.canonical(x)
    }

    fn amalgamation_set(
        &self,
        b: &A::Morphism,
        c: &A::Morphism,
    ) -> Result<Vec<Amalgam<A::Object, A::Morphism>>> {
        self.cat.amalgamation_set(b, c)
    }

    fn has_amalgam(&self, b: &A::Morphism, c: &A::Morphism) -> Result<bool> {
        self.cat.has_amalgam(b, c)
    }

    fn nontrivial_self_amalgam(
        &self,
        f: &A::Morphism,
    ) -> Result<Option<Amalgam<A::Object, A::Morphism>>> {
        self.cat.nontrivial_self_amalgam(f)
    }
}
