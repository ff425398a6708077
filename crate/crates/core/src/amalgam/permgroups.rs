//! Finite sets equipped with a permutation group.
//!
//! An object is `(n, H)` with `H` a subgroup of the symmetric group on
//! `{0..n}`, stored as its sorted element list and taken up to conjugation.
//! A morphism `(X, G) -> (Y, H)` is an injection `α: X -> Y` such that every
//! `h` in `H` preserves `im α` and restricts to an element of `α G α⁻¹`
//! there; two injections that differ by an element of `G` are the same
//! morphism.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::{ACategory, Amalgam};
use crate::error::{Error, Result};
use crate::gsets::FiniteGroup;

/// Largest object accepted by [`PermutationGroupCategory::new`].
pub const PERM_OBJECT_CAP: usize = 5;
/// Largest apex that amalgamation can canonicalize.
pub const PERM_APEX_CAP: usize = 7;

type Perm = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PermGroupObject {
    pub n: usize,
    /// Sorted, containing the identity.
    pub elements: Vec<Perm>,
}

impl PermGroupObject {
    pub fn trivial(n: usize) -> Self {
        PermGroupObject {
            n,
            elements: vec![(0..n).collect()],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn contains(&self, p: &[usize]) -> bool {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(p))
            .is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PermGroupMorphism {
    pub source: PermGroupObject,
    pub target: PermGroupObject,
    /// The least injection in its class.
    pub map: Vec<usize>,
}

fn compose_perm(g: &[usize], f: &[usize]) -> Perm {
    f.iter().map(|&i| g[i]).collect()
}

fn invert(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Perm, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Injections `{0..k} -> {0..n}` in lexicographic order.
fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fn rec(k: usize, n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(k, n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(k, n, &mut cur, &mut used, &mut out);
    out
}

/// `σ H σ⁻¹`, sorted.
fn conjugate(h: &[Perm], sigma: &[usize]) -> Vec<Perm> {
    let inv = invert(sigma);
    let mut out: Vec<Perm> = h
        .iter()
        .map(|e| compose_perm(sigma, &compose_perm(e, &inv)))
        .collect();
    out.sort();
    out
}

/// The category of finite sets with permutation groups, on objects of size
/// at most `n_max`.
#[derive(Clone, Debug)]
pub struct PermutationGroupCategory {
    n_max: usize,
    /// Canonical objects by size.
    objects: Arc<Vec<Vec<PermGroupObject>>>,
    perms: Arc<Vec<Vec<Perm>>>,
}

impl PermutationGroupCategory {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max > PERM_OBJECT_CAP {
            return Err(Error::CapExceeded {
                what: "permutation group objects".into(),
                requested: n_max,
                cap: PERM_OBJECT_CAP,
            });
        }
        let perms: Vec<Vec<Perm>> = (0..=PERM_APEX_CAP).map(all_perms).collect();
        let mut cat = PermutationGroupCategory {
            n_max,
            objects: Arc::new(Vec::new()),
            perms: Arc::new(perms),
        };
        let mut objects = Vec::new();
        for n in 0..=n_max {
            let mut reps: BTreeSet<PermGroupObject> = BTreeSet::new();
            if n < 2 {
                reps.insert(PermGroupObject::trivial(n));
            } else {
                let g = FiniteGroup::symmetric(n)?;
                for class in g.subgroup_classes()? {
                    let mut elements: Vec<Perm> = class
                        .rep
                        .elements()
                        .iter()
                        .map(|&i| g.element(i).to_vec())
                        .collect();
                    elements.sort();
                    reps.insert(cat.canonical_object(&PermGroupObject { n, elements })?.0);
                }
            }
            objects.push(reps.into_iter().collect());
        }
        cat.objects = Arc::new(objects);
        Ok(cat)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// The least conjugate of the group, with a conjugating permutation.
    fn canonical_object(&self, x: &PermGroupObject) -> Result<(PermGroupObject, Perm)> {
        if x.n > PERM_APEX_CAP {
            return Err(Error::CapExceeded {
                what: "permutation group canonical form".into(),
                requested: x.n,
                cap: PERM_APEX_CAP,
            });
        }
        let mut best: Option<(Vec<Perm>, Perm)> = None;
        for sigma in &self.perms[x.n] {
            let c = conjugate(&x.elements, sigma);
            if best.as_ref().is_none_or(|(b, _)| c < *b) {
                best = Some((c, sigma.clone()));
            }
        }
        let (elements, sigma) = best.expect("a permutation");
        Ok((PermGroupObject { n: x.n, elements }, sigma))
    }

    /// The least representative of `α G`.
    fn reduce(&self, map: &[usize], source: &PermGroupObject) -> Vec<usize> {
        source
            .elements
            .iter()
            .map(|g| compose_perm(map, g))
            .min()
            .expect("the identity")
    }

    fn is_morphism(&self, map: &[usize], x: &PermGroupObject, y: &PermGroupObject) -> bool {
        let mut pos = vec![usize::MAX; y.n];
        for (i, &j) in map.iter().enumerate() {
            pos[j] = i;
        }
        y.elements.iter().all(|h| {
            let restricted: Option<Perm> = map
                .iter()
                .map(|&j| match pos[h[j]] {
                    usize::MAX => None,
                    i => Some(i),
                })
                .collect();
            restricted.is_some_and(|r| x.contains(&r))
        })
    }

    fn make(&self, x: &PermGroupObject, y: &PermGroupObject, map: &[usize]) -> PermGroupMorphism {
        PermGroupMorphism {
            source: x.clone(),
            target: y.clone(),
            map: self.reduce(map, x),
        }
    }

    /// The largest group on `{0..d}` under which `l` and `r` are morphisms.
    fn apex_group(
        &self,
        d: usize,
        b: (&PermGroupObject, &[usize]),
        c: (&PermGroupObject, &[usize]),
    ) -> PermGroupObject {
        let mut elements: Vec<Perm> = self.perms[d]
            .iter()
            .filter(|k| {
                let k = PermGroupObject {
                    n: d,
                    elements: vec![k.to_vec()],
                };
                self.is_morphism(b.1, b.0, &k) && self.is_morphism(c.1, c.0, &k)
            })
            .cloned()
            .collect();
        elements.sort();
        PermGroupObject { n: d, elements }
    }

    /// A cocone with `l` the inclusion of `B` into `{0..d}`, relabelled so
    /// the apex is canonical.
    fn cocone(
        &self,
        b: &PermGroupObject,
        c: &PermGroupObject,
        d: usize,
        r: &[usize],
    ) -> Result<Amalgam<PermGroupObject, PermGroupMorphism>> {
        let l: Vec<usize> = (0..b.n).collect();
        let k = self.apex_group(d, (b, &l), (c, r));
        let (apex, _) = self.canonical_object(&k)?;
        // any two conjugators differ by the normalizer of the apex group, so
        // the least pair of legs over all of them is an invariant
        let mut best: Option<Amalgam<PermGroupObject, PermGroupMorphism>> = None;
        for sigma in &self.perms[d] {
            if conjugate(&k.elements, sigma) != apex.elements {
                continue;
            }
            let am = Amalgam {
                left: self.make(b, &apex, &compose_perm(sigma, &l)),
                right: self.make(c, &apex, &compose_perm(sigma, r)),
                apex: apex.clone(),
            };
            if best.as_ref().is_none_or(|b| am < *b) {
                best = Some(am);
            }
        }
        Ok(best.expect("a conjugator"))
    }
}

impl ACategory for PermutationGroupCategory {
    type Object = PermGroupObject;
    type Morphism = PermGroupMorphism;

    fn name(&self) -> String {
        "finite sets with permutation groups".into()
    }

    fn source(&self, f: &PermGroupMorphism) -> PermGroupObject {
        f.source.clone()
    }

    fn target(&self, f: &PermGroupMorphism) -> PermGroupObject {
        f.target.clone()
    }

    fn size(&self, x: &PermGroupObject) -> usize {
        x.n
    }

    fn objects(&self, max_size: usize) -> Result<Vec<PermGroupObject>> {
        if max_size > self.n_max {
            return Err(Error::CapExceeded {
                what: "permutation group objects".into(),
                requested: max_size,
                cap: self.n_max,
            });
        }
        Ok(self.objects[..=max_size]
            .iter()
            .flatten()
            .cloned()
            .collect())
    }

    fn hom(&self, x: &PermGroupObject, y: &PermGroupObject) -> Result<Vec<PermGroupMorphism>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        if x.n <= y.n {
            for map in injections(x.n, y.n) {
                if self.is_morphism(&map, x, y) {
                    out.insert(self.reduce(&map, x));
                }
            }
        }
        Ok(out
            .into_iter()
            .map(|map| PermGroupMorphism {
                source: x.clone(),
                target: y.clone(),
                map,
            })
            .collect())
    }

    fn identity(&self, x: &PermGroupObject) -> PermGroupMorphism {
        PermGroupMorphism {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.n).collect(),
        }
    }

    fn compose(&self, g: &PermGroupMorphism, f: &PermGroupMorphism) -> Result<PermGroupMorphism> {
        if f.target != g.source {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {g:?} after {f:?}"
            )));
        }
        Ok(self.make(&f.source, &g.target, &compose_perm(&g.map, &f.map)))
    }

    fn is_iso(&self, f: &PermGroupMorphism) -> bool {
        f.source.n == f.target.n && f.source.order() == f.target.order()
    }

    fn inverse(&self, f: &PermGroupMorphism) -> Option<PermGroupMorphism> {
        self.is_iso(f)
            .then(|| self.make(&f.target, &f.source, &invert(&f.map)))
    }

    fn initial_set(&self) -> Result<Vec<PermGroupObject>> {
        Ok(vec![PermGroupObject::trivial(0)])
    }

    fn canonical(&self, x: &PermGroupObject) -> (PermGroupObject, PermGroupMorphism) {
        let (rep, sigma) = self
            .canonical_object(x)
            .expect("objects within the apex cap");
        let iso = self.make(x, &rep, &sigma);
        (rep, iso)
    }

    /// Every gluing of `C` onto `B` compatible with the span, up to the
    /// action of both groups and relabelling of the new points.
    fn amalgamation_set(
        &self,
        b: &PermGroupMorphism,
        c: &PermGroupMorphism,
    ) -> Result<Vec<Amalgam<PermGroupObject, PermGroupMorphism>>> {
        if b.source != c.source {
            return Err(Error::TypeMismatch(
                "span legs have different sources".into(),
            ));
        }
        let (a, bo, co) = (&b.source, &b.target, &c.target);
        let in_gamma: BTreeSet<usize> = c.map.iter().copied().collect();
        let in_beta: BTreeSet<usize> = b.map.iter().copied().collect();
        let rest_c: Vec<usize> = (0..co.n).filter(|p| !in_gamma.contains(p)).collect();
        let free_b: Vec<usize> = (0..bo.n).filter(|p| !in_beta.contains(p)).collect();

        // r ∘ γ ∘ g = β for some g in the source group
        let mut seeds: BTreeSet<Vec<usize>> = BTreeSet::new();
        for g in &a.elements {
            let mut r = vec![usize::MAX; co.n];
            for (i, &ga) in g.iter().enumerate() {
                r[c.map[ga]] = b.map[i];
            }
            seeds.insert(r);
        }

        // normal form: apply h in G_B and k in G_C, then number the new
        // points by their preimages
        let normal = |r: &[usize]| -> Vec<usize> {
            let mut best: Option<Vec<usize>> = None;
            for h in &bo.elements {
                for k in &co.elements {
                    let mut s: Vec<usize> = k
                        .iter()
                        .map(|&kc| match r[kc] {
                            p if p < bo.n => h[p],
                            p => p,
                        })
                        .collect();
                    let mut next = bo.n;
                    for v in s.iter_mut() {
                        if *v >= bo.n {
                            *v = next;
                            next += 1;
                        }
                    }
                    if best.as_ref().is_none_or(|b| s < *b) {
                        best = Some(s);
                    }
                }
            }
            best.expect("identity elements")
        };

        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for seed in &seeds {
            // each remaining point of C is glued to a free point of B or new
            let m = rest_c.len();
            let mut choice = vec![0usize; m];
            loop {
                let mut used = vec![false; free_b.len()];
                let mut ok = true;
                let mut r = seed.clone();
                let mut next = bo.n;
                for (slot, &p) in rest_c.iter().enumerate() {
                    match choice[slot] {
                        0 => {
                            r[p] = next;
                            next += 1;
                        }
                        j if !used[j - 1] => {
                            used[j - 1] = true;
                            r[p] = free_b[j - 1];
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    found.insert(normal(&r));
                }
                let mut i = 0;
                while i < m && choice[i] == free_b.len() {
                    choice[i] = 0;
                    i += 1;
                }
                if i == m {
                    break;
                }
                choice[i] += 1;
            }
        }
        let mut out: Vec<Amalgam<PermGroupObject, PermGroupMorphism>> = found
            .iter()
            .map(|r| {
                let d = bo.n + r.iter().filter(|&&p| p >= bo.n).count();
                self.cocone(bo, co, d, r)
            })
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn has_amalgam(&self, b: &PermGroupMorphism, c: &PermGroupMorphism) -> Result<bool> {
        // the disjoint gluing under the trivial group always works
        Ok(b.source == c.source)
    }

    /// A cocone `(id, σ)` on `Y` when `σ` outside `H` agrees with `α` up to
    /// `G`, else one moving a single point off the image of `f`.
    fn nontrivial_self_amalgam(
        &self,
        f: &PermGroupMorphism,
    ) -> Result<Option<Amalgam<PermGroupObject, PermGroupMorphism>>> {
        let (x, y) = (&f.source, &f.target);
        let alpha_g: BTreeSet<Vec<usize>> =
            x.elements.iter().map(|g| compose_perm(&f.map, g)).collect();
        for sigma in &self.perms[y.n] {
            if !y.contains(sigma) && alpha_g.contains(&compose_perm(sigma, &f.map)) {
                return self.cocone(y, y, y.n, sigma).map(Some);
            }
        }
        if x.n < y.n {
            let image: BTreeSet<usize> = f.map.iter().copied().collect();
            let p = (0..y.n)
                .find(|p| !image.contains(p))
                .expect("a point off the image");
            let mut r: Vec<usize> = (0..y.n).collect();
            r[p] = y.n;
            return self.cocone(y, y, y.n + 1, &r).map(Some);
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{
        endomorphisms_are_isos, has_amalgamation_property, has_joint_embedding, is_a_category,
        is_trivial_self_amalgam,
    };

    fn cat() -> PermutationGroupCategory {
        PermutationGroupCategory::new(3).unwrap()
    }

    #[test]
    fn object_counts_are_subgroup_classes() {
        let c = PermutationGroupCategory::new(4).unwrap();
        let counts: Vec<usize> = (0..=4)
            .map(|n| c.objects(n).unwrap().iter().filter(|o| o.n == n).count())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11]);
        assert!(PermutationGroupCategory::new(6).is_err());
        assert_eq!(c.initial_set().unwrap(), vec![PermGroupObject::trivial(0)]);
    }

    #[test]
    fn interface_invariants() {
        let c = cat();
        assert!(is_a_category(&c, 3).unwrap().is_pass());
        assert!(endomorphisms_are_isos(&c, 3).unwrap());
        assert!(has_amalgamation_property(&c, 2).unwrap().is_pass());
        assert!(has_joint_embedding(&c, 3).unwrap().is_pass());
        let objs = c.objects(3).unwrap();
        for x in &objs {
            assert_eq!(c.hom(&c.initial_set().unwrap()[0], x).unwrap().len(), 1);
            for y in &objs {
                for f in c.hom(x, y).unwrap() {
                    assert_eq!(c.compose(&c.identity(y), &f).unwrap(), f);
                    assert_eq!(c.compose(&f, &c.identity(x)).unwrap(), f);
                    for z in &objs {
                        for g in c.hom(y, z).unwrap() {
                            let gf = c.compose(&g, &f).unwrap();
                            assert!(c.is_morphism(&gf.map, x, z));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn self_amalgams_found_directly_are_in_the_amalgamation_set() {
        let c = cat();
        let objs = c.objects(3).unwrap();
        for x in &objs {
            for y in &objs {
                for f in c.hom(x, y).unwrap() {
                    let set = c.amalgamation_set(&f, &f).unwrap();
                    let direct = c.nontrivial_self_amalgam(&f).unwrap();
                    assert_eq!(direct.is_some(), !c.is_iso(&f));
                    assert_eq!(set.len() == 1, c.is_iso(&f));
                    if let Some(am) = direct {
                        assert!(set.contains(&am), "{am:?}");
                        assert!(!is_trivial_self_amalgam(&c, &am));
                    }
                }
            }
        }
    }

    /// Orbits of the symmetric group on an `N`-set acting on pairs of
    /// classes of injections, counted by brute force.
    fn orbit_count(y: &PermGroupObject, z: &PermGroupObject) -> usize {
        let n = y.n + z.n;
        let class = |inj: &[usize], h: &PermGroupObject| -> Vec<usize> {
            h.elements
                .iter()
                .map(|e| compose_perm(inj, e))
                .min()
                .unwrap()
        };
        let mut points: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
        for i in injections(y.n, n) {
            for j in injections(z.n, n) {
                points.insert((class(&i, y), class(&j, z)));
            }
        }
        let mut seen: BTreeSet<(Vec<usize>, Vec<usize>)> = BTreeSet::new();
        let mut orbits = 0;
        for p in &points {
            if seen.contains(p) {
                continue;
            }
            orbits += 1;
            for s in all_perms(n) {
                let q = (
                    class(&compose_perm(&s, &p.0), y),
                    class(&compose_perm(&s, &p.1), z),
                );
                seen.insert(q);
            }
        }
        orbits
    }

    #[test]
    fn amalgams_over_the_empty_set_match_orbit_counts() {
        let c = cat();
        let e = PermGroupObject::trivial(0);
        let objs = c.objects(3).unwrap();
        for y in objs.iter().filter(|o| o.n <= 2) {
            for z in objs.iter().filter(|o| o.n <= 2) {
                let (fy, fz) = (
                    c.hom(&e, y).unwrap().remove(0),
                    c.hom(&e, z).unwrap().remove(0),
                );
                let n = c.amalgamation_set(&fy, &fz).unwrap().len();
                assert_eq!(n, orbit_count(y, z), "{y:?} {z:?}");
            }
        }
    }
}
