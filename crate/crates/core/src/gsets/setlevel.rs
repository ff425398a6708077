//! The set-level functor from finite sequences of transitive G-sets to
//! G-sets, and the checks that compare the two sides.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::group::{FiniteGroup, Subgroup};
use super::gset::{self, GMap, GSet};
use super::stabilizer::StabilizerClass;
use super::transitive::{CosetMap, TransitiveCategory};
use crate::amalgam::ACategory;
use crate::bcat::{
    axiom_suite, nondegeneracy_conditions, AxiomReport, BCat, BMorphism, BObject, Check,
    ConditionReport, EffectivityReport, Relation, SuiteBounds,
};
use crate::error::{Error, Result};

pub type GObject = BObject<usize>;
pub type GMorphism = BMorphism<usize, CosetMap>;

impl TransitiveCategory {
    /// The disjoint union of the coset spaces of the atoms, with the offset
    /// of each atom.
    pub fn set_level_with_offsets(&self, x: &GObject) -> (GSet, Vec<usize>) {
        let parts: Vec<GSet> = x.atoms.iter().map(|&o| self.coset_set(o).clone()).collect();
        GSet::disjoint_union(self.group().clone(), &parts)
    }

    pub fn set_level(&self, x: &GObject) -> GSet {
        self.set_level_with_offsets(x).0
    }

    /// Sends a point of atom `i` through the G-map of component `i` into atom
    /// `a(i)`.
    pub fn set_level_map(&self, f: &GMorphism) -> GMap {
        let (source, _) = self.set_level_with_offsets(&f.source);
        let (target, offsets) = self.set_level_with_offsets(&f.target);
        let mut map = Vec::with_capacity(source.len());
        for (i, c) in f.components.iter().enumerate() {
            let off = offsets[f.a[i]];
            map.extend(self.g_map(c).map.iter().map(|p| p + off));
        }
        GMap {
            source,
            target,
            map,
        }
    }
}

fn check(name: &str, cases: usize, witness: Option<String>) -> Check {
    Check {
        name: name.to_string(),
        pass: witness.is_none(),
        cases,
        witness,
    }
}

/// `(first, second)` as a map into a set-level fiber product whose points are
/// the listed pairs.
fn pair_map(first: &GMap, second: &GMap, pairs: &GMap, pairs2: &GMap) -> Option<Vec<usize>> {
    let position: HashMap<(usize, usize), usize> = (0..pairs.source.len())
        .map(|p| ((pairs.map[p], pairs2.map[p]), p))
        .collect();
    (0..first.source.len())
        .map(|p| position.get(&(first.map[p], second.map[p])).copied())
        .collect()
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.len() == n
        && map
            .iter()
            .all(|&y| y < n && !std::mem::replace(&mut seen[y], true))
}

struct Homs<'a> {
    b: &'a BCat<TransitiveCategory>,
    objs: &'a [GObject],
    cache: HashMap<(usize, usize), Arc<Vec<GMorphism>>>,
}

impl Homs<'_> {
    fn get(&mut self, x: usize, y: usize) -> Result<Arc<Vec<GMorphism>>> {
        if let Some(h) = self.cache.get(&(x, y)) {
            return Ok(h.clone());
        }
        let h = Arc::new(self.b.hom(&self.objs[x], &self.objs[y])?);
        self.cache.insert((x, y), h.clone());
        Ok(h)
    }
}

/// The comparison of the categorical fiber product with the set-level one is
/// an equivariant bijection.
fn fiber_products_agree(
    b: &BCat<TransitiveCategory>,
    f: &GMorphism,
    g: &GMorphism,
) -> Result<bool> {
    let cat = b.inner();
    let fp = b.fiber_product(f, g)?;
    let (_, s1, s2) = gset::fiber_product(&cat.set_level_map(f), &cat.set_level_map(g))?;
    let (p1, p2) = (cat.set_level_map(&fp.first), cat.set_level_map(&fp.second));
    Ok(match pair_map(&p1, &p2, &s1, &s2) {
        Some(c) => is_bijection(&c, s1.source.len()) && p1.source.is_equivariant(&s1.source, &c),
        None => false,
    })
}

/// `q` is onto and identifies exactly the points the set-level coequalizer
/// of `f, g` identifies.
fn coequalizers_agree(
    b: &BCat<TransitiveCategory>,
    f: &GMorphism,
    g: &GMorphism,
    q: &GMorphism,
) -> Result<bool> {
    let cat = b.inner();
    let (_, sq) = gset::coequalizer(&cat.set_level_map(f), &cat.set_level_map(g))?;
    let wq = cat.set_level_map(q);
    let n = wq.source.len();
    let same_kernel =
        (0..n).all(|p| (0..n).all(|r| (wq.map[p] == wq.map[r]) == (sq.map[p] == sq.map[r])));
    Ok(wq.is_surjective() && same_kernel)
}

/// Fiber products, kernel pairs, images and coequalizers in the sequence
/// category against the set-level constructions, over sequences of at most
/// `max_atoms` atoms.
pub fn set_level_agreement(b: &BCat<TransitiveCategory>, max_atoms: usize) -> Result<Vec<Check>> {
    let cat = b.inner();
    let order = cat.group().order();
    let objs = b.probes(order, max_atoms)?;
    let mut homs = Homs {
        b,
        objs: &objs,
        cache: HashMap::new(),
    };
    let n = objs.len();

    let (mut cases, mut witness) = (0, None);
    'fp: for z in 0..n {
        for x in 0..n {
            for y in x..n {
                let (fs, gs) = (homs.get(x, z)?, homs.get(y, z)?);
                for f in fs.iter() {
                    for g in gs.iter() {
                        cases += 1;
                        if !fiber_products_agree(b, f, g)? {
                            witness = Some(format!("{f:?} and {g:?}"));
                            break 'fp;
                        }
                    }
                }
            }
        }
    }
    let fp = check("fiber_products", cases, witness);

    let (mut cases, mut witness) = (0, None);
    'kp: for x in 0..n {
        for y in 0..n {
            for f in homs.get(x, y)?.iter() {
                cases += 1;
                let r = b.kernel_pair(f)?;
                let (r1, r2) = b.relation_legs(&r)?;
                let (_, k1, k2) = gset::kernel_pair(&cat.set_level_map(f))?;
                let ok = match pair_map(&cat.set_level_map(&r1), &cat.set_level_map(&r2), &k1, &k2)
                {
                    Some(c) => is_bijection(&c, k1.source.len()),
                    None => false,
                };
                if !ok {
                    witness = Some(format!("{f:?}"));
                    break 'kp;
                }
            }
        }
    }
    let kp = check("kernel_pairs", cases, witness);

    let (mut cases, mut witness) = (0, None);
    'im: for x in 0..n {
        for y in 0..n {
            for f in homs.get(x, y)?.iter() {
                cases += 1;
                let (inc, e) = b.corestrict(f)?;
                let (wi, we) = (cat.set_level_map(&inc), cat.set_level_map(&e));
                let (_, si, _) = gset::image(&cat.set_level_map(f))?;
                let mut hit = wi.map.clone();
                hit.sort_unstable();
                let ok = wi.is_injective() && we.is_surjective() && hit == si.map;
                if !ok {
                    witness = Some(format!("{f:?}"));
                    break 'im;
                }
            }
        }
    }
    let im = check("images", cases, witness);

    let (mut cases, mut witness) = (0, None);
    'cq: for x in 0..n {
        for y in 0..n {
            let fs = homs.get(x, y)?;
            for (i, f) in fs.iter().enumerate() {
                for g in fs.iter().skip(i) {
                    cases += 1;
                    let ok = match b.coequalizer(f, g) {
                        Ok(q) => coequalizers_agree(b, f, g, &q)?,
                        Err(Error::Consistency(_)) => false,
                        Err(e) => return Err(e),
                    };
                    if !ok {
                        witness = Some(format!("{f:?} and {g:?}"));
                        break 'cq;
                    }
                }
            }
        }
    }
    let cq = check("coequalizers", cases, witness);

    Ok(vec![fp, kp, im, cq])
}

/// `|G\(G/U × G/V)| = |U\G/V|` for every pair of representatives, counted
/// both on the set level and as atoms of the categorical product.
pub fn double_coset_check(b: &BCat<TransitiveCategory>) -> Result<Check> {
    let cat = b.inner();
    let g = cat.group();
    let k = cat.reps().len();
    let mut cases = 0;
    let mut witness = None;
    for x in 0..k {
        for y in 0..k {
            cases += 1;
            let (u, v) = (cat.subgroup(x), cat.subgroup(y));
            let expected = g.double_coset_count(u, v);
            let to_point = |o: usize| GMap {
                source: cat.coset_set(o).clone(),
                target: GSet::point(g.clone()),
                map: vec![0; cat.coset_set(o).len()],
            };
            let (p, _, _) = gset::fiber_product(&to_point(x), &to_point(y))?;
            let set_orbits = p.orbits().len();
            let atoms = b
                .product(&BObject::atom(x), &BObject::atom(y))?
                .object
                .len();
            if witness.is_none() && (set_orbits != expected || atoms != expected) {
                witness = Some(format!(
                    "U = {u:?}, V = {v:?}: {set_orbits} orbits, {atoms} atoms, {expected} double cosets"
                ));
            }
        }
    }
    Ok(check("double_cosets", cases, witness))
}

/// The set-level relation `{(p, q) : related(p, q)}` on `x` as a subobject
/// of the square, provided it is a union of atoms.
pub fn relation_from_points(
    b: &BCat<TransitiveCategory>,
    x: &GObject,
    related: impl Fn(usize, usize) -> bool,
) -> Result<Relation<usize, CosetMap>> {
    let cat = b.inner();
    let square = b.square(x)?;
    let (w1, w2) = (
        cat.set_level_map(&square.first),
        cat.set_level_map(&square.second),
    );
    let (_, offsets) = cat.set_level_with_offsets(&square.object);
    let mut subset = Vec::new();
    for atom in 0..square.object.len() {
        let start = offsets[atom];
        let end = start + cat.size(&square.object.atoms[atom]);
        let hits: Vec<bool> = (start..end)
            .map(|p| related(w1.map[p], w2.map[p]))
            .collect();
        if hits.iter().all(|&h| h) {
            subset.push(atom);
        } else if hits.iter().any(|&h| h) {
            return Err(Error::InvalidMap(format!(
                "the relation splits atom {atom} of the square"
            )));
        }
    }
    b.relation(x, subset)
}

/// On `G/1`, the relation `g ~ gh` for `h` in `h_group`.
pub fn right_coset_relation(
    b: &BCat<TransitiveCategory>,
    h_group: &Subgroup,
) -> Result<Relation<usize, CosetMap>> {
    let cat = b.inner();
    let g = cat.group().clone();
    let (regular, _) = cat.locate(&g.trivial_subgroup())?;
    let x = BObject::atom(regular);
    let points = cat.coset_points(regular).to_vec();
    relation_from_points(b, &x, |p, q| {
        h_group.contains(g.mul(g.inv(points[p]), points[q]))
    })
}

/// The coset relation of one subgroup on `G/1` and what its quotient is.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetRelationCheck {
    pub subgroup: Subgroup,
    pub in_class: bool,
    pub effective: bool,
    /// Stabilizer of the quotient atom.
    pub quotient: Subgroup,
    /// Least member of the stabilizer class containing the subgroup.
    pub reflector: Subgroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupEffectivity {
    pub relations: EffectivityReport<usize, CosetMap>,
    pub coset_relations: Vec<CosetRelationCheck>,
}

impl GroupEffectivity {
    /// Coset relations are effective exactly for members of the class, and
    /// each quotient is the one cut out by the reflector.
    pub fn consistent(&self) -> bool {
        self.coset_relations
            .iter()
            .all(|c| c.effective == c.in_class && c.quotient.order() == c.reflector.order())
    }
}

/// Every equivalence relation on sequences of at most `max_atoms` atoms,
/// and the coset relation of one subgroup from each conjugacy class.
pub fn effectivity_report(class: StabilizerClass, max_atoms: usize) -> Result<GroupEffectivity> {
    let group = class.group().clone();
    let b = BCat::new(TransitiveCategory::new(class.clone()));
    let relations = b.effectivity_report(group.order(), max_atoms)?;
    let mut coset_relations = Vec::new();
    for c in group.subgroup_classes()? {
        let h = &c.rep;
        let r = right_coset_relation(&b, h)?;
        let effective = b.is_effective(&r)?;
        let q = b.quotient(&r)?;
        if q.target.len() != 1 {
            return Err(Error::Consistency(format!(
                "the quotient of a transitive G-set has {} atoms",
                q.target.len()
            )));
        }
        coset_relations.push(CosetRelationCheck {
            subgroup: h.clone(),
            in_class: class.contains(h),
            effective,
            quotient: b.inner().subgroup(q.target.atoms[0]).clone(),
            reflector: class.reflector(h),
        });
    }
    Ok(GroupEffectivity {
        relations,
        coset_relations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberFunctorReport {
    pub group_order: usize,
    /// Fiber products, coequalizers and the final object are preserved.
    pub exactness: Vec<Check>,
    /// A map is invertible exactly when its set-level map is bijective.
    pub conservativity: Check,
    pub suite: AxiomReport,
    pub conditions: ConditionReport,
}

impl FiberFunctorReport {
    pub fn exact(&self) -> bool {
        self.exactness.iter().all(|c| c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.exact()
            && self.conservativity.pass
            && self.suite.all_pass()
            && self.conditions.nondegenerate()
            && self.conditions.consistent
    }
}

/// Checks the set-level functor on the full category of transitive `G`-sets
/// over sequences of at most `max_atoms` atoms, along with the axiom suite
/// and the non-degeneracy conditions at atoms of size `<= suite_size`.
pub fn fiber_functor_check(
    group: Arc<FiniteGroup>,
    max_atoms: usize,
    suite_size: usize,
) -> Result<FiberFunctorReport> {
    let b = BCat::new(TransitiveCategory::new(StabilizerClass::full(
        group.clone(),
    )?));
    let agreement = set_level_agreement(&b, max_atoms)?;
    let mut exactness: Vec<Check> = agreement
        .into_iter()
        .filter(|c| c.name == "fiber_products" || c.name == "coequalizers")
        .collect();
    let fin = b.final_object()?;
    let wf = b.inner().set_level(&fin);
    exactness.push(check(
        "final_object",
        1,
        (wf.len() != 1).then(|| format!("the final object has {} points", wf.len())),
    ));

    let objs = b.probes(group.order(), max_atoms)?;
    let mut cases = 0;
    let mut witness = None;
    for x in &objs {
        for y in &objs {
            for f in b.hom(x, y)? {
                cases += 1;
                let bij = b.inner().set_level_map(&f).is_bijective();
                if witness.is_none() && bij != b.is_iso(&f) {
                    witness = Some(format!("{f:?}"));
                }
            }
        }
    }
    let conservativity = check("conservativity", cases, witness);

    let suite = axiom_suite(&b, SuiteBounds::new(suite_size, suite_size, max_atoms))?;
    let conditions = nondegeneracy_conditions(&b, suite_size, max_atoms)?;
    Ok(FiberFunctorReport {
        group_order: group.order(),
        exactness,
        conservativity,
        suite,
        conditions,
    })
}
