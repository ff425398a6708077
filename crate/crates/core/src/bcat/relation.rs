use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::{BCat, BMor, BObj, BObject, FiberProduct};
use crate::amalgam::ACategory;
use crate::error::{Error, Result};

/// Equivalence relations on the probe objects, with the ineffective ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EffectivityReport<O, M> {
    pub objects: usize,
    pub relations: usize,
    pub ineffective: Vec<Relation<O, M>>,
}

impl<O, M> EffectivityReport<O, M> {
    pub fn all_effective(&self) -> bool {
        self.ineffective.is_empty()
    }
}

/// A subobject of `X × X`, given by the indices of its atoms in the product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation<O, M> {
    pub carrier: BObject<O>,
    pub square: FiberProduct<O, M>,
    pub subset: Vec<usize>,
}

impl<A: ACategory> BCat<A> {
    /// `X × X` with its projections.
    pub fn square(&self, x: &BObj<A>) -> Result<FiberProduct<A::Object, A::Morphism>> {
        self.product(x, x)
    }

    pub fn relation(
        &self,
        x: &BObj<A>,
        subset: Vec<usize>,
    ) -> Result<Relation<A::Object, A::Morphism>> {
        let square = self.square(x)?;
        self.subobject(&square.object, &subset)?;
        Ok(Relation {
            carrier: x.clone(),
            square,
            subset,
        })
    }

    /// The object `R` and its two maps to the carrier.
    pub fn relation_legs(
        &self,
        r: &Relation<A::Object, A::Morphism>,
    ) -> Result<(BMor<A>, BMor<A>)> {
        let inc = self.subobject(&r.square.object, &r.subset)?;
        Ok((
            self.compose(&r.square.first, &inc)?,
            self.compose(&r.square.second, &inc)?,
        ))
    }

    /// The unique lift of `(first, second)` into `X × X`.
    pub fn pair_into_square(
        &self,
        square: &FiberProduct<A::Object, A::Morphism>,
        first: &BMor<A>,
        second: &BMor<A>,
    ) -> Result<BMor<A>> {
        let mut lifts = self.lifts(
            &first.source,
            &[(first, &square.first), (second, &square.second)],
        )?;
        if lifts.len() != 1 {
            return Err(Error::Consistency(format!(
                "{} mediating maps into a product",
                lifts.len()
            )));
        }
        Ok(lifts.pop().expect("one lift"))
    }

    pub fn diagonal(&self, x: &BObj<A>) -> Result<BMor<A>> {
        let square = self.square(x)?;
        let id = self.identity(x);
        self.pair_into_square(&square, &id, &id)
    }

    /// The kernel pair `X ×_Y X` of `f`, as a subobject of `X × X`.
    pub fn kernel_pair(&self, f: &BMor<A>) -> Result<Relation<A::Object, A::Morphism>> {
        let x = &f.source;
        let square = self.square(x)?;
        let k = self.fiber_product(f, f)?;
        let u = self.pair_into_square(&square, &k.first, &k.second)?;
        if !self.is_mono(&u) {
            return Err(Error::Consistency(
                "the kernel pair does not embed in the square".into(),
            ));
        }
        Ok(Relation {
            carrier: x.clone(),
            subset: self.image(&u),
            square,
        })
    }

    fn lands_in(&self, f: &BMor<A>, subset: &[usize]) -> bool {
        f.a.iter().all(|j| subset.binary_search(j).is_ok())
    }

    pub fn is_reflexive(&self, r: &Relation<A::Object, A::Morphism>) -> Result<bool> {
        let id = self.identity(&r.carrier);
        let d = self.pair_into_square(&r.square, &id, &id)?;
        Ok(self.lands_in(&d, &r.subset))
    }

    pub fn is_symmetric(&self, r: &Relation<A::Object, A::Morphism>) -> Result<bool> {
        let (r1, r2) = self.relation_legs(r)?;
        let swapped = self.pair_into_square(&r.square, &r2, &r1)?;
        Ok(self.lands_in(&swapped, &r.subset))
    }

    pub fn is_transitive(&self, r: &Relation<A::Object, A::Morphism>) -> Result<bool> {
        let (r1, r2) = self.relation_legs(r)?;
        let t = self.fiber_product(&r2, &r1)?;
        let outer1 = self.compose(&r1, &t.first)?;
        let outer2 = self.compose(&r2, &t.second)?;
        let composite = self.pair_into_square(&r.square, &outer1, &outer2)?;
        Ok(self.lands_in(&composite, &r.subset))
    }

    pub fn is_equivalence_relation(&self, r: &Relation<A::Object, A::Morphism>) -> Result<bool> {
        Ok(self.is_reflexive(r)? && self.is_symmetric(r)? && self.is_transitive(r)?)
    }

    /// The coequalizer of the two legs of an equivalence relation.
    pub fn quotient(&self, r: &Relation<A::Object, A::Morphism>) -> Result<BMor<A>> {
        if !self.is_equivalence_relation(r)? {
            return Err(Error::NotEquivalenceRelation(format!(
                "atoms {:?} of the square",
                r.subset
            )));
        }
        let (r1, r2) = self.relation_legs(r)?;
        self.coequalizer(&r1, &r2)
    }

    /// Whether the kernel pair of the quotient map is `r` again.
    pub fn is_effective(&self, r: &Relation<A::Object, A::Morphism>) -> Result<bool> {
        let q = self.quotient(r)?;
        Ok(self.kernel_pair(&q)?.subset == r.subset)
    }

    /// Every equivalence relation on `x`, as subsets of the atoms of `X × X`,
    /// in increasing order.
    ///
    /// Built by closing sets of atoms under the diagonal, the swap, and
    /// relational composition of single atoms.
    pub fn equivalence_relations(&self, x: &BObj<A>) -> Result<Vec<Vec<usize>>> {
        let square = self.square(x)?;
        let n = square.object.len();
        let id = self.identity(x);
        let diag = self.image(&self.pair_into_square(&square, &id, &id)?);
        let swap = self
            .pair_into_square(&square, &square.second, &square.first)?
            .a;
        let single = |s: usize| -> Result<(BMor<A>, BMor<A>)> {
            let inc = self.subobject(&square.object, &[s])?;
            Ok((
                self.compose(&square.first, &inc)?,
                self.compose(&square.second, &inc)?,
            ))
        };
        let legs: Vec<(BMor<A>, BMor<A>)> = (0..n).map(single).collect::<Result<_>>()?;
        let mut comp = vec![vec![Vec::new(); n]; n];
        for s in 0..n {
            for t in 0..n {
                let fp = self.fiber_product(&legs[s].1, &legs[t].0)?;
                let outer1 = self.compose(&legs[s].0, &fp.first)?;
                let outer2 = self.compose(&legs[t].1, &fp.second)?;
                comp[s][t] = self.image(&self.pair_into_square(&square, &outer1, &outer2)?);
            }
        }
        let close = |start: &BTreeSet<usize>| -> BTreeSet<usize> {
            let mut set: BTreeSet<usize> = start.iter().chain(&diag).copied().collect();
            loop {
                let mut next = set.clone();
                for &s in &set {
                    next.insert(swap[s]);
                    for &t in &set {
                        next.extend(comp[s][t].iter().copied());
                    }
                }
                if next.len() == set.len() {
                    return set;
                }
                set = next;
            }
        };
        let base = close(&BTreeSet::new());
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(base.iter().copied().collect());
        let mut queue = VecDeque::from([base]);
        while let Some(e) = queue.pop_front() {
            for t in (0..n).filter(|t| !e.contains(t)) {
                let mut start = e.clone();
                start.insert(t);
                let c = close(&start);
                if found.insert(c.iter().copied().collect()) {
                    queue.push_back(c);
                }
            }
        }
        Ok(found.into_iter().collect())
    }

    /// Tests every equivalence relation on every probe object with at most
    /// `max_atoms` atoms of size `<= max_size`.
    pub fn effectivity_report(
        &self,
        max_size: usize,
        max_atoms: usize,
    ) -> Result<EffectivityReport<A::Object, A::Morphism>> {
        let objs = self.probes(max_size, max_atoms)?;
        let mut relations = 0;
        let mut ineffective = Vec::new();
        for x in &objs {
            for subset in self.equivalence_relations(x)? {
                relations += 1;
                let r = self.relation(x, subset)?;
                if !self.is_effective(&r)? {
                    ineffective.push(r);
                }
            }
        }
        Ok(EffectivityReport {
            objects: objs.len(),
            relations,
            ineffective,
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::amalgam::ClassCategory;
    use crate::bcat::{BCat, BObject};
    use crate::classkit;

    #[test]
    fn relations_on_a_point_pair() {
        let b = BCat::new(ClassCategory::new(classkit::sets()));
        let pt = classkit::sets().enumerate(1).unwrap()[0].clone();
        let x = BObject::new(vec![pt.clone(), pt]);
        let ers = b.equivalence_relations(&x).unwrap();
        for s in &ers {
            let r = b.relation(&x, s.clone()).unwrap();
            assert!(b.is_equivalence_relation(&r).unwrap());
            assert!(b.is_effective(&r).unwrap());
        }
        let diag = b.image(&b.diagonal(&x).unwrap());
        assert!(ers.contains(&diag));
        let all: Vec<usize> = (0..b.square(&x).unwrap().object.len()).collect();
        assert!(ers.contains(&all));
        let id = b.identity(&x);
        assert_eq!(b.kernel_pair(&id).unwrap().subset, diag);
    }
}
