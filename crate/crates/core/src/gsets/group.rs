//! Finite permutation groups and their subgroup lattices.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order built from generators.
pub const GROUP_CAP: usize = 5000;
/// Largest group order for which the full subgroup lattice is computed.
pub const SUBGROUP_CAP: usize = 200;

const TABLE_CAP: usize = 1024;

/// Degree and generators, with permutations as 0-based image lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

/// A subgroup as a sorted list of element indices.
///
/// Ordered by order first, then by element list.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup(Vec<usize>);

impl Subgroup {
    pub(crate) fn from_sorted(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup(elements)
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.0.iter().all(|&g| other.contains(g))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.0)
    }
}

/// A conjugacy class of subgroups, with its least member as representative.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub rep: Subgroup,
    pub conjugates: Vec<Subgroup>,
}

/// A finite permutation group with materialized elements.
///
/// Elements are sorted lexicographically by image list, so the identity has
/// index 0. The product `a * b` applies `b` first.
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Vec<usize>>,
    elements: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    inverses: Vec<usize>,
    table: Vec<usize>,
    classes: OnceLock<Vec<SubgroupClass>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

fn check_perm(degree: usize, p: &[usize]) -> Result<()> {
    if p.len() != degree {
        return Err(Error::InvalidGroup(format!(
            "generator {p:?} does not have degree {degree}"
        )));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidGroup(format!("{p:?} is not a permutation")));
        }
    }
    Ok(())
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

impl FiniteGroup {
    pub fn from_generators(degree: usize, generators: Vec<Vec<usize>>) -> Result<Self> {
        Self::from_generators_capped(degree, generators, GROUP_CAP)
    }

    pub fn from_spec(spec: &GroupSpec) -> Result<Self> {
        Self::from_generators(spec.degree, spec.generators.clone())
    }

    pub fn from_generators_capped(
        degree: usize,
        generators: Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<Self> {
        for g in &generators {
            check_perm(degree, g)?;
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = compose(g, &x);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded {
                            what: "group order".into(),
                            requested: seen.len(),
                            cap,
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: HashMap<Vec<usize>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let inverses = elements
            .iter()
            .map(|e| {
                let mut inv = vec![0; degree];
                for (i, &x) in e.iter().enumerate() {
                    inv[x] = i;
                }
                index[&inv]
            })
            .collect();
        let order = elements.len();
        let table = if order <= TABLE_CAP {
            let mut t = Vec::with_capacity(order * order);
            for a in &elements {
                for b in &elements {
                    t.push(index[&compose(a, b)]);
                }
            }
            t
        } else {
            Vec::new()
        };
        Ok(FiniteGroup {
            degree,
            generators,
            elements,
            index,
            inverses,
            table,
            classes: OnceLock::new(),
        })
    }

    pub fn trivial() -> Self {
        Self::from_generators(1, vec![]).expect("trivial group")
    }

    /// The cyclic group generated by an `n`-cycle.
    pub fn cyclic(n: usize) -> Result<Self> {
        let n = n.max(1);
        Self::from_generators(n, vec![(0..n).map(|i| (i + 1) % n).collect()])
    }

    /// The full symmetric group on `n` points.
    pub fn symmetric(n: usize) -> Result<Self> {
        let n = n.max(1);
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_generators(n, gens)
    }

    /// The symmetry group of a regular `n`-gon, of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGroup(format!("dihedral group of a {n}-gon")));
        }
        let rotation = (0..n).map(|i| (i + 1) % n).collect();
        let reflection = (0..n).map(|i| (n - i) % n).collect();
        Self::from_generators(n, vec![rotation, reflection])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec {
            degree: self.degree,
            generators: self.generators.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, g: usize) -> &[usize] {
        &self.elements[g]
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn index_of(&self, perm: &[usize]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if self.table.is_empty() {
            self.index[&compose(&self.elements[a], &self.elements[b])]
        } else {
            self.table[a * self.order() + b]
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g * u * g⁻¹`.
    pub fn conjugate_element(&self, g: usize, u: usize) -> usize {
        self.mul(self.mul(g, u), self.inv(g))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup((0..self.order()).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup(vec![0])
    }

    /// The subgroup generated by the given elements.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(g, x);
                if !std::mem::replace(&mut seen[y], true) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        Subgroup(out)
    }

    /// Validates an element list as a subgroup.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&g| g >= self.order()) {
            return Err(Error::InvalidGroup(format!(
                "element index {bad} out of range for a group of order {}",
                self.order()
            )));
        }
        let h = Subgroup(sorted);
        if !h.contains(0) {
            return Err(Error::InvalidGroup(format!("{h:?} lacks the identity")));
        }
        for &a in h.elements() {
            for &b in h.elements() {
                if !h.contains(self.mul(a, b)) {
                    return Err(Error::InvalidGroup(format!(
                        "{h:?} is not closed under multiplication"
                    )));
                }
            }
        }
        Ok(h)
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut out: Vec<usize> = h
            .elements()
            .iter()
            .map(|&u| self.conjugate_element(g, u))
            .collect();
        out.sort_unstable();
        Subgroup(out)
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup(
            a.elements()
                .iter()
                .copied()
                .filter(|&g| b.contains(g))
                .collect(),
        )
    }

    /// Some `g` with `g * from * g⁻¹ = to`.
    pub fn conjugator(&self, from: &Subgroup, to: &Subgroup) -> Option<usize> {
        if from.order() != to.order() {
            return None;
        }
        (0..self.order()).find(|&g| {
            from.elements()
                .iter()
                .all(|&u| to.contains(self.conjugate_element(g, u)))
        })
    }

    pub fn are_conjugate(&self, a: &Subgroup, b: &Subgroup) -> bool {
        self.conjugator(a, b).is_some()
    }

    fn check_lattice_cap(&self) -> Result<()> {
        if self.order() > SUBGROUP_CAP {
            return Err(Error::CapExceeded {
                what: "subgroup enumeration".into(),
                requested: self.order(),
                cap: SUBGROUP_CAP,
            });
        }
        Ok(())
    }

    /// Every subgroup, found by joining cyclic subgroups breadth first.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.check_lattice_cap()?;
        let mut seen: BTreeSet<Subgroup> = BTreeSet::new();
        let trivial = self.trivial_subgroup();
        seen.insert(trivial.clone());
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            for g in 0..self.order() {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.elements().to_vec();
                gens.push(g);
                let j = self.generated(&gens);
                if seen.insert(j.clone()) {
                    queue.push_back(j);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Conjugacy classes of subgroups, ordered by representative.
    pub fn subgroup_classes(&self) -> Result<&[SubgroupClass]> {
        if let Some(c) = self.classes.get() {
            return Ok(c);
        }
        let all = self.all_subgroups()?;
        let mut assigned: BTreeSet<Subgroup> = BTreeSet::new();
        let mut classes = Vec::new();
        for h in all {
            if assigned.contains(&h) {
                continue;
            }
            let conjugates: BTreeSet<Subgroup> =
                (0..self.order()).map(|g| self.conjugate(g, &h)).collect();
            assigned.extend(conjugates.iter().cloned());
            classes.push(SubgroupClass {
                rep: h,
                conjugates: conjugates.into_iter().collect(),
            });
        }
        Ok(self.classes.get_or_init(|| classes))
    }

    /// Index of the conjugacy class containing `h`.
    pub fn class_of(&self, h: &Subgroup) -> Result<usize> {
        self.subgroup_classes()?
            .iter()
            .position(|c| c.conjugates.binary_search(h).is_ok())
            .ok_or_else(|| Error::InvalidGroup(format!("{h:?} is not a subgroup")))
    }

    /// The least element of the left coset `x V`.
    pub fn coset_rep(&self, x: usize, v: &Subgroup) -> usize {
        v.elements()
            .iter()
            .map(|&u| self.mul(x, u))
            .min()
            .expect("subgroups are nonempty")
    }

    /// Least representatives of the left cosets of `v`, in increasing order.
    pub fn coset_reps(&self, v: &Subgroup) -> Vec<usize> {
        let mut reps: Vec<usize> = (0..self.order()).map(|x| self.coset_rep(x, v)).collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    pub fn index(&self, v: &Subgroup) -> usize {
        self.order() / v.order()
    }

    /// `x⁻¹ U x ⊆ V`, the condition for `gU ↦ gxV` to be well defined.
    pub fn conjugates_into(&self, u: &Subgroup, x: usize, v: &Subgroup) -> bool {
        let xi = self.inv(x);
        u.elements()
            .iter()
            .all(|&g| v.contains(self.conjugate_element(xi, g)))
    }

    /// The `G`-maps `G/U -> G/V`, as least representatives `x` of the cosets
    /// `xV` with `x⁻¹ U x ⊆ V`.
    pub fn hom(&self, u: &Subgroup, v: &Subgroup) -> Vec<usize> {
        self.coset_reps(v)
            .into_iter()
            .filter(|&x| self.conjugates_into(u, x, v))
            .collect()
    }

    /// `|{x : x⁻¹ U x ⊆ V}| / |V|`.
    pub fn hom_count(&self, u: &Subgroup, v: &Subgroup) -> usize {
        (0..self.order())
            .filter(|&x| self.conjugates_into(u, x, v))
            .count()
            / v.order()
    }

    /// `|U \ G / V|`.
    pub fn double_coset_count(&self, u: &Subgroup, v: &Subgroup) -> usize {
        let mut seen = vec![false; self.order()];
        let mut count = 0;
        for x in 0..self.order() {
            if seen[x] {
                continue;
            }
            count += 1;
            for &a in u.elements() {
                for &b in v.elements() {
                    seen[self.mul(self.mul(a, x), b)] = true;
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        FiniteGroup::from_generators(3, vec![vec![1, 0, 2], vec![1, 2, 0]]).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(
            FiniteGroup::from_generators(2, vec![vec![1, 0]])
                .unwrap()
                .order(),
            2
        );
        assert_eq!(s3().order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().order(), 24);
        assert_eq!(FiniteGroup::dihedral(4).unwrap().order(), 8);
        assert_eq!(FiniteGroup::trivial().order(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let err = FiniteGroup::from_generators_capped(
            5,
            vec![vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]],
            100,
        )
        .unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
        assert!(FiniteGroup::symmetric(6).unwrap().all_subgroups().is_err());
    }

    #[test]
    fn group_laws() {
        let g = FiniteGroup::symmetric(4).unwrap();
        assert_eq!(g.element(0), &[0, 1, 2, 3]);
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..g.order() {
                assert_eq!(
                    g.element(g.mul(a, b)),
                    compose(g.element(a), g.element(b)).as_slice()
                );
            }
        }
    }

    #[test]
    fn subgroup_class_counts() {
        assert_eq!(s3().subgroup_classes().unwrap().len(), 4);
        let c2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(c2.subgroup_classes().unwrap().len(), 2);
        let s4 = FiniteGroup::symmetric(4).unwrap();
        assert_eq!(s4.all_subgroups().unwrap().len(), 30);
        assert_eq!(s4.subgroup_classes().unwrap().len(), 11);
        let d4 = FiniteGroup::dihedral(4).unwrap();
        assert_eq!(d4.all_subgroups().unwrap().len(), 10);
        assert_eq!(d4.subgroup_classes().unwrap().len(), 8);
    }

    #[test]
    fn subgroups_match_subset_search() {
        // every subset containing the identity that is closed under products
        let g = s3();
        let mut found = Vec::new();
        for mask in 0u32..(1 << 6) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
            if g.subgroup(&elems).is_ok() {
                found.push(Subgroup(elems));
            }
        }
        found.sort();
        assert_eq!(found, g.all_subgroups().unwrap());
    }

    #[test]
    fn hom_counts() {
        let g = s3();
        let classes = g.subgroup_classes().unwrap();
        let trivial = &classes[0].rep;
        let c2 = &classes[1].rep;
        assert_eq!(c2.order(), 2);
        assert_eq!(g.hom(trivial, c2).len(), 3);
        assert_eq!(g.hom_count(trivial, c2), 3);
        let whole = g.whole();
        for c in classes {
            assert_eq!(g.hom(&c.rep, &whole).len(), 1);
            if c.rep != whole {
                assert!(g.hom(&whole, &c.rep).is_empty());
            }
            for d in classes {
                assert_eq!(g.hom(&c.rep, &d.rep).len(), g.hom_count(&c.rep, &d.rep));
            }
        }
    }

    #[test]
    fn invalid_subgroup() {
        let g = s3();
        assert!(g.subgroup(&[0, 1, 2]).is_err());
        assert_eq!(g.subgroup(&[4, 0, 3]).unwrap().order(), 3);
        assert!(g.subgroup(&[1]).is_err());
        assert!(g.subgroup(&[0, 9]).is_err());
        assert!(FiniteGroup::from_generators(3, vec![vec![0, 0, 1]]).is_err());
    }
}
