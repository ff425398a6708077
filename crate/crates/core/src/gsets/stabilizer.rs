use std::collections::BTreeSet;
use std::sync::Arc;

use super::group::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A family of subgroups containing `G` and the trivial subgroup, closed
/// under conjugation and intersection.
#[derive(Clone, Debug)]
pub struct StabilizerClass {
    group: Arc<FiniteGroup>,
    members: Vec<Subgroup>,
}

impl StabilizerClass {
    /// Every subgroup.
    pub fn full(group: Arc<FiniteGroup>) -> Result<Self> {
        let members = group.all_subgroups()?;
        Ok(StabilizerClass { group, members })
    }

    /// The smallest stabilizer class containing `gens`.
    pub fn generated_by(group: Arc<FiniteGroup>, gens: &[Subgroup]) -> Result<Self> {
        let mut members: BTreeSet<Subgroup> = BTreeSet::new();
        members.insert(group.whole());
        members.insert(group.trivial_subgroup());
        for h in gens {
            group.subgroup(h.elements())?;
            members.insert(h.clone());
        }
        loop {
            let current: Vec<Subgroup> = members.iter().cloned().collect();
            let before = members.len();
            for h in &current {
                for g in 0..group.order() {
                    members.insert(group.conjugate(g, h));
                }
            }
            let current: Vec<Subgroup> = members.iter().cloned().collect();
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    members.insert(group.intersection(a, b));
                }
            }
            if members.len() == before {
                break;
            }
        }
        Ok(StabilizerClass {
            group,
            members: members.into_iter().collect(),
        })
    }

    /// Takes `members` as given, rejecting anything that violates the closure
    /// conditions.
    pub fn from_members(group: Arc<FiniteGroup>, members: &[Vec<usize>]) -> Result<Self> {
        let mut set: BTreeSet<Subgroup> = BTreeSet::new();
        for m in members {
            set.insert(group.subgroup(m)?);
        }
        let fail = |msg: String| Err(Error::InvalidStabilizerClass(msg));
        if !set.contains(&group.whole()) {
            return fail("the whole group is missing".into());
        }
        if !set.contains(&group.trivial_subgroup()) {
            return fail("the trivial subgroup is missing".into());
        }
        for h in &set {
            for g in 0..group.order() {
                let c = group.conjugate(g, h);
                if !set.contains(&c) {
                    return fail(format!("{h:?} has the conjugate {c:?} outside the class"));
                }
            }
            for k in &set {
                let i = group.intersection(h, k);
                if !set.contains(&i) {
                    return fail(format!("{h:?} ∩ {k:?} = {i:?} is outside the class"));
                }
            }
        }
        Ok(StabilizerClass {
            group,
            members: set.into_iter().collect(),
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn contains(&self, h: &Subgroup) -> bool {
        self.members.binary_search(h).is_ok()
    }

    pub fn is_full(&self) -> Result<bool> {
        Ok(self.members.len() == self.group.all_subgroups()?.len())
    }

    /// One member per conjugacy class, each the least of its class.
    pub fn class_reps(&self) -> Vec<Subgroup> {
        let mut reps: BTreeSet<Subgroup> = BTreeSet::new();
        for h in &self.members {
            let least = (0..self.group.order())
                .map(|g| self.group.conjugate(g, h))
                .min()
                .expect("nonempty group");
            reps.insert(least);
        }
        reps.into_iter().collect()
    }

    /// The least member containing `u`.
    pub fn reflector(&self, u: &Subgroup) -> Subgroup {
        self.members
            .iter()
            .filter(|v| u.is_subset(v))
            .fold(self.group.whole(), |acc, v| {
                self.group.intersection(&acc, v)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3).unwrap())
    }

    #[test]
    fn generated_class_sizes() {
        let g = s3();
        let minimal = StabilizerClass::generated_by(g.clone(), &[]).unwrap();
        assert_eq!(minimal.members().len(), 2);
        assert_eq!(minimal.class_reps().len(), 2);
        let full = StabilizerClass::full(g.clone()).unwrap();
        assert_eq!(full.members().len(), 6);
        assert_eq!(full.class_reps().len(), 4);
        let c2 = g.generated(&[1]);
        let with_c2 = StabilizerClass::generated_by(g, &[c2]).unwrap();
        assert_eq!(with_c2.members().len(), 5);
    }

    #[test]
    fn validation() {
        let g = s3();
        assert!(StabilizerClass::from_members(g.clone(), &[vec![0, 1, 2, 3, 4, 5]]).is_err());
        assert!(
            StabilizerClass::from_members(g.clone(), &[vec![0, 1, 2, 3, 4, 5], vec![0]]).is_ok()
        );
        let c2 = g.generated(&[1]).elements().to_vec();
        let err =
            StabilizerClass::from_members(g, &[vec![0, 1, 2, 3, 4, 5], vec![0], c2]).unwrap_err();
        assert!(matches!(err, Error::InvalidStabilizerClass(_)));
    }

    #[test]
    fn reflector_examples() {
        let g = s3();
        let minimal = StabilizerClass::generated_by(g.clone(), &[]).unwrap();
        let c2 = g.generated(&[1]);
        assert_eq!(minimal.reflector(&c2), g.whole());
        assert_eq!(
            minimal.reflector(&g.trivial_subgroup()),
            g.trivial_subgroup()
        );
        let full = StabilizerClass::full(g.clone()).unwrap();
        for u in full.members() {
            assert_eq!(&full.reflector(u), u);
        }
    }

    #[test]
    fn reflector_is_idempotent_and_monotone() {
        let g = Arc::new(FiniteGroup::symmetric(4).unwrap());
        let all = g.all_subgroups().unwrap();
        let a4 = all.iter().find(|h| h.order() == 12).unwrap().clone();
        let e = StabilizerClass::generated_by(g, &[a4]).unwrap();
        for u in &all {
            let v = e.reflector(u);
            assert!(e.contains(&v));
            assert!(u.is_subset(&v));
            assert_eq!(e.reflector(&v), v);
            for w in &all {
                if u.is_subset(w) {
                    assert!(v.is_subset(&e.reflector(w)));
                }
            }
        }
    }
}
