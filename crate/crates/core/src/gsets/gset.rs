use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::group::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A finite set with an action of a finite group, stored as a table
/// `action[g][p] = g·p`.
#[derive(Clone)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    action: Arc<Vec<Vec<usize>>>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GSet(points: {}, orbits: {:?})",
            self.len(),
            self.orbit_sizes()
        )
    }
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.action == other.action
    }
}

impl Eq for GSet {}

impl GSet {
    /// Validates the action laws.
    pub fn new(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidMap(format!(
                "action table has {} rows for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        let n = action[0].len();
        if action[0] != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidMap("the identity acts nontrivially".into()));
        }
        for a in 0..group.order() {
            if action[a].len() != n {
                return Err(Error::InvalidMap("ragged action table".into()));
            }
            for b in 0..group.order() {
                let ab = group.mul(a, b);
                for p in 0..n {
                    if action[ab][p] != action[a][action[b][p]] {
                        return Err(Error::InvalidMap(format!(
                            "action is not compatible with the product of {a} and {b}"
                        )));
                    }
                }
            }
        }
        Ok(Self::new_unchecked(group, action))
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Self {
        GSet {
            group,
            action: Arc::new(action),
        }
    }

    pub fn empty(group: Arc<FiniteGroup>) -> Self {
        let rows = vec![Vec::new(); group.order()];
        Self::new_unchecked(group, rows)
    }

    pub fn point(group: Arc<FiniteGroup>) -> Self {
        let rows = vec![vec![0]; group.order()];
        Self::new_unchecked(group, rows)
    }

    /// `G/V` on the least coset representatives, in increasing order.
    pub fn cosets(group: Arc<FiniteGroup>, v: &Subgroup) -> (Self, Vec<usize>) {
        let reps = group.coset_reps(v);
        let position: BTreeMap<usize, usize> =
            reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let action = (0..group.order())
            .map(|g| {
                reps.iter()
                    .map(|&r| position[&group.coset_rep(group.mul(g, r), v)])
                    .collect()
            })
            .collect();
        (Self::new_unchecked(group, action), reps)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.action[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn act(&self, g: usize, p: usize) -> usize {
        self.action[g][p]
    }

    /// Orbits as sorted point lists, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for p in 0..self.len() {
            if seen[p] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, p)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &q in &orbit {
                seen[q] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits().iter().map(Vec::len).collect()
    }

    pub fn stabilizer(&self, p: usize) -> Subgroup {
        Subgroup::from_sorted(
            (0..self.group.order())
                .filter(|&g| self.act(g, p) == p)
                .collect(),
        )
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    /// The disjoint union, with the offset of each summand.
    pub fn disjoint_union(group: Arc<FiniteGroup>, parts: &[GSet]) -> (Self, Vec<usize>) {
        let mut offsets = Vec::with_capacity(parts.len());
        let mut total = 0;
        for p in parts {
            offsets.push(total);
            total += p.len();
        }
        let action = (0..group.order())
            .map(|g| {
                parts
                    .iter()
                    .zip(&offsets)
                    .flat_map(|(p, &o)| p.action[g].iter().map(move |&x| x + o))
                    .collect()
            })
            .collect();
        (Self::new_unchecked(group, action), offsets)
    }

    /// The subset `points` as a G-set, in the given order. The subset must be
    /// G-stable.
    pub fn restrict(&self, points: &[usize]) -> Result<Self> {
        let position: BTreeMap<usize, usize> =
            points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut action = Vec::with_capacity(self.group.order());
        for g in 0..self.group.order() {
            let mut row = Vec::with_capacity(points.len());
            for &p in points {
                let q = self.act(g, p);
                row.push(*position.get(&q).ok_or_else(|| {
                    Error::InvalidMap(format!("subset {points:?} is not G-stable"))
                })?);
            }
            action.push(row);
        }
        Ok(Self::new_unchecked(self.group.clone(), action))
    }

    /// An equivariant bijection `self -> other`, found by matching orbits with
    /// conjugate stabilizers.
    pub fn isomorphism(&self, other: &GSet) -> Option<Vec<usize>> {
        if self.len() != other.len() {
            return None;
        }
        let g = &self.group;
        let mine = self.orbits();
        let theirs = other.orbits();
        if mine.len() != theirs.len() {
            return None;
        }
        let mut used = vec![false; theirs.len()];
        let mut map = vec![usize::MAX; self.len()];
        for orbit in &mine {
            let x = orbit[0];
            let sx = self.stabilizer(x);
            let found = theirs.iter().enumerate().find_map(|(k, o)| {
                if used[k] || o.len() != orbit.len() {
                    return None;
                }
                let y = o[0];
                // t · Stab(y) · t⁻¹ = Stab(x) means Stab(t·y) = Stab(x)
                g.conjugator(&other.stabilizer(y), &sx)
                    .map(|t| (k, other.act(t, y)))
            });
            let (k, y) = found?;
            used[k] = true;
            for h in 0..g.order() {
                map[self.act(h, x)] = other.act(h, y);
            }
        }
        Some(map)
    }

    pub fn is_isomorphic(&self, other: &GSet) -> bool {
        self.isomorphism(other).is_some()
    }

    pub fn is_equivariant(&self, other: &GSet, map: &[usize]) -> bool {
        map.len() == self.len()
            && map.iter().all(|&y| y < other.len())
            && (0..self.group.order())
                .all(|g| (0..self.len()).all(|p| map[self.act(g, p)] == other.act(g, map[p])))
    }
}

/// An equivariant map of G-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMap {
    pub source: GSet,
    pub target: GSet,
    pub map: Vec<usize>,
}

impl GMap {
    pub fn new(source: GSet, target: GSet, map: Vec<usize>) -> Result<Self> {
        if !Arc::ptr_eq(source.group(), target.group()) {
            return Err(Error::TypeMismatch("G-sets over different groups".into()));
        }
        if !source.is_equivariant(&target, &map) {
            return Err(Error::InvalidMap(format!("{map:?} is not equivariant")));
        }
        Ok(GMap {
            source,
            target,
            map,
        })
    }

    pub fn identity(x: &GSet) -> Self {
        GMap {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.len()).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GMap) -> Result<GMap> {
        if first.target != self.source {
            return Err(Error::TypeMismatch("maps are not composable".into()));
        }
        Ok(GMap {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|&p| self.map[p]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// Set-level fiber product: the pairs `(x, y)` with `f(x) = g(y)` in
/// lexicographic order, with the two projections.
pub fn fiber_product(f: &GMap, g: &GMap) -> Result<(GSet, GMap, GMap)> {
    if f.target != g.target {
        return Err(Error::TypeMismatch(
            "fiber product needs a common target".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..f.source.len())
        .flat_map(|x| {
            (0..g.source.len())
                .filter(move |&y| f.map[x] == g.map[y])
                .map(move |y| (x, y))
        })
        .collect();
    let position: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let group = f.source.group().clone();
    let action = (0..group.order())
        .map(|h| {
            pairs
                .iter()
                .map(|&(x, y)| position[&(f.source.act(h, x), g.source.act(h, y))])
                .collect()
        })
        .collect();
    let p = GSet::new_unchecked(group, action);
    let p1 = GMap {
        source: p.clone(),
        target: f.source.clone(),
        map: pairs.iter().map(|&(x, _)| x).collect(),
    };
    let p2 = GMap {
        source: p.clone(),
        target: g.source.clone(),
        map: pairs.iter().map(|&(_, y)| y).collect(),
    };
    Ok((p, p1, p2))
}

pub fn kernel_pair(f: &GMap) -> Result<(GSet, GMap, GMap)> {
    fiber_product(f, f)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Set-level coequalizer of `f, g: X -> Y`: the quotient of `Y` by the
/// equivalence relation generated by `f(x) ~ g(x)`. Classes are numbered by
/// least member.
pub fn coequalizer(f: &GMap, g: &GMap) -> Result<(GSet, GMap)> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::TypeMismatch(
            "coequalizer needs a parallel pair".into(),
        ));
    }
    let y = &f.target;
    let mut parent: Vec<usize> = (0..y.len()).collect();
    for x in 0..f.source.len() {
        let (a, b) = (find(&mut parent, f.map[x]), find(&mut parent, g.map[x]));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let roots: Vec<usize> = (0..y.len()).map(|p| find(&mut parent, p)).collect();
    let mut class_of_root = BTreeMap::new();
    for &r in &roots {
        let next = class_of_root.len();
        class_of_root.entry(r).or_insert(next);
    }
    let q: Vec<usize> = roots.iter().map(|r| class_of_root[r]).collect();
    let mut rep = vec![usize::MAX; class_of_root.len()];
    for p in (0..y.len()).rev() {
        rep[q[p]] = p;
    }
    let group = y.group().clone();
    let action = (0..group.order())
        .map(|h| rep.iter().map(|&p| q[y.act(h, p)]).collect())
        .collect();
    let quotient = GSet::new_unchecked(group, action);
    let map = GMap {
        source: y.clone(),
        target: quotient.clone(),
        map: q,
    };
    Ok((quotient, map))
}

/// The image of `f` as a sub-G-set of the target, with the inclusion and the
/// corestriction.
pub fn image(f: &GMap) -> Result<(GSet, GMap, GMap)> {
    let mut points: Vec<usize> = f.map.clone();
    points.sort_unstable();
    points.dedup();
    let im = f.target.restrict(&points)?;
    let inclusion = GMap {
        source: im.clone(),
        target: f.target.clone(),
        map: points.clone(),
    };
    let corestriction = GMap {
        source: f.source.clone(),
        target: im,
        map: f
            .map
            .iter()
            .map(|y| points.binary_search(y).expect("image point"))
            .collect(),
    };
    Ok((inclusion.source.clone(), inclusion, corestriction))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3).unwrap())
    }

    #[test]
    fn orbit_stabilizer() {
        let g = Arc::new(FiniteGroup::symmetric(4).unwrap());
        for h in g.all_subgroups().unwrap() {
            let (x, reps) = GSet::cosets(g.clone(), &h);
            assert_eq!(x.len(), g.index(&h));
            assert_eq!(reps[0], 0);
            assert!(x.is_transitive());
            assert_eq!(x.stabilizer(0), h);
            for p in 0..x.len() {
                assert_eq!(x.len() * x.stabilizer(p).order(), g.order());
            }
        }
    }

    #[test]
    fn product_of_regular_sets() {
        let g = s3();
        let (x, _) = GSet::cosets(g.clone(), &g.trivial_subgroup());
        let (pt, _) = GSet::cosets(g.clone(), &g.whole());
        let to_pt = GMap::new(x.clone(), pt, vec![0; 6]).unwrap();
        let (p, _, _) = fiber_product(&to_pt, &to_pt).unwrap();
        assert_eq!(p.len(), 36);
        assert_eq!(p.orbit_sizes(), vec![6; 6]);
    }

    #[test]
    fn coequalizer_of_kernel_pair() {
        let g = s3();
        let c2 = g.generated(&[1]);
        let (x, xr) = GSet::cosets(g.clone(), &g.trivial_subgroup());
        let (y, yr) = GSet::cosets(g.clone(), &c2);
        let map = xr
            .iter()
            .map(|&r| yr.binary_search(&g.coset_rep(r, &c2)).unwrap())
            .collect();
        let f = GMap::new(x, y.clone(), map).unwrap();
        let (_, k1, k2) = kernel_pair(&f).unwrap();
        assert_eq!(k1.source.len(), 12);
        let (q, qmap) = coequalizer(&k1, &k2).unwrap();
        assert_eq!(q.len(), 3);
        assert!(q.is_isomorphic(&y));
        assert!(qmap.is_surjective());
        let (im, inc, core) = image(&f).unwrap();
        assert_eq!(im.len(), 3);
        assert!(inc.is_bijective() && core.is_surjective());
    }

    #[test]
    fn isomorphism_is_equivariant() {
        let g = s3();
        let c2 = g.generated(&[1]);
        let other = g.conjugate(3, &c2);
        assert_ne!(c2, other);
        let (a, _) = GSet::cosets(g.clone(), &c2);
        let (b, _) = GSet::cosets(g.clone(), &other);
        let iso = a.isomorphism(&b).unwrap();
        assert!(a.is_equivariant(&b, &iso));
        let (c, _) = GSet::cosets(g.clone(), &g.generated(&[3]));
        assert!(a.isomorphism(&c).is_none());
        let (u, _) = GSet::disjoint_union(g.clone(), &[a.clone(), c.clone()]);
        let (v, _) = GSet::disjoint_union(g, &[c, b]);
        let iso = u.isomorphism(&v).unwrap();
        assert!(u.is_equivariant(&v, &iso));
    }

    #[test]
    fn action_laws_are_validated() {
        let g = s3();
        assert!(GSet::new(g.clone(), vec![vec![0, 1]; 6]).is_ok());
        let mut bad = vec![vec![0, 1]; 6];
        bad[1] = vec![1, 0];
        assert!(GSet::new(g, bad).is_err());
    }
}
