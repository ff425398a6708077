use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::group::{FiniteGroup, Subgroup};
use super::gset::{GMap, GSet};
use super::stabilizer::StabilizerClass;
use crate::amalgam::{ACategory, Amalgam};
use crate::error::{Error, Result};

/// A morphism `G/V -> G/U` of the opposite category of transitive G-sets,
/// read as the G-map `G/U -> G/V, gU ↦ gxV`.
///
/// `source` and `target` index the representative list of the category and
/// `x` is the least element of its coset `xV`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CosetMap {
    pub source: usize,
    pub target: usize,
    pub x: usize,
}

/// The opposite of the category of transitive G-sets whose stabilizers lie
/// in a stabilizer class. Objects are indices into [`Self::reps`], ordered by
/// index in `G` and then by subgroup.
#[derive(Clone, Debug)]
pub struct TransitiveCategory {
    class: StabilizerClass,
    reps: Vec<Subgroup>,
    cosets: Vec<GSet>,
    coset_reps: Vec<Vec<usize>>,
}

impl TransitiveCategory {
    pub fn new(class: StabilizerClass) -> Self {
        let g = class.group().clone();
        let mut reps = class.class_reps();
        reps.sort_by(|a, b| (g.index(a), a).cmp(&(g.index(b), b)));
        let (cosets, coset_reps) = reps.iter().map(|u| GSet::cosets(g.clone(), u)).unzip();
        TransitiveCategory {
            class,
            reps,
            cosets,
            coset_reps,
        }
    }

    pub fn full(group: Arc<FiniteGroup>) -> Result<Self> {
        Ok(Self::new(StabilizerClass::full(group)?))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.class.group()
    }

    pub fn stabilizer_class(&self) -> &StabilizerClass {
        &self.class
    }

    pub fn reps(&self) -> &[Subgroup] {
        &self.reps
    }

    pub fn subgroup(&self, object: usize) -> &Subgroup {
        &self.reps[object]
    }

    /// The object whose representative is conjugate to `h`, with some `t`
    /// satisfying `h = t · rep · t⁻¹`.
    pub fn locate(&self, h: &Subgroup) -> Result<(usize, usize)> {
        let g = self.group();
        for (k, rep) in self.reps.iter().enumerate() {
            if let Some(t) = g.conjugator(rep, h) {
                return Ok((k, t));
            }
        }
        Err(Error::Consistency(format!(
            "{h:?} is not conjugate to a member of the stabilizer class"
        )))
    }

    /// `G/U` for the object, points listed by least coset representative.
    pub fn coset_set(&self, object: usize) -> &GSet {
        &self.cosets[object]
    }

    pub fn coset_points(&self, object: usize) -> &[usize] {
        &self.coset_reps[object]
    }

    /// Position of the coset `yU` in the point list of `object`.
    pub fn point_of(&self, object: usize, y: usize) -> usize {
        let r = self.group().coset_rep(y, &self.reps[object]);
        self.coset_reps[object]
            .binary_search(&r)
            .expect("coset representative")
    }

    /// The G-map `G/U_target -> G/U_source` that `f` stands for.
    pub fn g_map(&self, f: &CosetMap) -> GMap {
        let g = self.group();
        let map = self.coset_reps[f.target]
            .iter()
            .map(|&r| self.point_of(f.source, g.mul(r, f.x)))
            .collect();
        GMap {
            source: self.cosets[f.target].clone(),
            target: self.cosets[f.source].clone(),
            map,
        }
    }

    fn check(&self, object: usize) -> Result<()> {
        if object >= self.reps.len() {
            return Err(Error::IndexOutOfRange {
                index: object,
                size: self.reps.len(),
            });
        }
        Ok(())
    }

    /// Validates a morphism given as an arbitrary element `x`.
    pub fn morphism(&self, source: usize, target: usize, x: usize) -> Result<CosetMap> {
        self.check(source)?;
        self.check(target)?;
        let g = self.group();
        if x >= g.order() {
            return Err(Error::IndexOutOfRange {
                index: x,
                size: g.order(),
            });
        }
        let (u, v) = (&self.reps[target], &self.reps[source]);
        if !g.conjugates_into(u, x, v) {
            return Err(Error::InvalidMap(format!(
                "x = {x} does not give a G-map G/{u:?} -> G/{v:?}"
            )));
        }
        Ok(CosetMap {
            source,
            target,
            x: g.coset_rep(x, v),
        })
    }
}

impl ACategory for TransitiveCategory {
    type Object = usize;
    type Morphism = CosetMap;

    fn name(&self) -> String {
        format!(
            "transitive G-sets (|G| = {}, {} stabilizer classes)",
            self.group().order(),
            self.reps.len()
        )
    }

    fn source(&self, f: &CosetMap) -> usize {
        f.source
    }

    fn target(&self, f: &CosetMap) -> usize {
        f.target
    }

    fn size(&self, x: &usize) -> usize {
        self.group().index(&self.reps[*x])
    }

    fn objects(&self, max_size: usize) -> Result<Vec<usize>> {
        Ok((0..self.reps.len())
            .filter(|x| self.size(x) <= max_size)
            .collect())
    }

    fn hom(&self, x: &usize, y: &usize) -> Result<Vec<CosetMap>> {
        self.check(*x)?;
        self.check(*y)?;
        Ok(self
            .group()
            .hom(&self.reps[*y], &self.reps[*x])
            .into_iter()
            .map(|e| CosetMap {
                source: *x,
                target: *y,
                x: e,
            })
            .collect())
    }

    fn identity(&self, x: &usize) -> CosetMap {
        CosetMap {
            source: *x,
            target: *x,
            x: 0,
        }
    }

    fn compose(&self, g: &CosetMap, f: &CosetMap) -> Result<CosetMap> {
        if f.target != g.source {
            return Err(Error::TypeMismatch(format!(
                "cannot compose {g:?} after {f:?}"
            )));
        }
        let grp = self.group();
        Ok(CosetMap {
            source: f.source,
            target: g.target,
            x: grp.coset_rep(grp.mul(g.x, f.x), &self.reps[f.source]),
        })
    }

    fn is_iso(&self, f: &CosetMap) -> bool {
        self.size(&f.source) == self.size(&f.target)
    }

    fn inverse(&self, f: &CosetMap) -> Option<CosetMap> {
        if !self.is_iso(f) {
            return None;
        }
        let g = self.group();
        Some(CosetMap {
            source: f.target,
            target: f.source,
            x: g.coset_rep(g.inv(f.x), &self.reps[f.target]),
        })
    }

    fn initial_set(&self) -> Result<Vec<usize>> {
        Ok(vec![0])
    }

    fn canonical(&self, x: &usize) -> (usize, CosetMap) {
        (*x, self.identity(x))
    }

    /// Orbits of the set-level fiber product of the two G-maps into `G/U_A`.
    fn amalgamation_set(
        &self,
        b: &CosetMap,
        c: &CosetMap,
    ) -> Result<Vec<Amalgam<usize, CosetMap>>> {
        if b.source != c.source {
            return Err(Error::TypeMismatch(
                "the span legs need a common source".into(),
            ));
        }
        let g = self.group();
        let (fb, fc) = (self.g_map(b), self.g_map(c));
        let (ub, uc) = (&self.reps[b.target], &self.reps[c.target]);
        let (bpts, cpts) = (&self.coset_reps[b.target], &self.coset_reps[c.target]);
        let mut seen: BTreeMap<(usize, usize), ()> = BTreeMap::new();
        let mut out = Vec::new();
        for p in 0..bpts.len() {
            for q in 0..cpts.len() {
                if fb.map[p] != fc.map[q] || seen.contains_key(&(p, q)) {
                    continue;
                }
                for h in 0..g.order() {
                    seen.insert((fb.source.act(h, p), fc.source.act(h, q)), ());
                }
                let (g1, g2) = (bpts[p], cpts[q]);
                let stab = g.intersection(&g.conjugate(g1, ub), &g.conjugate(g2, uc));
                let (apex, t) = self.locate(&stab)?;
                let ti = g.inv(t);
                out.push(Amalgam {
                    apex,
                    left: CosetMap {
                        source: b.target,
                        target: apex,
                        x: g.coset_rep(g.mul(ti, g1), ub),
                    },
                    right: CosetMap {
                        source: c.target,
                        target: apex,
                        x: g.coset_rep(g.mul(ti, g2), uc),
                    },
                });
            }
        }
        out.sort();
        Ok(out)
    }
}
