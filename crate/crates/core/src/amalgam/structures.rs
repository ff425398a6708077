//! Structure classes as A-categories: objects are canonical members,
//! morphisms are embeddings.
//!
//! A minimal amalgam of `b: A -> B`, `c: A -> C` has a ground set covered by
//! the images of the two legs. It is determined by which points of
//! `C \ c(A)` are identified with points of `B \ b(A)` and by the truth
//! values of the tuples meeting both sides; everything else is forced.
//! In the natural labeling (points of `B` first, then the remaining points
//! of `C` in order) a cocone isomorphism must be the identity, so distinct
//! natural amalgams are never cocone-isomorphic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{ACategory, Amalgam};
use crate::classkit::StructureClass;
use crate::error::{Error, Result};
use crate::relstruct::{canonical_form, embeddings, Embedding, Structure};

type HomCache = Arc<Mutex<HashMap<(Structure, Structure), Vec<Embedding>>>>;

#[derive(Clone, Debug)]
pub struct ClassCategory {
    class: StructureClass,
    homs: HomCache,
}

impl ClassCategory {
    pub fn new(class: StructureClass) -> Self {
        ClassCategory {
            class,
            homs: HomCache::default(),
        }
    }

    pub fn class(&self) -> &StructureClass {
        &self.class
    }

    fn check_member(&self, x: &Structure) -> Result<()> {
        if x.size() > self.class.cap() {
            return Err(Error::CapExceeded {
                what: format!("class {}", self.class.name()),
                requested: x.size(),
                cap: self.class.cap(),
            });
        }
        if !self.class.contains(x) {
            return Err(Error::InvalidStructure(format!(
                "{x:?} is not a member of {}",
                self.class.name()
            )));
        }
        Ok(())
    }

    /// Visits the minimal amalgams in their natural labeling, as the apex and
    /// the map `C -> apex` (the map `B -> apex` is the inclusion), until
    /// `visit` returns false. Returns false if stopped early.
    pub fn for_each_natural_amalgam(
        &self,
        b: &Embedding,
        c: &Embedding,
        visit: &mut dyn FnMut(Structure, &[usize]) -> bool,
    ) -> Result<bool> {
        if b.source() != c.source() {
            return Err(Error::TypeMismatch(
                "span legs have different sources".into(),
            ));
        }
        self.check_member(b.target())?;
        self.check_member(c.target())?;
        let (bb, cc) = (b.target(), c.target());
        let nb = bb.size();
        let mut in_image_b = vec![false; nb];
        for &v in b.map() {
            in_image_b[v] = true;
        }
        let free_b: Vec<usize> = (0..nb).filter(|&v| !in_image_b[v]).collect();
        // on the image of c the second leg is forced by commutativity
        let mut cmap = vec![usize::MAX; cc.size()];
        for (i, &v) in c.map().iter().enumerate() {
            cmap[v] = b.map()[i];
        }
        let free_c: Vec<usize> = (0..cc.size()).filter(|&v| cmap[v] == usize::MAX).collect();
        let mut gluings = Vec::new();
        glue(
            &free_b,
            &free_c,
            0,
            &mut vec![false; free_b.len()],
            &mut cmap,
            &mut gluings,
        );
        for g in gluings {
            let mut next_new = nb;
            let cmap: Vec<usize> = g
                .iter()
                .map(|&d| {
                    if d == NEW {
                        next_new += 1;
                        next_new - 1
                    } else {
                        d
                    }
                })
                .collect();
            let n = next_new;
            if !overlap_agrees(bb, cc, &cmap) {
                continue;
            }
            let mut inverse = vec![usize::MAX; n];
            for (y, &d) in cmap.iter().enumerate() {
                inverse[d] = y;
            }
            let decided = |r: usize, t: &[usize]| {
                if t.iter().all(|&d| d < nb) {
                    Some(bb.holds(r, t))
                } else if t.iter().all(|&d| inverse[d] != usize::MAX) {
                    let pre: Vec<usize> = t.iter().map(|&d| inverse[d]).collect();
                    Some(cc.holds(r, &pre))
                } else {
                    None
                }
            };
            let go_on = self.class.completions(n, &decided, &mut |d| {
                !self.class.contains(&d) || visit(d, &cmap)
            });
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

const NEW: usize = usize::MAX - 1;

/// All ways of sending the free points of `C` injectively to free points of
/// `B` or to new points (marked `NEW`).
fn glue(
    free_b: &[usize],
    free_c: &[usize],
    k: usize,
    used: &mut Vec<bool>,
    cmap: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if k == free_c.len() {
        out.push(cmap.clone());
        return;
    }
    let y = free_c[k];
    cmap[y] = NEW;
    glue(free_b, free_c, k + 1, used, cmap, out);
    for (i, &v) in free_b.iter().enumerate() {
        if !used[i] {
            used[i] = true;
            cmap[y] = v;
            glue(free_b, free_c, k + 1, used, cmap, out);
            used[i] = false;
        }
    }
    cmap[y] = usize::MAX;
}

/// Tuples of `C` landing entirely inside `B` must agree with `B`.
fn overlap_agrees(bb: &Structure, cc: &Structure, cmap: &[usize]) -> bool {
    let nb = bb.size();
    let inside: Vec<usize> = (0..cc.size()).filter(|&y| cmap[y] < nb).collect();
    let k = inside.len();
    for (r, sym) in cc.signature().symbols().iter().enumerate() {
        let count = k.pow(sym.arity as u32);
        for mut code in 0..count {
            let mut t = vec![0; sym.arity];
            for slot in t.iter_mut().rev() {
                *slot = inside[code % k];
                code /= k;
            }
            let image: Vec<usize> = t.iter().map(|&y| cmap[y]).collect();
            if cc.holds(r, &t) != bb.holds(r, &image) {
                return false;
            }
        }
    }
    true
}

impl ACategory for ClassCategory {
    type Object = Structure;
    type Morphism = Embedding;

    fn name(&self) -> String {
        self.class.name().to_string()
    }

    fn source(&self, f: &Embedding) -> Structure {
        f.source().clone()
    }

    fn target(&self, f: &Embedding) -> Structure {
        f.target().clone()
    }

    fn size(&self, x: &Structure) -> usize {
        x.size()
    }

    fn objects(&self, max_size: usize) -> Result<Vec<Structure>> {
        self.class.enumerate_up_to(max_size)
    }

    fn hom(&self, x: &Structure, y: &Structure) -> Result<Vec<Embedding>> {
        let key = (x.clone(), y.clone());
        if let Some(h) = self.homs.lock().expect("hom cache").get(&key) {
            return Ok(h.clone());
        }
        let h = embeddings(x, y)?;
        self.homs.lock().expect("hom cache").insert(key, h.clone());
        Ok(h)
    }

    fn identity(&self, x: &Structure) -> Embedding {
        Embedding::identity(x)
    }

    fn compose(&self, g: &Embedding, f: &Embedding) -> Result<Embedding> {
        g.after(f)
    }

    fn is_iso(&self, f: &Embedding) -> bool {
        f.is_bijective()
    }

    fn inverse(&self, f: &Embedding) -> Option<Embedding> {
        f.inverse()
    }

    fn initial_set(&self) -> Result<Vec<Structure>> {
        let empty = Structure::empty(self.class.signature().clone(), 0)?;
        Ok(if self.class.contains(&empty) {
            vec![empty]
        } else {
            vec![]
        })
    }

    fn canonical(&self, x: &Structure) -> (Structure, Embedding) {
        let c = canonical_form(x);
        let iso = c.iso_from(x);
        (c.structure, iso)
    }

    fn amalgamation_set(
        &self,
        b: &Embedding,
        c: &Embedding,
    ) -> Result<Vec<Amalgam<Structure, Embedding>>> {
        let mut out = Vec::new();
        let nb = b.target().size();
        self.for_each_natural_amalgam(b, c, &mut |d, cmap| {
            let can = canonical_form(&d);
            let relabel = &can.relabeling;
            let left: Vec<usize> = (0..nb).map(|v| relabel[v]).collect();
            let right: Vec<usize> = cmap.iter().map(|&v| relabel[v]).collect();
            out.push(Amalgam {
                left: Embedding::new_unchecked(b.target().clone(), can.structure.clone(), left),
                right: Embedding::new_unchecked(c.target().clone(), can.structure.clone(), right),
                apex: can.structure,
            });
            true
        })?;
        out.sort();
        Ok(out)
    }

    fn nontrivial_self_amalgam(
        &self,
        f: &Embedding,
    ) -> Result<Option<Amalgam<Structure, Embedding>>> {
        let nb = f.target().size();
        let mut found = None;
        self.for_each_natural_amalgam(f, f, &mut |d, cmap| {
            let trivial = d.size() == nb && cmap.iter().enumerate().all(|(y, &v)| y == v);
            if !trivial {
                found = Some((d, cmap.to_vec()));
            }
            trivial
        })?;
        Ok(found.map(|(d, cmap)| {
            let can = canonical_form(&d);
            let left: Vec<usize> = (0..nb).map(|v| can.relabeling[v]).collect();
            let right: Vec<usize> = cmap.iter().map(|&v| can.relabeling[v]).collect();
            Amalgam {
                left: Embedding::new_unchecked(f.target().clone(), can.structure.clone(), left),
                right: Embedding::new_unchecked(f.target().clone(), can.structure.clone(), right),
                apex: can.structure,
            }
        }))
    }

    fn has_amalgam(&self, b: &Embedding, c: &Embedding) -> Result<bool> {
        Ok(!self.for_each_natural_amalgam(b, c, &mut |_, _| false)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgam::{
        has_amalgamation_property, has_joint_embedding, is_a_category, is_epimorphism_in_a,
        self_amalgamations, Verdict,
    };
    use crate::classkit;
    use crate::permlab::{pattern_embedding, structure_to_perm};

    fn emb(x: &Structure, y: &Structure, map: &[usize]) -> Embedding {
        Embedding::new(x.clone(), y.clone(), map.to_vec()).unwrap()
    }

    /// Embedding of a pattern into a permutation at the given positions,
    /// through the canonical relabelings.
    fn perm_emb(pattern: &str, host: &str, positions: &[usize]) -> Embedding {
        pattern_embedding(&pattern.parse().unwrap(), &host.parse().unwrap(), positions).unwrap()
    }

    #[test]
    fn sets_over_a_point() {
        let cat = ClassCategory::new(classkit::sets());
        let (a, b) = (Structure::set(1), Structure::set(2));
        let f = emb(&a, &b, &[0]);
        let ams = cat.amalgamation_set(&f, &f).unwrap();
        let mut sizes: Vec<usize> = ams.iter().map(|m| m.apex.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 3]);
        assert!(!is_epimorphism_in_a(&cat, &f).unwrap());
    }

    #[test]
    fn separable_span() {
        let b = perm_emb("123", "1342", &[0, 1, 2]);
        let c = perm_emb("123", "3124", &[1, 2, 3]);
        let all = ClassCategory::new(classkit::all_permutations());
        let ams = all.amalgamation_set(&b, &c).unwrap();
        assert_eq!(ams.len(), 1);
        assert_eq!(
            structure_to_perm(&ams[0].apex).unwrap().to_string(),
            "41352"
        );
        let sep = ClassCategory::new(classkit::separable_permutations());
        assert!(sep.amalgamation_set(&b, &c).unwrap().is_empty());
        assert!(!sep.has_amalgam(&b, &c).unwrap());
    }

    #[test]
    fn matching_vertex_in_edge() {
        let cat = ClassCategory::new(classkit::matchings());
        let edge = cat
            .objects(2)
            .unwrap()
            .into_iter()
            .find(|x| x.tuple_count() == 2)
            .unwrap();
        let vertex = Structure::empty(edge.signature().clone(), 1).unwrap();
        let f = emb(&vertex, &edge, &[0]);
        let selfs = self_amalgamations(&cat, &f).unwrap();
        assert_eq!(selfs.len(), 1);
        assert!(is_epimorphism_in_a(&cat, &f).unwrap());
        match is_a_category(&cat, 3).unwrap() {
            Verdict::Counterexample(w) => {
                assert_eq!(w.x, vertex);
                assert_eq!(w.y, edge);
            }
            Verdict::Pass => panic!("matchings should fail"),
        }
    }

    #[test]
    fn isomorphism_has_only_trivial_self_amalgam() {
        let cat = ClassCategory::new(classkit::graphs());
        for x in cat.objects(3).unwrap() {
            for f in cat.hom(&x, &x).unwrap() {
                assert_eq!(self_amalgamations(&cat, &f).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn small_verdicts() {
        for class in [classkit::sets(), classkit::total_orders()] {
            let cat = ClassCategory::new(class);
            assert!(is_a_category(&cat, 3).unwrap().is_pass());
            assert!(has_amalgamation_property(&cat, 3).unwrap().is_pass());
            assert!(has_joint_embedding(&cat, 3).unwrap().is_pass());
        }
    }

    #[test]
    fn amalgams_commute_and_cover() {
        let cat = ClassCategory::new(classkit::graphs());
        let objs = cat.objects(3).unwrap();
        for a in &objs {
            for bo in &objs {
                for co in &objs {
                    for b in cat.hom(a, bo).unwrap() {
                        for c in cat.hom(a, co).unwrap() {
                            for am in cat.amalgamation_set(&b, &c).unwrap() {
                                let lb = am.left.after(&b).unwrap();
                                let rc = am.right.after(&c).unwrap();
                                assert_eq!(lb.map(), rc.map());
                                let mut covered = vec![false; am.apex.size()];
                                for &v in am.left.map().iter().chain(am.right.map()) {
                                    covered[v] = true;
                                }
                                assert!(covered.iter().all(|&x| x));
                                assert!(cat.class().contains(&am.apex));
                            }
                        }
                    }
                }
            }
        }
    }
}
