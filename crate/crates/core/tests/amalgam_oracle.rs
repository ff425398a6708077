//! Amalgamation sets against exhaustive cocone search.
//!
//! For each span `B <- A -> C` the oracle tries every member `D` of the class
//! up to `|B| + |C| - |A|` points and every pair of maps `B -> D`, `C -> D`
//! that commute on `A` and jointly cover `D`, then identifies cocones that
//! differ by an automorphism of `D`.

use std::collections::BTreeSet;

use pregalois::amalgam::{ACategory, ClassCategory};
use pregalois::classkit::{self, StructureClass};
use pregalois::relstruct::{Embedding, Structure};

type Key = (Structure, Vec<usize>, Vec<usize>);

fn injections(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..m {
            if !cur.contains(&v) {
                cur.push(v);
                go(n, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, m, &mut Vec::new(), &mut out);
    out
}

fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Every injective map `x -> y` that preserves and reflects each relation.
fn brute_embeddings(x: &Structure, y: &Structure) -> Vec<Vec<usize>> {
    let arities: Vec<usize> = x.signature().symbols().iter().map(|s| s.arity).collect();
    injections(x.size(), y.size())
        .into_iter()
        .filter(|m| {
            arities.iter().enumerate().all(|(r, &k)| {
                tuples(x.size(), k).iter().all(|t| {
                    let image: Vec<usize> = t.iter().map(|&i| m[i]).collect();
                    x.holds(r, t) == y.holds(r, &image)
                })
            })
        })
        .collect()
}

fn key(d: &Structure, l: &[usize], r: &[usize], auts: &[Vec<usize>]) -> Key {
    auts.iter()
        .map(|s| {
            (
                d.clone(),
                l.iter().map(|&i| s[i]).collect(),
                r.iter().map(|&i| s[i]).collect(),
            )
        })
        .min()
        .expect("identity automorphism")
}

fn brute_amalgams(class: &StructureClass, b: &Embedding, c: &Embedding) -> BTreeSet<Key> {
    let (nb, nc) = (b.target().size(), c.target().size());
    let mut out = BTreeSet::new();
    for n in nb.max(nc)..=nb + nc - b.source().size() {
        for d in class.enumerate(n).unwrap().iter() {
            let auts = brute_embeddings(d, d);
            let ls = brute_embeddings(b.target(), d);
            let rs = brute_embeddings(c.target(), d);
            for l in &ls {
                for r in &rs {
                    let commutes = b.map().iter().zip(c.map()).all(|(&i, &j)| l[i] == r[j]);
                    let covered: BTreeSet<usize> = l.iter().chain(r).copied().collect();
                    if commutes && covered.len() == n {
                        out.insert(key(d, l, r, &auts));
                    }
                }
            }
        }
    }
    out
}

fn compare(class: StructureClass, max_side: usize, max_apex: usize) -> usize {
    let cat = ClassCategory::new(class.clone());
    let objs = cat.objects(max_side).unwrap();
    let mut spans = 0;
    for a in &objs {
        for bt in objs.iter().filter(|x| x.size() >= a.size()) {
            for ct in objs.iter().filter(|x| x.size() >= a.size()) {
                if bt.size() + ct.size() - a.size() > max_apex {
                    continue;
                }
                for b in cat.hom(a, bt).unwrap() {
                    for c in cat.hom(a, ct).unwrap() {
                        spans += 1;
                        let expected = brute_amalgams(&class, &b, &c);
                        let got: BTreeSet<Key> = cat
                            .amalgamation_set(&b, &c)
                            .unwrap()
                            .iter()
                            .map(|am| {
                                let auts = brute_embeddings(&am.apex, &am.apex);
                                key(&am.apex, am.left.map(), am.right.map(), &auts)
                            })
                            .collect();
                        let listed = cat.amalgamation_set(&b, &c).unwrap().len();
                        assert_eq!(listed, got.len(), "duplicate cocones for {b:?}, {c:?}");
                        assert_eq!(got, expected, "{} span {b:?}, {c:?}", class.name());
                    }
                }
            }
        }
    }
    spans
}

#[test]
fn graphs_match_exhaustive_search() {
    assert!(compare(classkit::graphs(), 3, 4) > 0);
}

#[test]
fn matchings_match_exhaustive_search() {
    assert!(compare(classkit::matchings(), 3, 5) > 0);
}

#[test]
fn total_orders_match_exhaustive_search() {
    assert!(compare(classkit::total_orders(), 3, 5) > 0);
}

#[test]
fn permutations_match_exhaustive_search() {
    assert!(compare(classkit::all_permutations(), 3, 4) > 0);
    assert!(compare(classkit::separable_permutations(), 3, 5) > 0);
}
