//! Permutations in one-line notation and their encoding as a pair of total
//! orders.
//!
//! A permutation of length `n` is a sequence of the values `1..=n`. As a
//! structure its ground set is the set of positions `0..n`, the relation
//! `value` holds on `(i, j)` when `σ(i) < σ(j)` and `position` holds when
//! `i < j`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relstruct::{canonical_form, Embedding, Signature, Structure, StructureBuilder};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{values:?} is not a permutation of 1..={n}"
                )));
            }
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The permutation order-isomorphic to an arbitrary sequence of distinct values.
    pub fn standardize(seq: &[usize]) -> Self {
        let mut idx: Vec<usize> = (0..seq.len()).collect();
        idx.sort_by_key(|&i| seq[i]);
        let mut out = vec![0; seq.len()];
        for (rank, &i) in idx.iter().enumerate() {
            out[i] = rank + 1;
        }
        Permutation(out)
    }

    /// The pattern formed by the entries at the given positions.
    pub fn pattern_at(&self, positions: &[usize]) -> Self {
        let seq: Vec<usize> = positions.iter().map(|&p| self.0[p]).collect();
        Permutation::standardize(&seq)
    }

    /// All permutations of length `n`, lexicographically.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v + 1);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Digit strings such as `41352`, or comma-separated values for longer permutations.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry {t:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10).map(|d| d as usize).ok_or_else(|| {
                        Error::InvalidPermutation(format!("bad digit {c:?} in {s:?}"))
                    })
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

pub const VALUE: usize = 0;
pub const POSITION: usize = 1;

/// The signature of two binary relations `value`, `position`.
pub fn two_orders_signature() -> Arc<Signature> {
    Signature::new([("value", 2), ("position", 2)]).expect("valid signature")
}

pub fn perm_to_structure(sigma: &Permutation) -> Structure {
    let n = sigma.len();
    let mut b = StructureBuilder::new(two_orders_signature(), n).expect("small structure");
    for i in 0..n {
        for j in 0..n {
            if sigma.0[i] < sigma.0[j] {
                b.add(VALUE, &[i, j]).expect("in range");
            }
            if i < j {
                b.add(POSITION, &[i, j]).expect("in range");
            }
        }
    }
    b.build()
}

/// Ranks of the points of `x` under relation `r`, if it is a strict total order.
pub(crate) fn order_ranks(x: &Structure, r: usize) -> Option<Vec<usize>> {
    let n = x.size();
    let mut rank = vec![0; n];
    for i in 0..n {
        if x.holds(r, &[i, i]) {
            return None;
        }
        for j in i + 1..n {
            match (x.holds(r, &[i, j]), x.holds(r, &[j, i])) {
                (true, false) => rank[j] += 1,
                (false, true) => rank[i] += 1,
                _ => return None,
            }
        }
    }
    // comparability of every pair plus distinct ranks forces transitivity
    let mut seen = vec![false; n];
    for &k in &rank {
        if std::mem::replace(&mut seen[k], true) {
            return None;
        }
    }
    Some(rank)
}

pub fn structure_to_perm(x: &Structure) -> Result<Permutation> {
    if **x.signature() != *two_orders_signature() {
        return Err(Error::SignatureMismatch(
            "expected the value/position signature".into(),
        ));
    }
    let bad = || Error::InvalidStructure("not a pair of strict total orders".into());
    let value = order_ranks(x, VALUE).ok_or_else(bad)?;
    let position = order_ranks(x, POSITION).ok_or_else(bad)?;
    let mut out = vec![0; x.size()];
    for p in 0..x.size() {
        out[position[p]] = value[p] + 1;
    }
    Ok(Permutation(out))
}

/// The embedding of `pattern` into `host` at the given positions, between
/// the canonical forms of the two structures.
pub fn pattern_embedding(
    pattern: &Permutation,
    host: &Permutation,
    positions: &[usize],
) -> Result<Embedding> {
    let (px, hx) = (perm_to_structure(pattern), perm_to_structure(host));
    if positions.len() != px.size() || positions.iter().any(|&p| p >= hx.size()) {
        return Err(Error::InvalidMap(format!(
            "{positions:?} are not {} positions of {host}",
            px.size()
        )));
    }
    let (pc, hc) = (canonical_form(&px), canonical_form(&hx));
    let mut map = vec![0; px.size()];
    for (old, &new) in pc.relabeling.iter().enumerate() {
        map[new] = hc.relabeling[positions[old]];
    }
    Embedding::new(pc.structure, hc.structure, map)
}

/// Whether `tau` occurs as a pattern in `sigma`.
pub fn contains_pattern(sigma: &Permutation, tau: &Permutation) -> bool {
    find_pattern(sigma, tau).is_some()
}

/// The lexicographically first occurrence of `tau` in `sigma`, as positions.
pub fn find_pattern(sigma: &Permutation, tau: &Permutation) -> Option<Vec<usize>> {
    fn rec(s: &[usize], t: &[usize], start: usize, chosen: &mut Vec<usize>) -> bool {
        let k = chosen.len();
        if k == t.len() {
            return true;
        }
        if s.len() - start < t.len() - k {
            return false;
        }
        for p in start..s.len() {
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(m, &q)| (s[q] < s[p]) == (t[m] < t[k]));
            if ok {
                chosen.push(p);
                if rec(s, t, p + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(tau.len());
    rec(&sigma.0, &tau.0, 0, &mut chosen).then_some(chosen)
}

/// `sigma[blocks]`: entry `i` of `sigma` is replaced by an interval patterned on `blocks[i]`.
pub fn inflation(sigma: &Permutation, blocks: &[Permutation]) -> Result<Permutation> {
    if blocks.len() != sigma.len() {
        return Err(Error::InvalidPermutation(format!(
            "{} blocks for a permutation of length {}",
            blocks.len(),
            sigma.len()
        )));
    }
    // offset of the block whose interval sits at value rank v
    let mut by_value = vec![0; sigma.len()];
    for (i, &v) in sigma.0.iter().enumerate() {
        by_value[v - 1] = i;
    }
    let mut offset = vec![0; sigma.len()];
    let mut acc = 0;
    for &i in &by_value {
        offset[i] = acc;
        acc += blocks[i].len();
    }
    let mut out = Vec::with_capacity(acc);
    for (i, block) in blocks.iter().enumerate() {
        out.extend(block.0.iter().map(|&v| v + offset[i]));
    }
    Ok(Permutation(out))
}

pub fn sum(alpha: &Permutation, beta: &Permutation) -> Permutation {
    inflation(&Permutation(vec![1, 2]), &[alpha.clone(), beta.clone()]).expect("two blocks")
}

pub fn skew_sum(alpha: &Permutation, beta: &Permutation) -> Permutation {
    inflation(&Permutation(vec![2, 1]), &[alpha.clone(), beta.clone()]).expect("two blocks")
}

/// Separability as avoidance of 2413 and 3142.
pub fn is_separable_by_avoidance(sigma: &Permutation) -> bool {
    !contains_pattern(sigma, &Permutation(vec![2, 4, 1, 3]))
        && !contains_pattern(sigma, &Permutation(vec![3, 1, 4, 2]))
}

/// Separability as recursive splitting into sums and skew sums down to length 1.
pub fn is_separable_by_decomposition(sigma: &Permutation) -> bool {
    fn rec(s: &[usize]) -> bool {
        let n = s.len();
        if n <= 1 {
            return true;
        }
        let (mut lo, mut hi) = (usize::MAX, 0);
        for k in 1..n {
            lo = lo.min(s[k - 1]);
            hi = hi.max(s[k - 1]);
            let prefix_is_interval = hi - lo + 1 == k;
            let low = prefix_is_interval && lo == s.iter().copied().min().unwrap();
            let high = prefix_is_interval && hi == s.iter().copied().max().unwrap();
            if low || high {
                return rec(&s[..k]) && rec(&s[k..]);
            }
        }
        false
    }
    rec(&sigma.0)
}

pub fn is_separable(sigma: &Permutation) -> bool {
    is_separable_by_avoidance(sigma)
}

/// A hereditary class of permutations given by a membership predicate.
#[derive(Clone)]
pub struct PermClass {
    name: String,
    member: Arc<dyn Fn(&Permutation) -> bool + Send + Sync>,
}

impl PermClass {
    pub fn new(
        name: impl Into<String>,
        member: impl Fn(&Permutation) -> bool + Send + Sync + 'static,
    ) -> Self {
        PermClass {
            name: name.into(),
            member: Arc::new(member),
        }
    }

    pub fn all() -> Self {
        PermClass::new("all_permutations", |_| true)
    }

    pub fn separable() -> Self {
        PermClass::new("separable_permutations", is_separable)
    }

    /// The class of permutations avoiding every listed pattern.
    pub fn avoiding(patterns: Vec<Permutation>) -> Self {
        let name = format!(
            "Av({})",
            patterns
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        PermClass::new(name, move |s| {
            !patterns.iter().any(|p| contains_pattern(s, p))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, sigma: &Permutation) -> bool {
        (self.member)(sigma)
    }

    pub fn members(&self, n: usize) -> Vec<Permutation> {
        Permutation::all(n)
            .into_iter()
            .filter(|p| self.contains(p))
            .collect()
    }
}

impl fmt::Debug for PermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermClass({})", self.name)
    }
}

/// An inflation of members that leaves the class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InflationWitness {
    pub sigma: Permutation,
    pub blocks: Vec<Permutation>,
    pub result: Permutation,
}

/// Exhaustively checks closure under inflation for results of length `<= n_max`.
pub fn is_substitution_closed(class: &PermClass, n_max: usize) -> Result<Option<InflationWitness>> {
    const CAP: usize = 8;
    if n_max > CAP {
        return Err(Error::CapExceeded {
            what: "substitution closure check".into(),
            requested: n_max,
            cap: CAP,
        });
    }
    let members: Vec<Vec<Permutation>> = (0..=n_max).map(|n| class.members(n)).collect();
    for k in 1..=n_max {
        for sigma in &members[k] {
            let mut blocks = Vec::with_capacity(k);
            if let Some(w) = search_blocks(class, &members, sigma, n_max, &mut blocks) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn search_blocks(
    class: &PermClass,
    members: &[Vec<Permutation>],
    sigma: &Permutation,
    budget: usize,
    blocks: &mut Vec<Permutation>,
) -> Option<InflationWitness> {
    let remaining = sigma.len() - blocks.len();
    if remaining == 0 {
        let result = inflation(sigma, blocks).expect("block count");
        return (!class.contains(&result)).then(|| InflationWitness {
            sigma: sigma.clone(),
            blocks: blocks.clone(),
            result,
        });
    }
    // every later block needs at least one entry
    for len in 1..=budget + 1 - remaining {
        for alpha in &members[len] {
            blocks.push(alpha.clone());
            let found = search_blocks(class, members, sigma, budget - len, blocks);
            blocks.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

/// A nontrivial self-amalgamation of `sigma` over `sigma` with position `i`
/// deleted: inflate entry `i` by a length-2 block. Returns the apex and the
/// two position maps `sigma -> apex`, which differ exactly at `i`.
pub fn doubling_self_amalgam(
    sigma: &Permutation,
    i: usize,
    block: &Permutation,
) -> Result<(Permutation, Vec<usize>, Vec<usize>)> {
    if i >= sigma.len() || block.len() != 2 {
        return Err(Error::InvalidPermutation(
            "need a position of sigma and a block of length 2".into(),
        ));
    }
    let blocks: Vec<Permutation> = (0..sigma.len())
        .map(|k| {
            if k == i {
                block.clone()
            } else {
                Permutation::identity(1)
            }
        })
        .collect();
    let apex = inflation(sigma, &blocks)?;
    let shift = |k: usize| if k <= i { k } else { k + 1 };
    let left: Vec<usize> = (0..sigma.len()).map(shift).collect();
    let mut right = left.clone();
    right[i] = i + 1;
    Ok((apex, left, right))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relstruct::{are_isomorphic, embeddings, induced_substructure};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn inflation_literal() {
        let got = inflation(&p("231"), &[p("12"), p("321"), p("3412")]).unwrap();
        assert_eq!(got.to_string(), "569873412");
    }

    #[test]
    fn inflation_trivial_cases() {
        assert_eq!(inflation(&p("1"), &[p("2413")]).unwrap(), p("2413"));
        let ones = vec![p("1"); 5];
        assert_eq!(inflation(&p("41352"), &ones).unwrap(), p("41352"));
        assert!(inflation(&p("12"), &[p("1")]).is_err());
    }

    #[test]
    fn sums() {
        assert_eq!(sum(&p("1"), &p("1")), p("12"));
        assert_eq!(skew_sum(&p("1"), &p("1")), p("21"));
        assert_eq!(sum(&p("21"), &p("1")), p("213"));
    }

    #[test]
    fn parsing_and_display() {
        assert!("1224".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().unwrap().is_empty());
        let long = Permutation::identity(10);
        assert_eq!(long.to_string(), "1,2,3,4,5,6,7,8,9,10");
        assert_eq!(long.to_string().parse::<Permutation>().unwrap(), long);
    }

    #[test]
    fn containment_examples() {
        assert!(contains_pattern(&p("41352"), &p("3142")));
        assert!(contains_pattern(&p("41352"), &p("41352")));
        assert!(!contains_pattern(&p("123"), &p("21")));
    }

    #[test]
    fn separability_examples() {
        assert!(!is_separable(&p("41352")));
        assert!(is_separable(&p("12")));
        assert!(!is_separable(&p("2413")));
        assert!(!is_separable_by_decomposition(&p("41352")));
    }

    #[test]
    fn separability_algorithms_agree() {
        for n in 0..=7 {
            for s in Permutation::all(n) {
                assert_eq!(
                    is_separable_by_avoidance(&s),
                    is_separable_by_decomposition(&s),
                    "{s}"
                );
            }
        }
    }

    #[test]
    fn structure_round_trip() {
        for n in 0..=4 {
            for s in Permutation::all(n) {
                let x = perm_to_structure(&s);
                assert_eq!(structure_to_perm(&x).unwrap(), s);
                // a relabeled copy encodes the same permutation
                let rev: Vec<usize> = (0..n).rev().collect();
                assert_eq!(structure_to_perm(&x.relabel(&rev)).unwrap(), s);
            }
        }
    }

    #[test]
    fn non_order_is_rejected() {
        let sig = two_orders_signature();
        let x = Structure::empty(sig, 2).unwrap();
        assert!(structure_to_perm(&x).is_err());
    }

    #[test]
    fn containment_agrees_with_embeddings() {
        for n in 0..=5 {
            for s in Permutation::all(n) {
                let xs = perm_to_structure(&s);
                for k in 0..=3 {
                    for t in Permutation::all(k) {
                        let xt = perm_to_structure(&t);
                        let via_emb = !embeddings(&xt, &xs).unwrap().is_empty();
                        assert_eq!(contains_pattern(&s, &t), via_emb, "{s} {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn pattern_12_in_231_has_one_occurrence() {
        let e = embeddings(&perm_to_structure(&p("12")), &perm_to_structure(&p("231"))).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].map(), &[0, 1]);
    }

    #[test]
    fn deleting_the_middle_three() {
        let s = perm_to_structure(&p("41352"));
        // value 3 sits at position 2
        let (sub, _) = induced_substructure(&s, &[0, 1, 3, 4]).unwrap();
        assert!(are_isomorphic(&sub, &perm_to_structure(&p("3142"))).unwrap());
    }

    #[test]
    fn substitution_closure() {
        assert!(is_substitution_closed(&PermClass::separable(), 6)
            .unwrap()
            .is_none());
        assert!(is_substitution_closed(&PermClass::all(), 5)
            .unwrap()
            .is_none());
        let w = is_substitution_closed(&PermClass::avoiding(vec![p("321")]), 6)
            .unwrap()
            .expect("Av(321) is not closed");
        assert_eq!(inflation(&w.sigma, &w.blocks).unwrap(), w.result);
        assert!(contains_pattern(&w.result, &p("321")));
    }

    #[test]
    fn doubling_gives_two_distinct_copies() {
        let (apex, l, r) = doubling_self_amalgam(&p("2413"), 1, &p("12")).unwrap();
        assert_eq!(apex, p("24513"));
        assert_ne!(l, r);
        assert_eq!(apex.pattern_at(&l), p("2413"));
        assert_eq!(apex.pattern_at(&r), p("2413"));
    }
}
