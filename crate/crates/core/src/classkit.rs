//! Classes of finite structures closed under isomorphism, with isomorph-free
//! enumeration by one-point extension.
//!
//! Every relation of a class carries a [`RelationKind`] describing its shape
//! (an arbitrary relation, a simple graph, a strict total order) and an
//! optional list of unary sort markers restricting which points it may
//! touch. The kinds drive both enumeration and the completion of partially
//! specified structures used by amalgamation.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permlab::{self, Permutation};
use crate::relstruct::{
    canonical_form, induced_substructure, Signature, Structure, StructureBuilder,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    /// Any set of tuples.
    Free,
    /// A binary relation that is symmetric and irreflexive.
    SymmetricIrreflexive,
    /// A binary strict total order on the points it may touch.
    StrictTotalOrder,
}

/// Shape of one relation: its kind plus unary sort markers `(relation, polarity)`.
/// Tuples may only mention points `p` with `holds(marker, [p]) == polarity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationSpec {
    pub kind: RelationKind,
    pub sorts: Vec<(usize, bool)>,
}

impl RelationSpec {
    pub fn plain(kind: RelationKind) -> Self {
        RelationSpec {
            kind,
            sorts: vec![],
        }
    }
}

type Predicate = Arc<dyn Fn(&Structure) -> bool + Send + Sync>;

#[derive(Clone)]
enum Extra {
    None,
    Predicate(Predicate),
    Product(StructureClass, StructureClass),
}

struct ClassData {
    name: String,
    signature: Arc<Signature>,
    specs: Vec<RelationSpec>,
    extra: Extra,
    hereditary: bool,
    cap: usize,
    // listing order of representatives of one size, when not the structure order
    sort_key: Option<fn(&Structure) -> Vec<usize>>,
    // (shape only?, n) -> canonical representatives
    cache: Mutex<HashMap<(bool, usize), Arc<Vec<Structure>>>>,
}

/// A class of finite structures over one signature. Cheap to clone.
#[derive(Clone)]
pub struct StructureClass(Arc<ClassData>);

impl fmt::Debug for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureClass({})", self.0.name)
    }
}

impl PartialEq for StructureClass {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

pub const DEFAULT_CAP: usize = 6;
pub const ORDER_CAP: usize = 8;

impl StructureClass {
    /// A class given by relation shapes and an optional extra predicate.
    ///
    /// `hereditary` must be true only if the class is closed under induced
    /// substructures; enumeration then extends members only.
    pub fn new(
        name: impl Into<String>,
        signature: Arc<Signature>,
        specs: Vec<RelationSpec>,
        extra: Option<Predicate>,
        hereditary: bool,
        cap: usize,
    ) -> Result<Self> {
        validate_specs(&signature, &specs)?;
        Ok(Self::from_parts(
            name.into(),
            signature,
            specs,
            extra.map_or(Extra::None, Extra::Predicate),
            hereditary,
            cap,
        ))
    }

    fn from_parts(
        name: String,
        signature: Arc<Signature>,
        specs: Vec<RelationSpec>,
        extra: Extra,
        hereditary: bool,
        cap: usize,
    ) -> Self {
        StructureClass(Arc::new(ClassData {
            name,
            signature,
            specs,
            extra,
            hereditary,
            cap,
            sort_key: None,
            cache: Mutex::new(HashMap::new()),
        }))
    }

    fn with_sort_key(mut self, key: fn(&Structure) -> Vec<usize>) -> Self {
        Arc::get_mut(&mut self.0).expect("fresh class").sort_key = Some(key);
        self
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.0.signature
    }

    pub fn specs(&self) -> &[RelationSpec] {
        &self.0.specs
    }

    pub fn cap(&self) -> usize {
        self.0.cap
    }

    pub fn is_declared_hereditary(&self) -> bool {
        self.0.hereditary
    }

    /// Whether `x` satisfies the relation shapes alone.
    pub fn satisfies_shapes(&self, x: &Structure) -> bool {
        x.signature() == self.signature() && shapes_hold(x, &self.0.specs)
    }

    pub fn contains(&self, x: &Structure) -> bool {
        if !self.satisfies_shapes(x) {
            return false;
        }
        match &self.0.extra {
            Extra::None => true,
            Extra::Predicate(p) => p(x),
            Extra::Product(c1, c2) => {
                let (x1, x2) = split_pair(c1, c2, x);
                c1.contains(&x1) && c2.contains(&x2)
            }
        }
    }

    fn check_cap(&self, n: usize) -> Result<()> {
        if n > self.0.cap {
            return Err(Error::CapExceeded {
                what: format!("class {}", self.0.name),
                requested: n,
                cap: self.0.cap,
            });
        }
        Ok(())
    }

    /// One canonical representative per isomorphism class of members of size `n`.
    pub fn enumerate(&self, n: usize) -> Result<Arc<Vec<Structure>>> {
        self.check_cap(n)?;
        self.generate(false, n)
    }

    /// Representatives of size `n` of the members (or, with `shape_only`, of
    /// all structures satisfying the relation shapes).
    fn generate(&self, shape_only: bool, n: usize) -> Result<Arc<Vec<Structure>>> {
        let key = (shape_only, n);
        if let Some(v) = self.0.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let keep = |x: &Structure| shape_only || self.contains(x);
        let reps: Vec<Structure> = if !shape_only && !self.0.hereditary {
            // no one-point extension argument: filter the shape-only list
            self.generate(true, n)?
                .iter()
                .filter(|x| keep(x))
                .cloned()
                .collect()
        } else if n == 0 {
            let empty = Structure::empty(self.signature().clone(), 0)?;
            if keep(&empty) {
                vec![empty]
            } else {
                vec![]
            }
        } else {
            let base = self.generate(shape_only, n - 1)?;
            let top = n - 1;
            let mut found = BTreeSet::new();
            for x in base.iter() {
                let decided = |r: usize, t: &[usize]| (!t.contains(&top)).then(|| x.holds(r, t));
                complete(self.signature(), &self.0.specs, n, &decided, &mut |y| {
                    if keep(&y) {
                        found.insert(canonical_form(&y).structure);
                    }
                    true
                });
            }
            let mut reps: Vec<Structure> = found.into_iter().collect();
            if let Some(key) = self.0.sort_key {
                reps.sort_by_cached_key(key);
            }
            reps
        };
        let reps = Arc::new(reps);
        self.0
            .cache
            .lock()
            .expect("cache lock")
            .insert(key, reps.clone());
        Ok(reps)
    }

    /// Members of every size up to `n_max`, by size.
    pub fn enumerate_up_to(&self, n_max: usize) -> Result<Vec<Structure>> {
        let mut out = Vec::new();
        for n in 0..=n_max {
            out.extend(self.enumerate(n)?.iter().cloned());
        }
        Ok(out)
    }

    /// Numbers of isomorphism classes of members of each size `0..=n_max`.
    pub fn profile(&self, n_max: usize) -> Result<Vec<usize>> {
        (0..=n_max).map(|n| Ok(self.enumerate(n)?.len())).collect()
    }

    /// The first member of size `<= n_max` with a non-member induced
    /// substructure, with the offending subset.
    pub fn check_hereditary(&self, n_max: usize) -> Result<Option<(Structure, Vec<usize>)>> {
        for y in self.enumerate_up_to(n_max)? {
            let n = y.size();
            for mask in 0u32..(1 << n) {
                let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                let (sub, _) = induced_substructure(&y, &subset)?;
                if !self.contains(&sub) {
                    return Ok(Some((y, subset)));
                }
            }
        }
        Ok(None)
    }

    /// Visits every structure on `n` points satisfying the relation shapes and
    /// agreeing with `decided` wherever it returns `Some`, until `visit`
    /// returns false. Returns false if stopped early.
    pub fn completions(
        &self,
        n: usize,
        decided: &dyn Fn(usize, &[usize]) -> Option<bool>,
        visit: &mut dyn FnMut(Structure) -> bool,
    ) -> bool {
        complete(self.signature(), &self.0.specs, n, decided, visit)
    }

    /// The two components of a member of a product class.
    pub fn split(&self, x: &Structure) -> Result<(Structure, Structure)> {
        match &self.0.extra {
            Extra::Product(c1, c2) => Ok(split_pair(c1, c2, x)),
            _ => Err(Error::Unsupported(format!(
                "{} is not a product class",
                self.name()
            ))),
        }
    }

    pub fn factors(&self) -> Option<(&StructureClass, &StructureClass)> {
        match &self.0.extra {
            Extra::Product(c1, c2) => Some((c1, c2)),
            _ => None,
        }
    }

    /// The member of a product class with the given components; left points come first.
    pub fn pair(&self, x1: &Structure, x2: &Structure) -> Result<Structure> {
        let (c1, c2) = self
            .factors()
            .ok_or_else(|| Error::Unsupported(format!("{} is not a product class", self.name())))?;
        if x1.signature() != c1.signature() || x2.signature() != c2.signature() {
            return Err(Error::SignatureMismatch("product components".into()));
        }
        let n1 = x1.size();
        let mut b = StructureBuilder::new(self.signature().clone(), n1 + x2.size())?;
        for p in 0..n1 {
            b.add(0, &[p])?;
        }
        let k1 = c1.signature().len();
        for (r, rel) in x1.relations().iter().enumerate() {
            for t in rel.iter() {
                b.add(1 + r, &t)?;
            }
        }
        for (r, rel) in x2.relations().iter().enumerate() {
            for t in rel.iter() {
                let shifted: Vec<usize> = t.iter().map(|&v| v + n1).collect();
                b.add(1 + k1 + r, &shifted)?;
            }
        }
        Ok(b.build())
    }
}

fn validate_specs(signature: &Signature, specs: &[RelationSpec]) -> Result<()> {
    if specs.len() != signature.len() {
        return Err(Error::InvalidSignature(format!(
            "{} relation shapes for {} relations",
            specs.len(),
            signature.len()
        )));
    }
    for (r, (spec, sym)) in specs.iter().zip(signature.symbols()).enumerate() {
        if spec.kind != RelationKind::Free && sym.arity != 2 {
            return Err(Error::InvalidSignature(format!(
                "{:?} must be binary for its kind",
                sym.name
            )));
        }
        for &(m, _) in &spec.sorts {
            if m >= r || signature.symbols()[m].arity != 1 {
                return Err(Error::InvalidSignature(format!(
                    "sort marker {m} of {:?} must be an earlier unary relation",
                    sym.name
                )));
            }
        }
    }
    Ok(())
}

fn in_sort(holds: &dyn Fn(usize, &[usize]) -> bool, sorts: &[(usize, bool)], p: usize) -> bool {
    sorts.iter().all(|&(m, pol)| holds(m, &[p]) == pol)
}

fn shapes_hold(x: &Structure, specs: &[RelationSpec]) -> bool {
    let holds = |r: usize, t: &[usize]| x.holds(r, t);
    for (r, spec) in specs.iter().enumerate() {
        let allowed: Vec<bool> = (0..x.size())
            .map(|p| in_sort(&holds, &spec.sorts, p))
            .collect();
        let rel = x.relation(r);
        if rel.iter().any(|t| t.iter().any(|&p| !allowed[p])) {
            return false;
        }
        let pts: Vec<usize> = (0..x.size()).filter(|&p| allowed[p]).collect();
        match spec.kind {
            RelationKind::Free => {}
            RelationKind::SymmetricIrreflexive => {
                if rel
                    .iter()
                    .any(|t| t[0] == t[1] || !rel.contains(&[t[1], t[0]]))
                {
                    return false;
                }
            }
            RelationKind::StrictTotalOrder => {
                let sub = match induced_substructure(x, &pts) {
                    Ok((s, _)) => s,
                    Err(_) => return false,
                };
                if permlab::order_ranks(&sub, r).is_none() {
                    return false;
                }
            }
        }
    }
    true
}

/// Visits all structures on `n` points satisfying `specs` and agreeing with
/// `decided`, until `visit` returns false.
pub(crate) fn complete(
    signature: &Arc<Signature>,
    specs: &[RelationSpec],
    n: usize,
    decided: &dyn Fn(usize, &[usize]) -> Option<bool>,
    visit: &mut dyn FnMut(Structure) -> bool,
) -> bool {
    let b = StructureBuilder::new(signature.clone(), n).expect("size within limits");
    complete_from(signature, specs, n, decided, 0, b, visit)
}

fn complete_from(
    signature: &Arc<Signature>,
    specs: &[RelationSpec],
    n: usize,
    decided: &dyn Fn(usize, &[usize]) -> Option<bool>,
    r: usize,
    b: StructureBuilder,
    visit: &mut dyn FnMut(Structure) -> bool,
) -> bool {
    if r == specs.len() {
        return visit(b.build());
    }
    let spec = &specs[r];
    let arity = signature.symbols()[r].arity;
    let allowed: Vec<bool> = {
        let holds = |m: usize, t: &[usize]| b.holds(m, t);
        (0..n).map(|p| in_sort(&holds, &spec.sorts, p)).collect()
    };
    let pts: Vec<usize> = (0..n).filter(|&p| allowed[p]).collect();
    let mut forced_true: Vec<Vec<usize>> = Vec::new();
    let mut open: Vec<Vec<usize>> = Vec::new();
    let mut ok = true;
    for_each_tuple(n, arity, |t| {
        let inside = t.iter().all(|&p| allowed[p]);
        match decided(r, t) {
            Some(true) if !inside => ok = false,
            Some(true) => forced_true.push(t.to_vec()),
            Some(false) => {}
            None if inside => open.push(t.to_vec()),
            None => {}
        }
    });
    if !ok {
        return true;
    }
    let mut next = |forced: &[Vec<usize>], extra: &[Vec<usize>]| {
        let mut b2 = b.clone();
        for t in forced.iter().chain(extra) {
            b2.add(r, t).expect("in range");
        }
        complete_from(signature, specs, n, decided, r + 1, b2, visit)
    };
    match spec.kind {
        RelationKind::Free => for_each_subset(&open, &mut |s| next(&forced_true, s)),
        RelationKind::SymmetricIrreflexive => {
            if forced_true.iter().any(|t| t[0] == t[1]) {
                return true;
            }
            let mut pairs = Vec::new();
            let mut forced = Vec::new();
            for (i, &u) in pts.iter().enumerate() {
                for &v in &pts[i + 1..] {
                    match (decided(r, &[u, v]), decided(r, &[v, u])) {
                        (Some(x), Some(y)) if x != y => return true,
                        (Some(true), _) | (_, Some(true)) => forced.push((u, v)),
                        (Some(false), _) | (_, Some(false)) => {}
                        (None, None) => pairs.push((u, v)),
                    }
                }
            }
            let both_ways = |ps: &[(usize, usize)]| -> Vec<Vec<usize>> {
                ps.iter()
                    .flat_map(|&(u, v)| [vec![u, v], vec![v, u]])
                    .collect()
            };
            let forced = both_ways(&forced);
            for_each_subset(&pairs, &mut |chosen| next(&forced, &both_ways(chosen)))
        }
        RelationKind::StrictTotalOrder => {
            // precedence constraints among the sorted points
            let k = pts.len();
            let mut before = vec![vec![false; k]; k];
            for (i, &u) in pts.iter().enumerate() {
                for (j, &v) in pts.iter().enumerate() {
                    match decided(r, &[u, v]) {
                        Some(true) if i == j => return true,
                        Some(true) => before[i][j] = true,
                        Some(false) if i != j => before[j][i] = true,
                        _ => {}
                    }
                }
            }
            for_each_linear_extension(&before, &mut |order| {
                let mut tuples = Vec::with_capacity(k * k.saturating_sub(1) / 2);
                for (a, &i) in order.iter().enumerate() {
                    for &j in &order[a + 1..] {
                        tuples.push(vec![pts[i], pts[j]]);
                    }
                }
                next(&[], &tuples)
            })
        }
    }
}

fn for_each_tuple(n: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut t = vec![0; arity];
    loop {
        f(&t);
        let mut k = arity;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if t[k] + 1 < n {
                t[k] += 1;
                for slot in &mut t[k + 1..] {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

fn for_each_subset<T: Clone>(items: &[T], f: &mut dyn FnMut(&[T]) -> bool) -> bool {
    fn rec<T: Clone>(
        items: &[T],
        k: usize,
        cur: &mut Vec<T>,
        f: &mut dyn FnMut(&[T]) -> bool,
    ) -> bool {
        if k == items.len() {
            return f(cur);
        }
        if !rec(items, k + 1, cur, f) {
            return false;
        }
        cur.push(items[k].clone());
        let go_on = rec(items, k + 1, cur, f);
        cur.pop();
        go_on
    }
    rec(items, 0, &mut Vec::new(), f)
}

/// Orders of `0..k` (listed smallest first) with `i` before `j` whenever `before[i][j]`.
fn for_each_linear_extension(before: &[Vec<bool>], f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(
        before: &[Vec<bool>],
        placed: &mut Vec<bool>,
        order: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let k = before.len();
        if order.len() == k {
            return f(order);
        }
        for j in 0..k {
            if placed[j] || (0..k).any(|i| !placed[i] && before[i][j]) {
                continue;
            }
            placed[j] = true;
            order.push(j);
            let go_on = rec(before, placed, order, f);
            order.pop();
            placed[j] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
    let mut placed = vec![false; before.len()];
    rec(before, &mut placed, &mut Vec::new(), f)
}

fn split_pair(c1: &StructureClass, c2: &StructureClass, x: &Structure) -> (Structure, Structure) {
    let left: Vec<usize> = (0..x.size()).filter(|&p| x.holds(0, &[p])).collect();
    let right: Vec<usize> = (0..x.size()).filter(|&p| !x.holds(0, &[p])).collect();
    let k1 = c1.signature().len();
    let part = |pts: &[usize], class: &StructureClass, offset: usize| {
        let (sub, _) = induced_substructure(x, pts).expect("valid subset");
        let rels = (0..class.signature().len())
            .map(|r| sub.relation(offset + r).iter().collect())
            .collect();
        Structure::new(class.signature().clone(), pts.len(), rels).expect("component")
    };
    (part(&left, c1, 1), part(&right, c2, 1 + k1))
}

pub fn sets() -> StructureClass {
    StructureClass::from_parts(
        "sets".into(),
        Signature::empty(),
        vec![],
        Extra::None,
        true,
        ORDER_CAP,
    )
}

pub fn empty_only() -> StructureClass {
    StructureClass::from_parts(
        "empty_only".into(),
        Signature::empty(),
        vec![],
        Extra::Predicate(Arc::new(|x: &Structure| x.size() == 0)),
        true,
        ORDER_CAP,
    )
}

pub fn total_orders() -> StructureClass {
    StructureClass::from_parts(
        "total_orders".into(),
        Signature::new([("lt", 2)]).expect("valid"),
        vec![RelationSpec::plain(RelationKind::StrictTotalOrder)],
        Extra::None,
        true,
        ORDER_CAP,
    )
}

fn graph_signature() -> Arc<Signature> {
    Signature::new([("edge", 2)]).expect("valid")
}

fn degrees(x: &Structure) -> Vec<usize> {
    let mut d = vec![0; x.size()];
    for t in x.relation(0).iter() {
        d[t[0]] += 1;
    }
    d
}

pub fn graphs() -> StructureClass {
    StructureClass::from_parts(
        "graphs".into(),
        graph_signature(),
        vec![RelationSpec::plain(RelationKind::SymmetricIrreflexive)],
        Extra::None,
        true,
        DEFAULT_CAP,
    )
}

/// Graphs in which every vertex lies on at most one edge.
pub fn matchings() -> StructureClass {
    StructureClass::from_parts(
        "matchings".into(),
        graph_signature(),
        vec![RelationSpec::plain(RelationKind::SymmetricIrreflexive)],
        Extra::Predicate(Arc::new(|x: &Structure| degrees(x).iter().all(|&d| d <= 1))),
        true,
        DEFAULT_CAP,
    )
}

/// Graphs in which every vertex lies on exactly one edge. Not hereditary.
pub fn perfect_matchings() -> StructureClass {
    StructureClass::from_parts(
        "perfect_matchings".into(),
        graph_signature(),
        vec![RelationSpec::plain(RelationKind::SymmetricIrreflexive)],
        Extra::Predicate(Arc::new(|x: &Structure| degrees(x).iter().all(|&d| d == 1))),
        false,
        DEFAULT_CAP,
    )
}

fn permutation_class(
    name: &str,
    member: Option<Arc<dyn Fn(&Permutation) -> bool + Send + Sync>>,
) -> StructureClass {
    let extra = match member {
        None => Extra::None,
        Some(m) => Extra::Predicate(Arc::new(move |x: &Structure| {
            permlab::structure_to_perm(x)
                .map(|p| m(&p))
                .unwrap_or(false)
        })),
    };
    StructureClass::from_parts(
        name.into(),
        permlab::two_orders_signature(),
        vec![
            RelationSpec::plain(RelationKind::StrictTotalOrder),
            RelationSpec::plain(RelationKind::StrictTotalOrder),
        ],
        extra,
        true,
        ORDER_CAP,
    )
    .with_sort_key(|x| {
        permlab::structure_to_perm(x)
            .map(Vec::from)
            .unwrap_or_default()
    })
}

pub fn all_permutations() -> StructureClass {
    permutation_class("all_permutations", None)
}

pub fn separable_permutations() -> StructureClass {
    permutation_class(
        "separable_permutations",
        Some(Arc::new(permlab::is_separable)),
    )
}

/// The permutations avoiding every pattern in `patterns`.
pub fn avoiding(patterns: Vec<Permutation>) -> StructureClass {
    let class = permlab::PermClass::avoiding(patterns);
    let name = class.name().to_string();
    permutation_class(
        &name,
        Some(Arc::new(move |p: &Permutation| class.contains(p))),
    )
}

/// Pairs `(X1, X2)` encoded on one ground set: the unary relation `left`
/// marks the points of `X1`, relations of each side are prefixed `l.`/`r.`.
pub fn product(c1: &StructureClass, c2: &StructureClass) -> StructureClass {
    let mut symbols: Vec<(String, usize)> = vec![("left".into(), 1)];
    let mut specs = vec![RelationSpec::plain(RelationKind::Free)];
    for (prefix, class, polarity) in [("l.", c1, true), ("r.", c2, false)] {
        let offset = symbols.len();
        for (sym, spec) in class.signature().symbols().iter().zip(class.specs()) {
            symbols.push((format!("{prefix}{}", sym.name), sym.arity));
            let mut sorts = vec![(0, polarity)];
            sorts.extend(spec.sorts.iter().map(|&(m, p)| (m + offset, p)));
            specs.push(RelationSpec {
                kind: spec.kind,
                sorts,
            });
        }
    }
    let signature = Signature::new(symbols).expect("prefixed names are distinct");
    StructureClass::from_parts(
        format!("product({},{})", c1.name(), c2.name()),
        signature,
        specs,
        Extra::Product(c1.clone(), c2.clone()),
        c1.is_declared_hereditary() && c2.is_declared_hereditary(),
        c1.cap().min(c2.cap()),
    )
}

pub const BUILTIN_NAMES: &[&str] = &[
    "sets",
    "total_orders",
    "graphs",
    "matchings",
    "all_permutations",
    "separable_permutations",
];

/// Looks up a built-in class by name (with a few aliases).
pub fn builtin_class(name: &str) -> Result<StructureClass> {
    Ok(match name {
        "sets" => sets(),
        "total_orders" | "orders" => total_orders(),
        "graphs" => graphs(),
        "matchings" => matchings(),
        "perfect_matchings" => perfect_matchings(),
        "all_permutations" | "permutations" => all_permutations(),
        "separable_permutations" | "separable" => separable_permutations(),
        "empty_only" => empty_only(),
        _ => return Err(Error::UnknownClass(name.into())),
    })
}

/// JSON class descriptor: a name, `{"builtin": name}`, `{"product": [d, d]}`
/// or `{"avoiding": ["321", ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassDescriptor {
    Name(String),
    Builtin { builtin: String },
    Product { product: Box<[ClassDescriptor; 2]> },
    Avoiding { avoiding: Vec<String> },
}

impl ClassDescriptor {
    /// Parses either a bare class name or a JSON descriptor.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') || t.starts_with('"') {
            Ok(serde_json::from_str(t)?)
        } else {
            Ok(ClassDescriptor::Name(t.to_string()))
        }
    }

    pub fn build(&self) -> Result<StructureClass> {
        match self {
            ClassDescriptor::Name(n) | ClassDescriptor::Builtin { builtin: n } => builtin_class(n),
            ClassDescriptor::Product { product: parts } => {
                Ok(product(&parts[0].build()?, &parts[1].build()?))
            }
            ClassDescriptor::Avoiding { avoiding: pats } => {
                let pats = pats
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<Permutation>>>()?;
                Ok(avoiding(pats))
            }
        }
    }
}
