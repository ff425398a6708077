//! The three equivalent non-degeneracy conditions, each checked directly.

use serde::Serialize;

use super::axioms::Check;
use super::{BCat, BMor, BObj};
use crate::amalgam::ACategory;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub final_atomic: bool,
    /// Non-empty fiber products of atom maps; base change of epimorphisms;
    /// products of epimorphisms.
    pub conditions: Vec<Check>,
    /// The three conditions agree.
    pub consistent: bool,
}

impl ConditionReport {
    pub fn nondegenerate(&self) -> bool {
        self.final_atomic && self.conditions.iter().all(|c| c.pass)
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

/// Checks the conditions over sequences of at most `max_atoms` atoms of size
/// `<= max_size`, stopping each at its first failure.
pub fn nondegeneracy_conditions<A: ACategory>(
    b: &BCat<A>,
    max_size: usize,
    max_atoms: usize,
) -> Result<ConditionReport> {
    let fin = b.final_object()?;
    let objs = b.probes(max_size, max_atoms)?;
    let atoms: Vec<&BObj<A>> = objs.iter().filter(|o| o.len() == 1).collect();

    let mut cases = 0;
    let mut witness = None;
    'a: for z in &atoms {
        for x in &atoms {
            for y in &atoms {
                for f in b.hom(x, z)? {
                    for g in b.hom(y, z)? {
                        cases += 1;
                        if b.fiber_product(&f, &g)?.object.is_empty() {
                            witness = Some(format!("{f:?} and {g:?} have an empty fiber product"));
                            break 'a;
                        }
                    }
                }
            }
        }
    }
    let a = check("fiber_products_of_atoms_nonempty", cases, witness);

    let mut epis: Vec<(usize, usize, BMor<A>)> = Vec::new();
    for (i, x) in objs.iter().enumerate() {
        for (j, y) in objs.iter().enumerate() {
            for f in b.hom(x, y)? {
                if b.is_epi(&f) {
                    epis.push((i, j, f));
                }
            }
        }
    }

    let mut cases = 0;
    let mut witness = None;
    'b: for (_, j, f) in &epis {
        for y2 in &objs {
            for h in b.hom(y2, &objs[*j])? {
                cases += 1;
                let fp = b.fiber_product(f, &h)?;
                if !b.is_epi(&fp.second) {
                    witness = Some(format!(
                        "the base change of {f:?} along {h:?} misses atoms of {y2:?}"
                    ));
                    break 'b;
                }
            }
        }
    }
    let bc = check("base_change_of_epi_is_epi", cases, witness);

    let mut cases = 0;
    let mut witness = None;
    'c: for (i1, j1, f1) in &epis {
        for (i2, j2, f2) in &epis {
            cases += 1;
            let src = b.product(&objs[*i1], &objs[*i2])?;
            let tgt = b.product(&objs[*j1], &objs[*j2])?;
            let l1 = b.compose(f1, &src.first)?;
            let l2 = b.compose(f2, &src.second)?;
            let lifts = b.lifts(&src.object, &[(&l1, &tgt.first), (&l2, &tgt.second)])?;
            if lifts.len() != 1 || !b.is_epi(&lifts[0]) {
                witness = Some(format!(
                    "the product of {f1:?} and {f2:?} is not epimorphic"
                ));
                break 'c;
            }
        }
    }
    let c = check("product_of_epis_is_epi", cases, witness);

    let consistent = a.pass == bc.pass && bc.pass == c.pass;
    Ok(ConditionReport {
        final_atomic: fin.len() == 1,
        conditions: vec![a, bc, c],
        consistent,
    })
}
