//! A fixed catalogue of small worked examples, each recomputed from scratch.

use serde::Serialize;

use crate::amalgam::{
    has_amalgamation_property, has_joint_embedding, is_a_category, is_epimorphism_in_a,
    is_trivial_self_amalgam, ACategory, ClassCategory, Verdict,
};
use crate::bcat::{axiom_suite, BCat, BObject, SuiteBounds};
use crate::classkit;
use crate::error::{Error, Result};
use crate::permlab::{
    contains_pattern, inflation, is_separable, pattern_embedding, perm_to_structure,
    structure_to_perm, Permutation,
};
use crate::relstruct::{canonical_form, induced_substructure, Embedding, Structure};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Example {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

fn example(name: &str, holds: bool, detail: impl Into<String>) -> Example {
    Example {
        name: name.to_string(),
        holds,
        detail: detail.into(),
    }
}

fn perm(s: &str) -> Permutation {
    s.parse().expect("literal permutation")
}

fn perms_of(xs: &[&Structure]) -> Result<String> {
    let ps = xs
        .iter()
        .map(|x| structure_to_perm(x).map(|p| p.to_string()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ps.join(", "))
}

/// The two extensions of `123` into `1342` and `3124` that share the
/// pattern positions used throughout the examples.
pub fn separable_span() -> Result<(Embedding, Embedding)> {
    Ok((
        pattern_embedding(&perm("123"), &perm("1342"), &[0, 1, 2])?,
        pattern_embedding(&perm("123"), &perm("3124"), &[1, 2, 3])?,
    ))
}

/// `(vertex -> edge)` in the class of matchings.
pub fn matching_vertex_into_edge(cat: &ClassCategory) -> Result<Embedding> {
    let vertex = classkit::matchings().enumerate(1)?[0].clone();
    let edge = classkit::matchings()
        .enumerate(2)?
        .iter()
        .find(|x| x.tuple_count() > 0)
        .cloned()
        .ok_or_else(|| Error::Consistency("no two-point matching with an edge".into()))?;
    cat.hom(&vertex, &edge)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Consistency("a vertex does not embed in an edge".into()))
}

fn deletion() -> Result<Example> {
    let x = perm_to_structure(&perm("41352"));
    let keep: Vec<usize> = (0..5).filter(|&i| perm("41352").values()[i] != 3).collect();
    let sub = structure_to_perm(&induced_substructure(&x, &keep)?.0)?;
    Ok(example(
        "delete_value_three_of_41352",
        sub == perm("3142"),
        format!("41352 without the entry 3 is {sub}"),
    ))
}

fn hereditary() -> Result<Example> {
    let bad = classkit::separable_permutations().check_hereditary(5)?;
    Ok(example(
        "separable_is_hereditary",
        bad.is_none(),
        match bad {
            None => "closed under deletion up to length 5".to_string(),
            Some((x, keep)) => format!("{x:?} restricted to {keep:?} leaves the class"),
        },
    ))
}

fn span_amalgams() -> Result<Vec<Example>> {
    let (b, c) = separable_span()?;
    let all = ClassCategory::new(classkit::all_permutations());
    let sep = ClassCategory::new(classkit::separable_permutations());
    let target = canonical_form(&perm_to_structure(&perm("41352"))).structure;
    let ams = all.amalgamation_set(&b, &c)?;
    let apexes: Vec<&Structure> = ams.iter().map(|a| &a.apex).collect();
    let in_sep = sep.amalgamation_set(&b, &c)?;
    Ok(vec![
        example(
            "span_amalgam_over_all_permutations",
            ams.len() == 1 && ams[0].apex == target,
            format!("amalgams: [{}]", perms_of(&apexes)?),
        ),
        example(
            "amalgam_is_not_separable",
            !is_separable(&perm("41352")),
            "41352 contains 3142",
        ),
        example(
            "span_has_no_separable_amalgam",
            in_sep.is_empty(),
            format!("{} amalgams in the separable class", in_sep.len()),
        ),
    ])
}

fn matchings() -> Result<Vec<Example>> {
    let cat = ClassCategory::new(classkit::matchings());
    let f = matching_vertex_into_edge(&cat)?;
    let selfs = cat.amalgamation_set(&f, &f)?;
    let only_trivial = selfs.len() == 1 && is_trivial_self_amalgam(&cat, &selfs[0]);
    let epi = is_epimorphism_in_a(&cat, &f)?;
    let verdict = is_a_category(&cat, 3)?;
    let found = match &verdict {
        Verdict::Counterexample(w) => w.x.size() == 1 && w.y == cat.target(&f),
        Verdict::Pass => false,
    };
    Ok(vec![
        example(
            "vertex_into_edge_self_amalgams",
            only_trivial,
            format!("{} self-amalgamations", selfs.len()),
        ),
        example(
            "vertex_into_edge_is_epi",
            epi && !cat.is_iso(&f),
            "a non-isomorphism with no nontrivial self-amalgamation",
        ),
        example(
            "matchings_not_a_category",
            found,
            format!("{:?}", verdict.witness().map(|w| (&w.x, &w.y))),
        ),
    ])
}

fn separable_checks() -> Result<Vec<Example>> {
    let sets = ClassCategory::new(classkit::sets());
    let sep = ClassCategory::new(classkit::separable_permutations());
    let (b, c) = separable_span()?;
    let mut out = vec![
        example(
            "sets_is_a_category",
            is_a_category(&sets, 4)?.is_pass(),
            "up to size 4",
        ),
        example(
            "separable_is_a_category",
            is_a_category(&sep, 4)?.is_pass(),
            "up to size 4",
        ),
    ];
    let ap = has_amalgamation_property(&sep, 4)?;
    let detail = match ap.witness() {
        Some(w) => format!("span ({})", perms_of(&[&w.a, &w.b, &w.c])?),
        None => "every span amalgamates".into(),
    };
    let expected = ap.witness().is_some_and(|w| {
        [&w.a, &w.b, &w.c]
            .iter()
            .map(|x| {
                structure_to_perm(x)
                    .map(|p| p.to_string())
                    .unwrap_or_default()
            })
            .eq(["123", "1342", "3124"].map(String::from))
    });
    out.push(example("separable_fails_amalgamation", expected, detail));
    out.push(example(
        "separable_joint_embedding",
        has_joint_embedding(&sep, 4)?.is_pass(),
        "up to size 4",
    ));

    let bsep = BCat::new(sep.clone());
    let lift = |e: &Embedding| {
        bsep.morphism(
            BObject::atom(e.target().clone()),
            BObject::atom(e.source().clone()),
            vec![0],
            vec![e.clone()],
        )
    };
    let fp = bsep.fiber_product(&lift(&b)?, &lift(&c)?)?;
    out.push(example(
        "separable_fiber_product_is_empty",
        fp.object.is_empty(),
        format!("{} atoms", fp.object.len()),
    ));
    let nd = bsep.is_nondegenerate(4)?;
    out.push(example(
        "separable_sequences_are_degenerate",
        !nd.is_pass(),
        "a span of atoms with empty fiber product",
    ));
    Ok(out)
}

fn epi_classification() -> Result<Example> {
    let b = BCat::new(ClassCategory::new(classkit::sets()));
    let report = axiom_suite(&b, SuiteBounds::new(2, 2, 2))?;
    let check = report
        .check("epi_classification")
        .ok_or_else(|| Error::Consistency("missing epi classification".into()))?;
    Ok(example(
        "epi_iff_surjective_on_atoms",
        check.pass,
        format!("{} morphisms of finite sets", check.cases),
    ))
}

fn permutation_facts() -> Result<Vec<Example>> {
    let inflated = inflation(&perm("231"), &[perm("12"), perm("321"), perm("3412")])?;
    Ok(vec![
        example(
            "41352_contains_3142",
            contains_pattern(&perm("41352"), &perm("3142")),
            "pattern containment",
        ),
        example(
            "inflation_of_231",
            inflated == perm("569873412"),
            format!("231[12, 321, 3412] = {inflated}"),
        ),
        example(
            "not_separable",
            !is_separable(&perm("41352")) && !is_separable(&perm("2413")),
            "41352 and 2413",
        ),
    ])
}

/// Recomputes every example in the catalogue.
pub fn run_all() -> Result<Vec<Example>> {
    let mut out = vec![deletion()?, hereditary()?];
    out.extend(span_amalgams()?);
    out.extend(matchings()?);
    out.extend(separable_checks()?);
    out.push(epi_classification()?);
    out.extend(permutation_facts()?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_example_holds() {
        for ex in run_all().unwrap() {
            assert!(ex.holds, "{}: {}", ex.name, ex.detail);
        }
    }
}
