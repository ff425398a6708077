//! Acceptance run: one PASS/FAIL line per criterion, each against its time
//! limit. Built without the test harness so the lines always print.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use pregalois::amalgam::{
    has_amalgamation_property, has_joint_embedding, is_a_category, is_trivial_self_amalgam,
    self_amalgamations, ACategory, ClassCategory, Verdict,
};
use pregalois::bcat::{
    axiom_suite, nondegeneracy_conditions, BCat, BMorphism, BObject, Degeneracy, SuiteBounds,
};
use pregalois::classkit::{self, StructureClass};
use pregalois::gsets::{
    double_coset_check, effectivity_report, fiber_functor_check, right_coset_relation,
    set_level_agreement, FiniteGroup, StabilizerClass, TransitiveCategory,
};
use pregalois::permlab::{is_separable, perm_to_structure, structure_to_perm, Permutation};
use pregalois::relstruct::{canonical_form, Embedding, Structure};
use pregalois::witnesses::{matching_vertex_into_edge, separable_span};

type Outcome = Result<String, String>;

/// Name, check, and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<u64>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn as_perm(x: &Structure) -> String {
    structure_to_perm(x)
        .map(|p| p.to_string())
        .unwrap_or_else(|e| e.to_string())
}

fn atom_map(e: &Embedding) -> BMorphism<Structure, Embedding> {
    BMorphism {
        source: BObject::atom(e.target().clone()),
        target: BObject::atom(e.source().clone()),
        a: vec![0],
        components: vec![e.clone()],
    }
}

fn inflation_literal() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_pregalois"))
        .args(["perm", "inflate", "231", "12", "321", "3412"])
        .output()
        .map_err(err)?;
    ensure(out.status.success(), format!("exit status {}", out.status))?;
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    ensure(
        report["result"] == "569873412",
        format!("got {}", report["result"]),
    )?;
    let ms = report["timings"]["elapsed_ms"]
        .as_f64()
        .ok_or("no timing")?;
    ensure(ms < 1.0, format!("{ms} ms inside the command"))?;
    Ok(format!("569873412 in {ms:.3} ms"))
}

fn separable_chain() -> Outcome {
    let (b, c) = separable_span().map_err(err)?;
    let all = ClassCategory::new(classkit::all_permutations());
    let sep = ClassCategory::new(classkit::separable_permutations());
    let ams = all.amalgamation_set(&b, &c).map_err(err)?;
    let target = canonical_form(&perm_to_structure(&perm("41352"))).structure;
    ensure(
        ams.len() == 1 && ams[0].apex == target,
        format!("{} amalgams", ams.len()),
    )?;
    ensure(!is_separable(&perm("41352")), "41352 is separable")?;
    let in_sep = sep.amalgamation_set(&b, &c).map_err(err)?;
    ensure(
        in_sep.is_empty(),
        format!("{} separable amalgams", in_sep.len()),
    )?;
    ensure(
        has_joint_embedding(&sep, 4).map_err(err)?.is_pass(),
        "joint embedding fails",
    )?;
    let bsep = BCat::new(sep);
    match bsep.is_nondegenerate(4).map_err(err)? {
        Verdict::Counterexample(Degeneracy::EmptyFiberProduct { x, y, z, .. }) => {
            let got = (as_perm(&x), as_perm(&y), as_perm(&z));
            ensure(
                got == ("1342".into(), "3124".into(), "123".into()),
                format!("witness {got:?}"),
            )?;
        }
        other => return Err(format!("non-degeneracy gave {other:?}")),
    }
    Ok("one amalgam 41352, none separable, witness (1342, 3124, 123)".into())
}

fn matchings_witness() -> Outcome {
    let cat = ClassCategory::new(classkit::matchings());
    let f = matching_vertex_into_edge(&cat).map_err(err)?;
    match is_a_category(&cat, 3).map_err(err)? {
        Verdict::Counterexample(w) => {
            ensure(w.x.size() == 1, "X is not a vertex")?;
            ensure(w.y == cat.target(&f), "Y is not an edge")?;
            let selfs = self_amalgamations(&cat, &w.f).map_err(err)?;
            ensure(
                selfs.len() == 1 && is_trivial_self_amalgam(&cat, &selfs[0]),
                format!("{} self-amalgamations", selfs.len()),
            )?;
        }
        Verdict::Pass => return Err("no counterexample".into()),
    }
    Ok("vertex -> edge, trivial self-amalgam only".into())
}

fn a_category_verdicts() -> Outcome {
    let mut lines = Vec::new();
    for class in [
        classkit::sets(),
        classkit::total_orders(),
        classkit::graphs(),
        classkit::separable_permutations(),
    ] {
        let t = Instant::now();
        let cat = ClassCategory::new(class.clone());
        ensure(
            is_a_category(&cat, 4).map_err(err)?.is_pass(),
            format!("{} fails", class.name()),
        )?;
        let ap = has_amalgamation_property(&cat, 4).map_err(err)?.is_pass();
        let separable = class.name() == classkit::separable_permutations().name();
        ensure(
            ap != separable,
            format!("{} amalgamation: {ap}", class.name()),
        )?;
        let secs = t.elapsed().as_secs_f64();
        if class.name() == "graphs" {
            ensure(secs < 60.0, format!("graphs took {secs:.1} s"))?;
        }
        lines.push(format!("{} {secs:.2}s", class.name()));
    }
    Ok(lines.join(", "))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    Permutation::all(n)
        .into_iter()
        .map(|p| p.values().iter().map(|v| v - 1).collect())
        .collect()
}

/// Number of permutations of the ground set preserving every relation.
fn brute_automorphisms(x: &Structure) -> usize {
    permutations(x.size())
        .iter()
        .filter(|p| {
            x.relations().iter().enumerate().all(|(r, rel)| {
                rel.iter()
                    .all(|t| x.holds(r, &t.iter().map(|&i| p[i]).collect::<Vec<_>>()))
            })
        })
        .count()
}

fn labeled(class: &StructureClass, n: usize) -> Vec<Structure> {
    let sig = class.signature().clone();
    let candidates: Vec<Vec<Vec<Vec<usize>>>> = match class.name() {
        "sets" => vec![vec![]],
        "total_orders" => permutations(n)
            .into_iter()
            .map(|rank| {
                let mut rel = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if rank[i] < rank[j] {
                            rel.push(vec![i, j]);
                        }
                    }
                }
                vec![rel]
            })
            .collect(),
        "graphs" => {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect();
            (0..1usize << pairs.len())
                .map(|mask| {
                    let mut rel = Vec::new();
                    for (k, &(i, j)) in pairs.iter().enumerate() {
                        if mask >> k & 1 == 1 {
                            rel.push(vec![i, j]);
                            rel.push(vec![j, i]);
                        }
                    }
                    vec![rel]
                })
                .collect()
        }
        other => panic!("no labeled enumeration for {other}"),
    };
    candidates
        .into_iter()
        .map(|rels| Structure::new(sig.clone(), n, rels).unwrap())
        .filter(|x| class.contains(x))
        .collect()
}

/// Isomorphism classes as `sum |Aut(x)| / n!` over labeled structures.
fn brute_count(class: &StructureClass, n: usize) -> usize {
    let total: usize = labeled(class, n).iter().map(brute_automorphisms).sum();
    let fact: usize = (1..=n).product();
    assert_eq!(total % fact, 0);
    total / fact
}

fn profiles() -> Outcome {
    let cases = [
        (classkit::graphs(), 4, vec![1, 1, 2, 4, 11]),
        (classkit::sets(), 5, vec![1; 6]),
        (classkit::total_orders(), 5, vec![1; 6]),
    ];
    for (class, n, expected) in cases {
        let got = class.profile(n).map_err(err)?;
        ensure(got == expected, format!("{} profile {got:?}", class.name()))?;
        let brute: Vec<usize> = (0..=n).map(|k| brute_count(&class, k)).collect();
        ensure(
            brute == got,
            format!("{} brute force {brute:?}", class.name()),
        )?;
        let orbits: Vec<usize> = (0..=n)
            .map(|k| {
                labeled(&class, k)
                    .iter()
                    .map(|x| canonical_form(x).structure)
                    .collect::<BTreeSet<_>>()
                    .len()
            })
            .collect();
        ensure(
            orbits == got,
            format!("{} orbit count {orbits:?}", class.name()),
        )?;
    }
    Ok("graphs [1,1,2,4,11], sets and orders all ones".into())
}

fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric(3).unwrap())
}

fn axiom_suites() -> Outcome {
    let bounds = SuiteBounds::new(3, 3, 2);
    let mut lines = Vec::new();
    let mut run = |name: &str, report: pregalois::Result<pregalois::bcat::AxiomReport>| {
        let report = report.map_err(err)?;
        if let Some(c) = report.checks.iter().find(|c| !c.pass) {
            return Err(format!("{name}: {} fails: {:?}", c.name, c.witness));
        }
        lines.push(format!("{name} {} checks", report.checks.len()));
        Ok(())
    };
    run(
        "sets",
        axiom_suite(&BCat::new(ClassCategory::new(classkit::sets())), bounds),
    )?;
    run(
        "total_orders",
        axiom_suite(
            &BCat::new(ClassCategory::new(classkit::total_orders())),
            bounds,
        ),
    )?;
    let t = BCat::new(TransitiveCategory::full(s3()).map_err(err)?);
    run("transitive S3", axiom_suite(&t, bounds))?;
    Ok(lines.join(", "))
}

fn oracle_equivalence() -> Outcome {
    let groups = [
        ("C2", FiniteGroup::cyclic(2)),
        ("S3", FiniteGroup::symmetric(3)),
        ("D4", FiniteGroup::dihedral(4)),
    ];
    let mut lines = Vec::new();
    for (name, g) in groups {
        let g = Arc::new(g.map_err(err)?);
        let b = BCat::new(TransitiveCategory::full(g).map_err(err)?);
        let t = Instant::now();
        let mut checks = set_level_agreement(&b, 2).map_err(err)?;
        checks.push(double_coset_check(&b).map_err(err)?);
        if let Some(c) = checks.iter().find(|c| !c.pass) {
            return Err(format!("{name}: {} fails: {:?}", c.name, c.witness));
        }
        let cases: usize = checks.iter().map(|c| c.cases).sum();
        lines.push(format!(
            "{name} {cases} cases {:.1}s",
            t.elapsed().as_secs_f64()
        ));
    }
    Ok(lines.join(", "))
}

fn effectivity() -> Outcome {
    let g = s3();
    let full =
        effectivity_report(StabilizerClass::full(g.clone()).map_err(err)?, 2).map_err(err)?;
    ensure(
        full.relations.all_effective(),
        format!("{} ineffective relations", full.relations.ineffective.len()),
    )?;
    ensure(full.consistent(), "coset relations disagree with the class")?;

    let class = StabilizerClass::generated_by(g.clone(), &[]).map_err(err)?;
    let b = BCat::new(TransitiveCategory::new(class));
    let t = g.index_of(&[1, 0, 2]).ok_or("no transposition")?;
    let c2 = g.generated(&[t]);
    let r = right_coset_relation(&b, &c2).map_err(err)?;
    ensure(
        !b.is_effective(&r).map_err(err)?,
        "the coset relation is effective",
    )?;
    let q = b.quotient(&r).map_err(err)?;
    let fin = b.final_object().map_err(err)?;
    ensure(q.target == fin, "the quotient is not the final object")?;
    let k = b.kernel_pair(&q).map_err(err)?;
    ensure(
        k.subset.len() == k.square.object.len() && k.subset != r.subset,
        "the kernel pair is not the full product",
    )?;
    Ok(format!(
        "{} relations effective under full class; coset relation collapses to the point",
        full.relations.relations
    ))
}

fn galois_comparison() -> Outcome {
    let report = fiber_functor_check(s3(), 2, 3).map_err(err)?;
    ensure(report.exact(), "exactness fails")?;
    ensure(report.conservativity.pass, "conservativity fails")?;
    if let Some(c) = report.suite.checks.iter().find(|c| !c.pass) {
        return Err(format!("{} fails", c.name));
    }
    ensure(
        report.conditions.nondegenerate() && report.conditions.consistent,
        "non-degeneracy fails",
    )?;
    Ok(format!("{} suite checks", report.suite.checks.len()))
}

fn nondegeneracy() -> Outcome {
    let sets = BCat::new(ClassCategory::new(classkit::sets()));
    let report = nondegeneracy_conditions(&sets, 2, 2).map_err(err)?;
    ensure(
        report.final_atomic && report.conditions.iter().all(|c| c.pass) && report.consistent,
        format!("sets: {:?}", report.conditions),
    )?;

    let sep = BCat::new(ClassCategory::new(classkit::separable_permutations()));
    let (b, c) = separable_span().map_err(err)?;
    let (f, h) = (atom_map(&b), atom_map(&c));
    ensure(sep.is_epi(&f), "the atom map is not epi")?;
    let fp = sep.fiber_product(&f, &h).map_err(err)?;
    ensure(fp.object.is_empty(), "condition (a) holds on the span")?;
    ensure(!sep.is_epi(&fp.second), "the base change of the epi is epi")?;
    Ok("sets consistent; separable: empty fiber product, base change 0 -> 3124 not epi".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 inflation literal", inflation_literal, None),
        ("2 separable chain", separable_chain, Some(10)),
        ("3 matchings witness", matchings_witness, Some(1)),
        ("4 a-category verdicts", a_category_verdicts, None),
        ("5 profile oracle", profiles, None),
        ("6 axiom suites", axiom_suites, Some(120)),
        ("7 oracle equivalence", oracle_equivalence, None),
        ("8 effectivity", effectivity, Some(10)),
        ("9 fiber functor", galois_comparison, None),
        ("10 non-degeneracy", nondegeneracy, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let t = Instant::now();
        let mut outcome = run();
        let elapsed = t.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(secs) {
                outcome = Err(format!("over the {secs} s limit"));
            }
        }
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {name} ({:.2}s): {detail}",
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "FAIL criterion {name} ({:.2}s): {why}",
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
