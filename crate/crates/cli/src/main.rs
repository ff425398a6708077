mod input;
mod report;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pregalois::amalgam::{
    has_amalgamation_property, has_joint_embedding, is_a_category, ACategory, ClassCategory,
    PermutationGroupCategory, Verdict,
};
use pregalois::bcat::{axiom_suite, nondegeneracy_conditions, BCat, Check, SuiteBounds};
use pregalois::classkit::{ClassDescriptor, StructureClass};
use pregalois::gsets::{
    double_coset_check, effectivity_report, fiber_functor_check, FiniteGroup, GroupSpec,
    StabilizerClass, TransitiveCategory,
};
use pregalois::permlab::{
    find_pattern, inflation, is_separable, structure_to_perm, two_orders_signature, Permutation,
};
use pregalois::relstruct::Structure;
use pregalois::witnesses;
use serde::Serialize;
use serde_json::{json, Value};

use report::{Line, Report, Timings};

/// Name under which `check-*` commands reach the category of finite
/// permutation groups.
const PERMUTATION_GROUPS: &str = "permutation_groups";

#[derive(Parser)]
#[command(
    name = "pregalois",
    version,
    about = "Amalgamation classes, finite-sequence categories and G-set checks"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Leave the timings out of the report.
    #[arg(long, global = true)]
    no_timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Clone)]
struct ClassArgs {
    /// A class name or a JSON descriptor.
    #[arg(long)]
    class: String,
    #[arg(long, default_value_t = 4)]
    max_size: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Profile of a class and a heredity check.
    Class {
        #[command(flatten)]
        c: ClassArgs,
        /// Also list the canonical members.
        #[arg(long)]
        enumerate: bool,
    },
    /// Minimal amalgams of a span of embeddings.
    Amalgamate {
        #[arg(long)]
        class: String,
        /// JSON embedding `A -> B`.
        #[arg(long)]
        left: String,
        /// JSON embedding `A -> C`.
        #[arg(long)]
        right: String,
    },
    /// Amalgamation property up to the size bound.
    CheckAp(ClassArgs),
    /// Joint embedding property up to the size bound.
    CheckJep(ClassArgs),
    /// Every non-isomorphism has a nontrivial self-amalgamation.
    CheckAcat(ClassArgs),
    /// Finite-sequence categories over a class.
    #[command(subcommand)]
    Bcat(BcatCommand),
    /// Transitive G-sets of a permutation group.
    #[command(subcommand)]
    Gset(GsetCommand),
    /// Permutation utilities.
    #[command(subcommand)]
    Perm(PermCommand),
    /// Recompute the catalogue of worked examples.
    Witnesses,
}

#[derive(Subcommand)]
enum BcatCommand {
    /// Axiom suite and non-degeneracy conditions.
    Verify {
        #[command(flatten)]
        c: ClassArgs,
        #[arg(long, default_value_t = 2)]
        max_atoms: usize,
        /// Atom size for test objects; defaults to the size bound.
        #[arg(long)]
        probe_size: Option<usize>,
    },
    /// Fiber product of two morphisms with a common target.
    Fiber {
        #[arg(long)]
        class: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Coequalizer of two parallel morphisms.
    Coeq {
        #[arg(long)]
        class: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Effectivity of every equivalence relation on small objects.
    Effective {
        #[command(flatten)]
        c: ClassArgs,
        #[arg(long, default_value_t = 2)]
        max_atoms: usize,
    },
}

#[derive(Subcommand)]
enum GsetCommand {
    /// Axioms, set-level agreement and effectivity for a group and a
    /// stabilizer class.
    Verify {
        /// `{"degree": n, "generators": [[...], ...]}`, 0-based images.
        #[arg(long)]
        group: String,
        /// Subgroups as element-index lists; the class they generate is
        /// used. Every subgroup when omitted.
        #[arg(long)]
        stab_class: Option<String>,
        /// Largest atom index; defaults to the group order.
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_atoms: usize,
    },
}

#[derive(Subcommand)]
enum PermCommand {
    /// `sigma[blocks...]`.
    Inflate {
        sigma: Permutation,
        blocks: Vec<Permutation>,
    },
    /// Whether the permutation avoids 2413 and 3142.
    Separable { sigma: Permutation },
    /// Whether `tau` occurs as a pattern in `sigma`.
    Contains {
        sigma: Permutation,
        tau: Permutation,
    },
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn class_of(text: &str) -> Result<StructureClass> {
    Ok(ClassDescriptor::parse(text)?.build()?)
}

fn is_permutation(x: &Structure) -> bool {
    x.signature().as_ref() == two_orders_signature().as_ref()
}

/// Permutations in one-line notation, other structures as size and tuples.
fn describe(x: &Structure) -> String {
    if is_permutation(x) {
        if let Ok(p) = structure_to_perm(x) {
            return p.to_string();
        }
    }
    let rels: Vec<String> = x
        .signature()
        .symbols()
        .iter()
        .zip(x.relations())
        .map(|(s, r)| format!("{}={:?}", s.name, r.iter().collect::<Vec<_>>()))
        .collect();
    if rels.is_empty() {
        format!("[{}]", x.size())
    } else {
        format!("[{}; {}]", x.size(), rels.join(", "))
    }
}

fn from_check(c: &Check) -> Line {
    let mut l = Line::new(&c.name, c.pass).summary(format!("{} cases", c.cases));
    if let Some(w) = &c.witness {
        l = l.witness(Value::String(w.clone()));
    }
    l
}

enum Which {
    Ap,
    Jep,
    Acat,
}

fn acat_line<A: ACategory>(
    cat: &A,
    which: &Which,
    n: usize,
    describe: impl Fn(&A::Object) -> String,
) -> Result<Line>
where
    A::Object: Serialize,
    A::Morphism: Serialize,
{
    Ok(match which {
        Which::Ap => match has_amalgamation_property(cat, n)? {
            Verdict::Pass => Line::pass("amalgamation_property"),
            Verdict::Counterexample(w) => Line::new("amalgamation_property", false)
                .summary(format!(
                    "no amalgam over ({}, {}, {})",
                    describe(&w.a),
                    describe(&w.b),
                    describe(&w.c)
                ))
                .witness(to_value(&w)),
        },
        Which::Jep => match has_joint_embedding(cat, n)? {
            Verdict::Pass => Line::pass("joint_embedding"),
            Verdict::Counterexample((x, y)) => Line::new("joint_embedding", false)
                .summary(format!(
                    "{} and {} have no common extension",
                    describe(&x),
                    describe(&y)
                ))
                .witness(to_value(&(x, y))),
        },
        Which::Acat => match is_a_category(cat, n)? {
            Verdict::Pass => Line::pass("no_epic_non_isomorphisms"),
            Verdict::Counterexample(w) => Line::new("no_epic_non_isomorphisms", false)
                .summary(format!(
                    "{} -> {} has only the trivial self-amalgamation",
                    describe(&w.x),
                    describe(&w.y)
                ))
                .witness(to_value(&w)),
        },
    })
}

fn run_check(report: &mut Report, c: &ClassArgs, which: Which) -> Result<()> {
    report.bound("max_size", c.max_size);
    let line = if c.class == PERMUTATION_GROUPS {
        let cat = PermutationGroupCategory::new(c.max_size)?;
        acat_line(&cat, &which, c.max_size, |x| {
            format!("{}-point group of order {}", x.n, x.order())
        })?
    } else {
        let cat = ClassCategory::new(class_of(&c.class)?);
        acat_line(&cat, &which, c.max_size, describe)?
    };
    report.push(line);
    Ok(())
}

fn run_bcat(report: &mut Report, cmd: BcatCommand) -> Result<()> {
    match cmd {
        BcatCommand::Verify {
            c,
            max_atoms,
            probe_size,
        } => {
            let bounds = SuiteBounds::new(c.max_size, probe_size.unwrap_or(c.max_size), max_atoms);
            report
                .bound("max_size", bounds.max_size)
                .bound("probe_size", bounds.probe_size)
                .bound("max_atoms", max_atoms);
            let b = BCat::new(ClassCategory::new(class_of(&c.class)?));
            let suite = axiom_suite(&b, bounds)?;
            for check in &suite.checks {
                report.push(from_check(check));
            }
            let cond = nondegeneracy_conditions(&b, c.max_size, max_atoms)?;
            report.push(Line::new("final_object_is_atomic", cond.final_atomic));
            for check in &cond.conditions {
                report.push(from_check(check));
            }
            report.push(Line::new("conditions_consistent", cond.consistent));
        }
        BcatCommand::Fiber { class, f, g } => {
            let b = BCat::new(ClassCategory::new(class_of(&class)?));
            let f = input::morphism(&b, &f, "--f")?;
            let g = input::morphism(&b, &g, "--g")?;
            if f.target != g.target {
                bail!("--f and --g have different targets");
            }
            report.result = Some(to_value(&b.fiber_product(&f, &g)?));
        }
        BcatCommand::Coeq { class, f, g } => {
            let b = BCat::new(ClassCategory::new(class_of(&class)?));
            let f = input::morphism(&b, &f, "--f")?;
            let g = input::morphism(&b, &g, "--g")?;
            if f.source != g.source || f.target != g.target {
                bail!("--f and --g are not parallel");
            }
            report.result = Some(to_value(&b.coequalizer(&f, &g)?));
        }
        BcatCommand::Effective { c, max_atoms } => {
            report
                .bound("max_size", c.max_size)
                .bound("max_atoms", max_atoms);
            let b = BCat::new(ClassCategory::new(class_of(&c.class)?));
            let r = b.effectivity_report(c.max_size, max_atoms)?;
            let mut line = Line::new("equivalence_relations_effective", r.all_effective()).summary(
                format!("{} relations on {} objects", r.relations, r.objects),
            );
            if let Some(w) = r.ineffective.first() {
                line = line.witness(to_value(w));
            }
            report.push(line);
            report.result = Some(json!({
                "objects": r.objects,
                "relations": r.relations,
                "ineffective": r.ineffective.len(),
            }));
        }
    }
    Ok(())
}

fn run_gset(report: &mut Report, cmd: GsetCommand) -> Result<()> {
    let GsetCommand::Verify {
        group,
        stab_class,
        max_size,
        max_atoms,
    } = cmd;
    let spec: GroupSpec = input::read_json(&group, "--group")?;
    let g = Arc::new(FiniteGroup::from_spec(&spec)?);
    let class = match &stab_class {
        None => StabilizerClass::full(g.clone())?,
        Some(text) => {
            let lists: Vec<Vec<usize>> = input::read_json(text, "--stab-class")?;
            let gens = lists
                .iter()
                .map(|l| g.subgroup(l))
                .collect::<pregalois::Result<Vec<_>>>()?;
            StabilizerClass::generated_by(g.clone(), &gens)?
        }
    };
    let max_size = max_size.unwrap_or(g.order());
    report
        .bound("max_size", max_size)
        .bound("max_atoms", max_atoms);
    let full = class.is_full()?;
    if full {
        let ff = fiber_functor_check(g.clone(), max_atoms, max_size)?;
        for c in ff.exactness.iter().chain([&ff.conservativity]) {
            report.push(from_check(c));
        }
        for c in &ff.suite.checks {
            report.push(from_check(c));
        }
        report.push(Line::new(
            "final_object_is_atomic",
            ff.conditions.final_atomic,
        ));
        for c in &ff.conditions.conditions {
            report.push(from_check(c));
        }
        let b = BCat::new(TransitiveCategory::new(class.clone()));
        report.push(from_check(&double_coset_check(&b)?));
    } else {
        let b = BCat::new(TransitiveCategory::new(class.clone()));
        let suite = axiom_suite(&b, SuiteBounds::new(max_size, max_size, max_atoms))?;
        for c in &suite.checks {
            report.push(from_check(c));
        }
        let cond = nondegeneracy_conditions(&b, max_size, max_atoms)?;
        report.push(Line::new("final_object_is_atomic", cond.final_atomic));
        for c in &cond.conditions {
            report.push(from_check(c));
        }
    }
    let eff = effectivity_report(class.clone(), max_atoms)?;
    let mut line = Line::new("coset_relations_match_class", eff.consistent());
    if !eff.consistent() {
        line = line.witness(to_value(&eff.coset_relations));
    }
    report.push(line);
    report.result = Some(json!({
        "group_order": g.order(),
        "class_members": class.members().len(),
        "full_class": full,
        "relations": eff.relations.relations,
        "ineffective_relations": eff.relations.ineffective.len(),
        "coset_relations": to_value(&eff.coset_relations),
    }));
    Ok(())
}

fn run_perm(report: &mut Report, cmd: PermCommand) -> Result<()> {
    match cmd {
        PermCommand::Inflate { sigma, blocks } => {
            let p = inflation(&sigma, &blocks)?;
            report.result = Some(Value::String(p.to_string()));
        }
        PermCommand::Separable { sigma } => {
            let occurrence = ["2413", "3142"].iter().find_map(|t| {
                let tau: Permutation = t.parse().expect("literal");
                find_pattern(&sigma, &tau).map(|pos| json!({"pattern": t, "positions": pos}))
            });
            let mut line = Line::new("separable", is_separable(&sigma));
            if let Some(w) = occurrence {
                line = line.witness(w);
            }
            report.push(line);
        }
        PermCommand::Contains { sigma, tau } => {
            let pos = find_pattern(&sigma, &tau);
            let mut line = Line::new("contains", pos.is_some());
            if let Some(p) = pos {
                line = line.summary(format!("at positions {p:?}"));
                report.result = Some(to_value(&p));
            }
            report.push(line);
        }
    }
    Ok(())
}

fn run(cli: Cli, report: &mut Report) -> Result<()> {
    match cli.command {
        Command::Class { c, enumerate } => {
            report.bound("max_size", c.max_size);
            let class = class_of(&c.class)?;
            let profile = class.profile(c.max_size)?;
            let bad = class.check_hereditary(c.max_size)?;
            let mut line = Line::new("hereditary", bad.is_none());
            if let Some((x, keep)) = bad {
                line = line
                    .summary(format!(
                        "{} restricted to {keep:?} leaves the class",
                        describe(&x)
                    ))
                    .witness(json!({"structure": to_value(&x), "kept": keep}));
            }
            report.push(line);
            let mut result = json!({ "profile": profile });
            if enumerate {
                result["structures"] = to_value(&class.enumerate_up_to(c.max_size)?);
            }
            report.result = Some(result);
        }
        Command::Amalgamate { class, left, right } => {
            let cat = ClassCategory::new(class_of(&class)?);
            let b = input::embedding(&cat, &left, "--left")?;
            let c = input::embedding(&cat, &right, "--right")?;
            if b.source() != c.source() {
                bail!("--left and --right have different sources");
            }
            let ams = cat.amalgamation_set(&b, &c)?;
            let apexes: Vec<String> = ams.iter().map(|a| describe(&a.apex)).collect();
            report.push(Line::new("has_amalgam", !ams.is_empty()).summary(format!(
                "{} amalgams: [{}]",
                ams.len(),
                apexes.join(", ")
            )));
            report.result = Some(to_value(&ams));
        }
        Command::CheckAp(c) => run_check(report, &c, Which::Ap)?,
        Command::CheckJep(c) => run_check(report, &c, Which::Jep)?,
        Command::CheckAcat(c) => run_check(report, &c, Which::Acat)?,
        Command::Bcat(cmd) => run_bcat(report, cmd)?,
        Command::Gset(cmd) => run_gset(report, cmd)?,
        Command::Perm(cmd) => run_perm(report, cmd)?,
        Command::Witnesses => {
            for ex in witnesses::run_all()? {
                report.push(Line::new(ex.name, ex.holds).summary(ex.detail));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (format, timings) = (cli.format, !cli.no_timings);
    let start = Instant::now();
    let mut report = Report::new(args);
    if let Err(e) = run(cli, &mut report) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if timings {
        report.timings = Some(Timings {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("serializable report")
        ),
        Format::Text => print!("{}", report.render_text()),
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
