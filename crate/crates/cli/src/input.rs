//! Parsing of JSON arguments. Each may be given inline or as `@path`.

use anyhow::{anyhow, bail, Context, Result};
use pregalois::amalgam::{ACategory, ClassCategory};
use pregalois::bcat::{BCat, BMorphism, BObject};
use pregalois::classkit::StructureClass;
use pregalois::permlab::{pattern_embedding, Permutation};
use pregalois::relstruct::{Embedding, EmbeddingJson, Structure, StructureJson};
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub fn read_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let text = match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).with_context(|| format!("malformed JSON for {what}"))
}

/// An embedding, either in full or as a pattern occurrence in a permutation.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum EmbeddingArg {
    Pattern {
        pattern: String,
        host: String,
        positions: Vec<usize>,
    },
    Full(EmbeddingJson),
}

impl EmbeddingArg {
    pub fn build(self) -> Result<Embedding> {
        Ok(match self {
            EmbeddingArg::Pattern {
                pattern,
                host,
                positions,
            } => {
                let p: Permutation = pattern.parse()?;
                let h: Permutation = host.parse()?;
                pattern_embedding(&p, &h, &positions)?
            }
            EmbeddingArg::Full(j) => Embedding::try_from(j)?,
        })
    }
}

fn require_member(class: &StructureClass, x: &Structure) -> Result<()> {
    if !class.contains(x) {
        bail!("{x:?} is not in the class {}", class.name());
    }
    Ok(())
}

/// `e` transported along the canonical relabelings of its ends.
pub fn canonical_embedding(cat: &ClassCategory, e: &Embedding) -> Result<Embedding> {
    let class = cat.class();
    require_member(class, e.source())?;
    require_member(class, e.target())?;
    let (_, is) = cat.canonical(e.source());
    let (_, it) = cat.canonical(e.target());
    let back = cat
        .inverse(&is)
        .ok_or_else(|| anyhow!("canonical relabeling is not invertible"))?;
    Ok(cat.compose(&it, &cat.compose(e, &back)?)?)
}

pub fn embedding(cat: &ClassCategory, arg: &str, what: &str) -> Result<Embedding> {
    let e = read_json::<EmbeddingArg>(arg, what)?.build()?;
    canonical_embedding(cat, &e)
}

#[derive(Deserialize)]
struct MorphismJson {
    a: Vec<usize>,
    components: Vec<EmbeddingArg>,
    #[serde(default)]
    target: Option<Vec<StructureJson>>,
}

/// A morphism `{"a": [...], "components": [embedding, ...]}`, where
/// component `i` embeds target atom `a[i]` into source atom `i`. The target
/// may be listed explicitly; otherwise it is read off the components.
pub fn morphism(
    b: &BCat<ClassCategory>,
    arg: &str,
    what: &str,
) -> Result<BMorphism<Structure, Embedding>> {
    let m: MorphismJson = read_json(arg, what)?;
    let cat = b.inner();
    let components = m
        .components
        .into_iter()
        .map(|c| canonical_embedding(cat, &c.build()?))
        .collect::<Result<Vec<_>>>()?;
    let source: Vec<Structure> = components.iter().map(|c| c.target().clone()).collect();
    let target: Vec<Structure> = match m.target {
        Some(t) => t
            .into_iter()
            .map(|s| {
                let x = Structure::try_from(s)?;
                require_member(cat.class(), &x)?;
                Ok(cat.canonical(&x).0)
            })
            .collect::<Result<_>>()?,
        None => {
            let len = m.a.iter().map(|&j| j + 1).max().unwrap_or(0);
            let mut t: Vec<Option<Structure>> = vec![None; len];
            for (&j, c) in m.a.iter().zip(&components) {
                t[j] = Some(c.source().clone());
            }
            t.into_iter()
                .enumerate()
                .map(|(j, x)| {
                    x.ok_or_else(|| anyhow!("{what}: target atom {j} is not hit; list the target"))
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(b.morphism(BObject::new(source), BObject::new(target), m.a, components)?)
}
