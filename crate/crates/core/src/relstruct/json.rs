//! JSON encodings of structures and embeddings.
//!
//! A structure is written as
//! `{"signature":[{"name":..,"arity":..}],"size":n,"relations":{name:[[..],..]}}`
//! with tuples in lexicographic order.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Embedding, Signature, Structure};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolJson {
    pub name: String,
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureJson {
    pub signature: Vec<SymbolJson>,
    pub size: usize,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub source: StructureJson,
    pub target: StructureJson,
    pub map: Vec<usize>,
}

impl From<&Structure> for StructureJson {
    fn from(x: &Structure) -> Self {
        let signature = x
            .signature()
            .symbols()
            .iter()
            .map(|s| SymbolJson {
                name: s.name.clone(),
                arity: s.arity,
            })
            .collect();
        let relations = x
            .signature()
            .symbols()
            .iter()
            .zip(x.relations())
            .map(|(s, rel)| (s.name.clone(), rel.iter().collect()))
            .collect();
        StructureJson {
            signature,
            size: x.size(),
            relations,
        }
    }
}

impl TryFrom<StructureJson> for Structure {
    type Error = Error;

    fn try_from(j: StructureJson) -> Result<Self> {
        let sig = Signature::new(j.signature.iter().map(|s| (s.name.clone(), s.arity)))?;
        if let Some(name) = j.relations.keys().find(|k| sig.index_of(k).is_none()) {
            return Err(Error::InvalidStructure(format!(
                "relation {name:?} is not in the signature"
            )));
        }
        let rels = sig
            .symbols()
            .iter()
            .map(|s| j.relations.get(&s.name).cloned().unwrap_or_default())
            .collect();
        Structure::new(sig, j.size, rels)
    }
}

impl Serialize for Structure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StructureJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = StructureJson::deserialize(d)?;
        Structure::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl From<&Embedding> for EmbeddingJson {
    fn from(e: &Embedding) -> Self {
        EmbeddingJson {
            source: e.source().into(),
            target: e.target().into(),
            map: e.map().to_vec(),
        }
    }
}

impl TryFrom<EmbeddingJson> for Embedding {
    type Error = Error;

    fn try_from(j: EmbeddingJson) -> Result<Self> {
        let source = Structure::try_from(j.source)?;
        let target = Structure::try_from(j.target)?;
        Embedding::new(source, target, j.map)
    }
}

impl Serialize for Embedding {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EmbeddingJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Embedding {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = EmbeddingJson::deserialize(d)?;
        Embedding::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_round_trip() {
        let sig = Signature::new([("edge", 2), ("mark", 1)]).unwrap();
        let x = Structure::new(sig, 3, vec![vec![vec![0, 1], vec![1, 0]], vec![vec![2]]]).unwrap();
        let text = serde_json::to_string(&x).unwrap();
        let back: Structure = serde_json::from_str(&text).unwrap();
        assert_eq!(back, x);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn unknown_relation_is_rejected() {
        let text = r#"{"signature":[],"size":2,"relations":{"edge":[[0,1]]}}"#;
        assert!(serde_json::from_str::<Structure>(text).is_err());
    }

    #[test]
    fn out_of_range_tuple_is_rejected() {
        let text =
            r#"{"signature":[{"name":"mark","arity":1}],"size":2,"relations":{"mark":[[2]]}}"#;
        assert!(serde_json::from_str::<Structure>(text).is_err());
    }

    #[test]
    fn embedding_round_trip_validates() {
        let good =
            r#"{"source":{"signature":[],"size":1},"target":{"signature":[],"size":2},"map":[1]}"#;
        let e: Embedding = serde_json::from_str(good).unwrap();
        assert_eq!(e.map(), &[1]);
        let bad = r#"{"source":{"signature":[],"size":2},"target":{"signature":[],"size":2},"map":[1,1]}"#;
        assert!(serde_json::from_str::<Embedding>(bad).is_err());
    }
}
