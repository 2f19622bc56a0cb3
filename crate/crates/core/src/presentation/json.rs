//! Canonical JSON encoding of presentations and frame homs.
//!
//! Objects are emitted with sorted keys (serde_json's default map), two-space
//! indentation and a trailing newline, so equal values give identical bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{Dnf, FrameHomSpec, Generator, Orientation, Presentation, Sequent};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid presentation data: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    lhs: Vec<String>,
    rhs: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: Vec<Generator>,
    relations: Vec<RelationJson>,
    orientation: Orientation,
}

#[derive(Serialize, Deserialize)]
struct HomJson {
    name: String,
    source: String,
    target: String,
    map: BTreeMap<String, Vec<Vec<String>>>,
    verified: bool,
}

fn ids(pres: &Presentation, t: &super::MeetTerm) -> Vec<String> {
    t.iter().map(|g| pres.generator(g).id.clone()).collect()
}

fn dnf_ids(pres: &Presentation, d: &Dnf) -> Vec<Vec<String>> {
    d.terms().iter().map(|t| ids(pres, t)).collect()
}

pub fn presentation_value(pres: &Presentation) -> Value {
    let doc = PresentationJson {
        generators: pres.generators().to_vec(),
        relations: pres
            .relations()
            .iter()
            .map(|r| RelationJson { lhs: ids(pres, &r.lhs), rhs: dnf_ids(pres, &r.rhs) })
            .collect(),
        orientation: pres.orientation(),
    };
    serde_json::to_value(doc).expect("presentation serialises")
}

/// Canonical text of a JSON value.
pub fn canonical(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serialises");
    s.push('\n');
    s
}

pub fn presentation_to_json(pres: &Presentation) -> String {
    canonical(&presentation_value(pres))
}

pub fn presentation_from_json(text: &str) -> Result<Presentation, JsonError> {
    let doc: PresentationJson = serde_json::from_str(text)?;
    let mut pres = Presentation::empty(doc.orientation);
    for g in doc.generators {
        pres.add_generator(g).map_err(|e| JsonError::Invalid(e.to_string()))?;
    }
    for r in doc.relations {
        let spec = super::RelationSpec::new(r.lhs, r.rhs);
        let seq: Sequent = spec.resolve(&pres, str::to_string).map_err(|e| JsonError::Invalid(e.to_string()))?;
        pres.add_relation(seq).map_err(|e| JsonError::Invalid(e.to_string()))?;
    }
    Ok(pres)
}

pub fn hom_to_json(hom: &FrameHomSpec, source: &str, target: &str) -> String {
    let map = hom
        .source
        .gen_ids()
        .map(|g| (hom.source.generator(g).id.clone(), dnf_ids(&hom.target, hom.image(g))))
        .collect();
    let doc = HomJson {
        name: hom.name.clone(),
        source: source.to_string(),
        target: target.to_string(),
        map,
        verified: hom.is_verified(),
    };
    canonical(&serde_json::to_value(doc).expect("hom serialises"))
}

/// Reads a hom, resolving its source and target names through `lookup`.
/// The result is unverified regardless of the stored flag.
pub fn hom_from_json(
    text: &str,
    lookup: impl Fn(&str) -> Option<Arc<Presentation>>,
) -> Result<FrameHomSpec, JsonError> {
    let doc: HomJson = serde_json::from_str(text)?;
    let source =
        lookup(&doc.source).ok_or_else(|| JsonError::Invalid(format!("unknown presentation `{}`", doc.source)))?;
    let target =
        lookup(&doc.target).ok_or_else(|| JsonError::Invalid(format!("unknown presentation `{}`", doc.target)))?;
    if doc.map.len() != source.gen_count() {
        return Err(JsonError::Invalid(format!("{}: map is not total", doc.name)));
    }
    FrameHomSpec::from_table(doc.name, source, target, |id| doc.map.get(id).cloned().unwrap_or_default())
        .map_err(|e| JsonError::Invalid(e.to_string()))
}
