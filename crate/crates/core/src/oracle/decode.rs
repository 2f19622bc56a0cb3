//! Reading points of the generated presentations as models, homomorphisms
//! and elements, and writing them back.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{sort_index, ModelHom, Per, PerModel};
use crate::classifier::names::{self, copy, tuples};
use crate::classifier::ClassifierBundle;
use crate::presentation::{Point, Presentation};
use crate::theory::Theory;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("not a point of the {0} presentation")]
    NotAPoint(String),
    #[error("point does not encode a model: {0}")]
    Inconsistent(String),
    #[error("unknown layer `{0}`")]
    UnknownLayer(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Layer {
    Objects,
    Arrows,
    Core,
    Bundle(String),
}

impl Layer {
    pub fn parse(s: &str) -> Result<Layer, DecodeError> {
        match s {
            "objects" => Ok(Layer::Objects),
            "arrows" => Ok(Layer::Arrows),
            "core" => Ok(Layer::Core),
            _ => match s.strip_prefix("E:") {
                Some(sort) if !sort.is_empty() => Ok(Layer::Bundle(sort.to_string())),
                _ => Err(DecodeError::UnknownLayer(s.to_string())),
            },
        }
    }

    pub fn name(&self) -> String {
        match self {
            Layer::Objects => "objects".into(),
            Layer::Arrows => "arrows".into(),
            Layer::Core => "core".into(),
            Layer::Bundle(s) => format!("E:{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoded {
    Model(PerModel),
    Hom { domain: PerModel, codomain: PerModel, hom: ModelHom },
    Element { model: PerModel, class: usize },
}

pub struct DecodedDisplay<'a> {
    pub theory: &'a Theory,
    pub decoded: &'a Decoded,
}

impl fmt::Display for DecodedDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = &self.theory.signature;
        match self.decoded {
            Decoded::Model(m) => write!(f, "{}", m.describe(sig)),
            Decoded::Hom { domain, codomain, hom } => {
                write!(f, "{} → {}", domain.describe(sig), codomain.describe(sig))?;
                for (s, map) in sig.sorts.iter().zip(&hom.maps) {
                    let arrows: Vec<String> = map.iter().enumerate().map(|(c, d)| format!("{c}↦{d}")).collect();
                    write!(f, "; {s}: {}", if arrows.is_empty() { "∅".to_string() } else { arrows.join(" ") })?;
                }
                Ok(())
            }
            Decoded::Element { model, class } => {
                write!(f, "{}; class {class}", model.describe(sig))
            }
        }
    }
}

fn has(pres: &Presentation, pt: &Point, id: &str) -> Result<bool, DecodeError> {
    let g = pres.lookup(id).ok_or_else(|| DecodeError::Inconsistent(format!("missing generator `{id}`")))?;
    Ok(pt.contains(g))
}

/// Reads the object copy `c` of a point.
pub fn decode_model(
    theory: &Theory,
    n: usize,
    pres: &Presentation,
    pt: &Point,
    c: Option<usize>,
) -> Result<PerModel, DecodeError> {
    let sig = &theory.signature;
    let mut sorts = Vec::new();
    for a in &sig.sorts {
        let mut rel = vec![vec![false; n]; n];
        for (p, row) in rel.iter_mut().enumerate() {
            for (q, cell) in row.iter_mut().enumerate() {
                *cell = has(pres, pt, &copy(&names::sim(a, p, q), c))?;
            }
        }
        let classes: BTreeSet<Vec<usize>> =
            (0..n).filter(|&p| rel[p][p]).map(|p| (0..n).filter(|&q| rel[p][q]).collect()).collect();
        let per = Per::new(n, classes.into_iter().collect());
        if (0..n).any(|p| (0..n).any(|q| per.related(p, q) != rel[p][q])) {
            return Err(DecodeError::Inconsistent(format!("sort {a} is not a partial equivalence relation")));
        }
        sorts.push(per);
    }
    let mut relations = Vec::new();
    for r in &sig.relations {
        let mut set = BTreeSet::new();
        for ps in tuples(n, r.arity.len()) {
            if has(pres, pt, &copy(&names::rel(&r.name, &ps), c))? {
                let classes: Option<Vec<usize>> =
                    r.arity.iter().zip(&ps).map(|(s, &p)| sorts[sort_index(sig, s)].class_of(p)).collect();
                let classes = classes
                    .ok_or_else(|| DecodeError::Inconsistent(format!("{} holds outside the carrier", r.name)))?;
                set.insert(classes);
            }
        }
        relations.push(set);
    }
    let m = PerModel { sorts, relations };
    for (ri, r) in sig.relations.iter().enumerate() {
        for ps in tuples(n, r.arity.len()) {
            if m.holds_params(sig, ri, &ps) != has(pres, pt, &copy(&names::rel(&r.name, &ps), c))? {
                return Err(DecodeError::Inconsistent(format!("{} is not stable under ∼", r.name)));
            }
        }
    }
    Ok(m)
}

/// Generator ids true in the encoding of `m` as object copy `c`.
pub fn model_ids(theory: &Theory, n: usize, m: &PerModel, c: Option<usize>) -> Vec<String> {
    let sig = &theory.signature;
    let mut ids = Vec::new();
    for (a, per) in sig.sorts.iter().zip(&m.sorts) {
        for p in 0..n {
            for q in 0..n {
                if per.related(p, q) {
                    ids.push(copy(&names::sim(a, p, q), c));
                }
            }
        }
    }
    for (ri, r) in sig.relations.iter().enumerate() {
        for ps in tuples(n, r.arity.len()) {
            if m.holds_params(sig, ri, &ps) {
                ids.push(copy(&names::rel(&r.name, &ps), c));
            }
        }
    }
    ids
}

/// Transport ids `kind:A:p:q` true in the encoding of `h: m → n`.
pub fn transport_ids(theory: &Theory, m: &PerModel, target: &PerModel, h: &ModelHom, kind: &str) -> Vec<String> {
    let mut ids = Vec::new();
    for (s, a) in theory.signature.sorts.iter().enumerate() {
        for (c, class) in m.sorts[s].classes.iter().enumerate() {
            for &p in class {
                for &q in &target.sorts[s].classes[h.maps[s][c]] {
                    ids.push(names::transport(kind, a, p, q));
                }
            }
        }
    }
    ids
}

pub fn point_of(pres: &Presentation, ids: &[String]) -> Point {
    let gens = ids.iter().map(|id| pres.lookup(id).unwrap_or_else(|| panic!("generator `{id}`")));
    Point::from_ids(pres.gen_count(), gens)
}

/// Reads a transport `kind` from copy `from` to copy `to`.
pub fn decode_transport(
    theory: &Theory,
    n: usize,
    pres: &Presentation,
    pt: &Point,
    kind: &str,
    from: Option<usize>,
    to: Option<usize>,
) -> Result<(PerModel, PerModel, ModelHom), DecodeError> {
    let m = decode_model(theory, n, pres, pt, from)?;
    let target = decode_model(theory, n, pres, pt, to)?;
    let mut maps = Vec::new();
    for (s, a) in theory.signature.sorts.iter().enumerate() {
        let mut map = Vec::new();
        for class in &m.sorts[s].classes {
            let p = class[0];
            let q = (0..n)
                .find(|&q| has(pres, pt, &names::transport(kind, a, p, q)).unwrap_or(false))
                .ok_or_else(|| DecodeError::Inconsistent(format!("{kind} is not total on sort {a}")))?;
            let d = target.sorts[s]
                .class_of(q)
                .ok_or_else(|| DecodeError::Inconsistent(format!("{kind} leaves the carrier")))?;
            map.push(d);
        }
        maps.push(map);
    }
    let h = ModelHom { maps };
    let expected: BTreeSet<String> = transport_ids(theory, &m, &target, &h, kind).into_iter().collect();
    let actual: BTreeSet<String> =
        pt.true_ids(pres).filter(|id| id.starts_with(&format!("{kind}:"))).map(str::to_string).collect();
    if expected != actual {
        return Err(DecodeError::Inconsistent(format!("{kind} is not a function on classes")));
    }
    Ok((m, target, h))
}

/// Reads the classes picked out by `equiv:A:k:p` for each context variable.
pub fn decode_elements(
    theory: &Theory,
    n: usize,
    pres: &Presentation,
    pt: &Point,
    m: &PerModel,
    sorts: &[String],
) -> Result<Vec<usize>, DecodeError> {
    let sig = &theory.signature;
    sorts
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let picked: Vec<usize> =
                (0..n).filter(|&p| has(pres, pt, &names::equiv(a, i + 1, p)).unwrap_or(false)).collect();
            m.sorts[sort_index(sig, a)]
                .classes
                .iter()
                .position(|c| *c == picked)
                .ok_or_else(|| DecodeError::Inconsistent(format!("[≡] does not pick a class of {a}")))
        })
        .collect()
}

pub fn element_ids(m: &PerModel, theory: &Theory, sorts: &[String], classes: &[usize]) -> Vec<String> {
    let sig = &theory.signature;
    let mut ids = Vec::new();
    for (i, (a, &c)) in sorts.iter().zip(classes).enumerate() {
        for &p in &m.sorts[sort_index(sig, a)].classes[c] {
            ids.push(names::equiv(a, i + 1, p));
        }
    }
    ids
}

/// Decodes a point of a named layer, checking first that it is a point.
pub fn decode_point(bundle: &ClassifierBundle, pt: &Point, layer: &Layer) -> Result<Decoded, DecodeError> {
    let theory = &bundle.theory;
    let n = bundle.params.size;
    let pres = bundle.layer(&layer.name()).ok_or_else(|| DecodeError::UnknownLayer(layer.name()))?;
    if pt.len() != pres.gen_count() || !pres.is_point(pt) {
        return Err(DecodeError::NotAPoint(layer.name()));
    }
    match layer {
        Layer::Objects => Ok(Decoded::Model(decode_model(theory, n, pres, pt, None)?)),
        Layer::Arrows | Layer::Core => {
            let (domain, codomain, hom) = decode_transport(theory, n, pres, pt, "alpha", Some(1), Some(2))?;
            Ok(Decoded::Hom { domain, codomain, hom })
        }
        Layer::Bundle(sort) => {
            let model = decode_model(theory, n, pres, pt, None)?;
            let class = decode_elements(theory, n, pres, pt, &model, std::slice::from_ref(sort))?[0];
            Ok(Decoded::Element { model, class })
        }
    }
}

pub fn encode_model(bundle: &ClassifierBundle, m: &PerModel) -> Point {
    point_of(&bundle.g0, &model_ids(&bundle.theory, bundle.params.size, m, None))
}

pub fn encode_hom(bundle: &ClassifierBundle, m: &PerModel, target: &PerModel, h: &ModelHom, core: bool) -> Point {
    let (t, n) = (&bundle.theory, bundle.params.size);
    let mut ids = model_ids(t, n, m, Some(1));
    ids.extend(model_ids(t, n, target, Some(2)));
    ids.extend(transport_ids(t, m, target, h, "alpha"));
    point_of(if core { &bundle.g1_core } else { &bundle.g1 }, &ids)
}

pub fn encode_element(bundle: &ClassifierBundle, sort: &str, m: &PerModel, class: usize) -> Point {
    let (t, n) = (&bundle.theory, bundle.params.size);
    let mut ids = model_ids(t, n, m, None);
    ids.extend(element_ids(m, t, &[sort.to_string()], &[class]));
    point_of(&bundle.per_sort[sort].e, &ids)
}

/// Encodes `((m, class), h: m → target)` in `E_A ×_{G₀} G₁`.
pub fn encode_pullback(
    bundle: &ClassifierBundle,
    sort: &str,
    m: &PerModel,
    class: usize,
    target: &PerModel,
    h: &ModelHom,
) -> Point {
    let (t, n) = (&bundle.theory, bundle.params.size);
    let mut ids = model_ids(t, n, m, Some(1));
    ids.extend(model_ids(t, n, target, Some(2)));
    ids.extend(transport_ids(t, m, target, h, "alpha"));
    ids.extend(element_ids(m, t, &[sort.to_string()], &[class]));
    point_of(&bundle.per_sort[sort].pullback, &ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::ParameterSet;
    use crate::corpus;
    use crate::theory::TheoryOrientation;

    fn bundle() -> ClassifierBundle {
        ClassifierBundle::generate(&corpus::objects(), ParameterSet::new(2, TheoryOrientation::LH)).unwrap()
    }

    #[test]
    fn reading_objects_points() {
        let b = bundle();
        let pt = point_of(&b.g0, &["sim:X:0:0".to_string()]);
        let Decoded::Model(m) = decode_point(&b, &pt, &Layer::Objects).unwrap() else { panic!() };
        assert_eq!(m.sorts[0].classes, vec![vec![0]]);
        let empty = Point::from_ids(b.g0.gen_count(), []);
        let d = decode_point(&b, &empty, &Layer::Objects).unwrap();
        assert_eq!(DecodedDisplay { theory: &b.theory, decoded: &d }.to_string(), "empty model");
    }

    #[test]
    fn reading_an_arrow_between_codiscrete_models() {
        let b = bundle();
        let mut ids: Vec<String> = Vec::new();
        for c in [1, 2] {
            for (p, q) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                ids.push(copy(&names::sim("X", p, q), Some(c)));
            }
        }
        ids.extend(["alpha:X:0:0", "alpha:X:0:1", "alpha:X:1:0", "alpha:X:1:1"].map(String::from));
        let pt = point_of(&b.g1, &ids);
        let Decoded::Hom { domain, codomain, hom } = decode_point(&b, &pt, &Layer::Arrows).unwrap() else { panic!() };
        assert_eq!(domain.carrier(0), 1);
        assert_eq!(codomain.carrier(0), 1);
        assert_eq!(hom.maps, vec![vec![0]]);
    }

    #[test]
    fn reading_a_bundle_point() {
        let b = bundle();
        let ids: Vec<String> = ["sim:X:0:0", "sim:X:0:1", "sim:X:1:0", "sim:X:1:1", "equiv:X:1:0", "equiv:X:1:1"]
            .map(String::from)
            .to_vec();
        let pt = point_of(&b.per_sort["X"].e, &ids);
        let Decoded::Element { model, class } = decode_point(&b, &pt, &Layer::Bundle("X".into())).unwrap() else {
            panic!()
        };
        assert_eq!(model.sorts[0].classes[class], vec![0, 1]);
    }

    #[test]
    fn layer_names() {
        assert_eq!(Layer::parse("E:X").unwrap(), Layer::Bundle("X".into()));
        assert!(Layer::parse("bogus").is_err());
        assert!(Layer::parse("E:").is_err());
    }
}
