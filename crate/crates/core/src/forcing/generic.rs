//! The generic model as a bundle model over the point category.

use std::collections::{BTreeMap, BTreeSet};

use crate::category::SheafAction;
use crate::classifier::names;
use crate::classifier::{ClassifierBundle, PointCategory};
use crate::oracle::BundleModel;
use crate::presentation::{point_pushforward, Point, Presentation};

use super::ForcingError;

#[derive(Clone, Debug)]
pub struct GenericModel {
    pub model: BundleModel,
    /// Per sort, the point of `E_A` behind each element.
    pub elements: Vec<Vec<Point>>,
}

fn point_by_ids<'a>(pres: &Presentation, ids: impl IntoIterator<Item = &'a str>) -> Result<Point, ForcingError> {
    let gens = ids
        .into_iter()
        .map(|id| pres.lookup(id).ok_or_else(|| ForcingError::NotAPoint(format!("unknown generator {id}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let pt = Point::from_ids(pres.gen_count(), gens);
    if pres.is_point(&pt) {
        Ok(pt)
    } else {
        Err(ForcingError::NotAPoint(pres.display_term(&pt.true_gens().collect())))
    }
}

/// Elements are the points of each `E_A`, lying over `ρ` of themselves and
/// moved along arrows by `θ`; relations are read off the relation
/// sublocales.
pub fn generic_model(bundle: &ClassifierBundle, pc: &PointCategory) -> Result<GenericModel, ForcingError> {
    let theory = &bundle.theory;
    let h = &pc.category;
    let arrows_pres = if pc.core { &bundle.g1_core } else { &bundle.g1 };
    let mut sorts = Vec::new();
    let mut elements = Vec::new();
    for sort in &theory.signature.sorts {
        let sb = &bundle.per_sort[sort];
        let mut pts = sb.e.enumerate_points();
        pts.sort();
        let index: BTreeMap<&Point, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let p = pts
            .iter()
            .map(|e| {
                let base = point_pushforward(&sb.rho, e)?;
                pc.object_index(&base).ok_or_else(|| ForcingError::NotAPoint(format!("ρ of an element of {sort}")))
            })
            .collect::<Result<Vec<_>, ForcingError>>()?;
        let mut act = vec![vec![None; h.arrows()]; pts.len()];
        for (x, e) in pts.iter().enumerate() {
            let classes: Vec<&str> = e.true_ids(&sb.e).filter(|id| id.starts_with("equiv:")).collect();
            for g in h.arrows_from(p[x]) {
                let ids = pc.arrows[g].true_ids(arrows_pres).chain(classes.iter().copied());
                let pair = point_by_ids(&sb.pullback, ids)?;
                let moved = point_pushforward(&sb.theta, &pair)?;
                act[x][g] = Some(
                    *index.get(&moved).ok_or_else(|| ForcingError::NotAPoint(format!("θ of an element of {sort}")))?,
                );
            }
        }
        sorts.push(SheafAction { p, act });
        elements.push(pts);
    }
    let mut relations = Vec::new();
    for r in &theory.signature.relations {
        let sub = &bundle.rel_subs[&r.name].presentation;
        let mut tuples = BTreeSet::new();
        for pt in sub.enumerate_points() {
            let ids: Vec<&str> = pt.true_ids(sub).collect();
            let base: Vec<&str> = ids.iter().copied().filter(|id| !id.starts_with("equiv:")).collect();
            let mut tuple = Vec::new();
            for (i, a) in r.arity.iter().enumerate() {
                let s = theory.signature.sorts.iter().position(|x| x == a).expect("declared sort");
                let own: Vec<String> = (0..bundle.params.size)
                    .filter(|&q| ids.contains(&names::equiv(a, i + 1, q).as_str()))
                    .map(|q| names::equiv(a, 1, q))
                    .collect();
                let e =
                    point_by_ids(&bundle.per_sort[a].e, base.iter().copied().chain(own.iter().map(String::as_str)))?;
                tuple.push(
                    elements[s]
                        .binary_search(&e)
                        .map_err(|_| ForcingError::NotAPoint(format!("component of {}", r.name)))?,
                );
            }
            tuples.insert(tuple);
        }
        relations.push(tuples);
    }
    Ok(GenericModel { model: BundleModel { sorts, relations }, elements })
}
