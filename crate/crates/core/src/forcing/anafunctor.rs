//! The span `H ← [P ⇀↠_H X] → points` presenting a bundle model as a pullback
//! of the generic one.

use std::collections::BTreeMap;

use crate::category::{ff_pullback, pullback_sheaf, FiniteCategory, InternalFunctor};
use crate::classifier::names;
use crate::classifier::{ClassifierBundle, PointCategory};
use crate::oracle::{base_change, enumerate_bundle_homs, sort_index, BundleHom, BundleModel};
use crate::presentation::{point_pushforward, FrameHomSpec, Point};

use super::{joint_forcing_presentation, ForcingError, GenericModel, PartialSurjectionLocale};

#[derive(Clone, Debug)]
pub struct RepresentingAnafunctor {
    pub middle: FiniteCategory,
    /// Fully faithful and surjective on objects.
    pub left: InternalFunctor,
    /// Into the point category.
    pub right: InternalFunctor,
    /// `(object of H, per sort f(p) as an element of the model)`.
    pub objects: Vec<(usize, Vec<Vec<Option<usize>>>)>,
    /// Middle arrows as `(source, arrow of H, target)`.
    pub triples: Vec<(usize, usize, usize)>,
}

/// `O(G₀) → O(forcing locale of the fibers over x)`:
/// `[p ∼ q] ↦ ⋁ₓ [f(p) = x] ∧ [f(q) = x]`, `[p⃗ ∈ R] ↦ ⋁_{x⃗ ∈ R} ⋀ᵢ [f(pᵢ) = xᵢ]`.
fn object_hom(
    bundle: &ClassifierBundle,
    model: &BundleModel,
    fibers: &[Vec<usize>],
    locale: &PartialSurjectionLocale,
) -> Result<FrameHomSpec, ForcingError> {
    let theory = &bundle.theory;
    let sig = &theory.signature;
    let n = bundle.params.size;
    let local = |s: usize, e: usize| fibers[s].iter().position(|&y| y == e);
    let id = |s: usize, p: usize, x: usize| locale.presentation.generator(locale.gen(s, p, x)).id.clone();
    let mut table: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
    for (s, a) in sig.sorts.iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                let terms = (0..fibers[s].len()).map(|x| vec![id(s, p, x), id(s, q, x)]).collect();
                table.insert(names::sim(a, p, q), terms);
            }
        }
    }
    for (r, sym) in sig.relations.iter().enumerate() {
        let idx: Vec<usize> = sym.arity.iter().map(|a| sort_index(sig, a)).collect();
        let inside: Vec<Vec<usize>> = model.relations[r]
            .iter()
            .filter_map(|t| t.iter().zip(&idx).map(|(&e, &s)| local(s, e)).collect::<Option<Vec<_>>>())
            .collect();
        for ps in names::tuples(n, idx.len()) {
            let terms = inside.iter().map(|xs| (0..idx.len()).map(|i| id(idx[i], ps[i], xs[i])).collect()).collect();
            table.insert(names::rel(&sym.name, &ps), terms);
        }
    }
    let spec =
        FrameHomSpec::from_table("zeta", bundle.g0.clone(), std::sync::Arc::new(locale.presentation.clone()), |g| {
            table.get(g).cloned().unwrap_or_default()
        })?;
    Ok(spec.verify()?)
}

/// Middle objects over `x` are the points of the joint forcing locale of
/// the fibers over `x`; the right leg sends them through [`object_hom`] and
/// sends an arrow to the transport `[α(p) = q]` iff `β(f(p), k) = f′(q)`.
pub fn build_representing_anafunctor(
    bundle: &ClassifierBundle,
    pc: &PointCategory,
    h: &FiniteCategory,
    model: &BundleModel,
) -> Result<RepresentingAnafunctor, ForcingError> {
    let theory = &bundle.theory;
    let sig = &theory.signature;
    let n = bundle.params.size;
    let mut objects = Vec::new();
    let mut right_obj = Vec::new();
    for x in 0..h.objects() {
        let fibers: Vec<Vec<usize>> = model.sorts.iter().map(|a| a.fiber(x)).collect();
        for (s, f) in fibers.iter().enumerate() {
            if f.len() > n {
                return Err(ForcingError::FiberTooLarge {
                    sort: sig.sorts[s].clone(),
                    object: x,
                    size: f.len(),
                    params: n,
                });
            }
        }
        let targets: Vec<(String, Vec<String>)> =
            sig.sorts.iter().zip(&fibers).map(|(a, f)| (a.clone(), f.iter().map(usize::to_string).collect())).collect();
        let locale = joint_forcing_presentation(n, &targets);
        let zeta = object_hom(bundle, model, &fibers, &locale)?;
        for pt in locale.presentation.enumerate_points() {
            let image = point_pushforward(&zeta, &pt)?;
            let obj = pc
                .object_index(&image)
                .ok_or_else(|| ForcingError::NotAPoint("image of a partial surjection".into()))?;
            let maps: Vec<Vec<Option<usize>>> = locale
                .decode(&pt)
                .into_iter()
                .enumerate()
                .map(|(s, f)| f.into_iter().map(|x| x.map(|i| fibers[s][i])).collect())
                .collect();
            objects.push((x, maps));
            right_obj.push(obj);
        }
    }
    let q: Vec<usize> = objects.iter().map(|o| o.0).collect();
    let (middle, left, triples) = ff_pullback(h, &q);
    let arrows_pres = if pc.core { &bundle.g1_core } else { &bundle.g1 };
    let mut right_arr = Vec::with_capacity(triples.len());
    for &(y, k, z) in &triples {
        let mut ids: Vec<String> = Vec::new();
        for (obj, c) in [(right_obj[y], 1), (right_obj[z], 2)] {
            ids.extend(pc.objects[obj].true_ids(&bundle.g0).map(|id| names::copy(id, Some(c))));
        }
        for (s, a) in sig.sorts.iter().enumerate() {
            for (p, fp) in objects[y].1[s].iter().enumerate() {
                for (r, fr) in objects[z].1[s].iter().enumerate() {
                    if let (Some(e), Some(e2)) = (fp, fr) {
                        if model.sorts[s].beta(*e, k) == *e2 {
                            ids.push(names::alpha(a, p, r));
                        }
                    }
                }
            }
        }
        let gens = ids
            .iter()
            .map(|id| arrows_pres.lookup(id).ok_or_else(|| ForcingError::NotAPoint(format!("unknown generator {id}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let pt = Point::from_ids(arrows_pres.gen_count(), gens);
        let a = pc
            .arrow_index(&pt)
            .ok_or_else(|| ForcingError::NotAPoint(format!("transport over arrow {k} of the base")))?;
        right_arr.push(a);
    }
    let right = InternalFunctor { obj: right_obj, arr: right_arr };
    right.check(&middle, &pc.category).map_err(ForcingError::NotAPoint)?;
    Ok(RepresentingAnafunctor { middle, left, right, objects, triples })
}

/// An isomorphism `right*E → left*M` over the middle category, with both
/// models.
#[derive(Clone, Debug)]
pub struct PullbackIso {
    pub from_generic: BundleModel,
    pub from_model: BundleModel,
    pub iso: BundleHom,
}

/// Sends the element `(o, [≡ p])` of `right*E` to `(o, f(p))`; falls back
/// to a search over all homs if that candidate fails.
pub fn verify_pullback_iso(
    bundle: &ClassifierBundle,
    generic: &GenericModel,
    anaf: &RepresentingAnafunctor,
    model: &BundleModel,
) -> Result<PullbackIso, ForcingError> {
    let theory = &bundle.theory;
    let mid = &anaf.middle;
    let from_generic = base_change(theory, mid, &anaf.right, &generic.model);
    let from_model = base_change(theory, mid, &anaf.left, model);
    let mut maps = Vec::new();
    let mut candidate = true;
    for (s, a) in theory.signature.sorts.iter().enumerate() {
        let (_, eg) = pullback_sheaf(mid, &anaf.right, &generic.model.sorts[s]);
        let (_, em) = pullback_sheaf(mid, &anaf.left, &model.sorts[s]);
        let sb = &bundle.per_sort[a];
        let mut map = Vec::with_capacity(eg.len());
        for &(o, e) in &eg {
            let p = (0..bundle.params.size).find(|&p| generic.elements[s][e].has(&sb.e, &names::equiv(a, 1, p)));
            let target =
                p.and_then(|p| anaf.objects[o].1[s][p]).and_then(|x| em.iter().position(|&pair| pair == (o, x)));
            match target {
                Some(t) => map.push(t),
                None => {
                    candidate = false;
                    map.push(0);
                }
            }
        }
        maps.push(map);
    }
    let sizes_match = from_generic.sorts.iter().zip(&from_model.sorts).all(|(x, y)| x.len() == y.len());
    let iso = BundleHom { maps };
    if candidate && iso.is_invertible(&from_model) && iso.check(theory, mid, &from_generic, &from_model) {
        return Ok(PullbackIso { from_generic, from_model, iso });
    }
    let found = if sizes_match {
        enumerate_bundle_homs(theory, mid, &from_generic, &from_model)
            .into_iter()
            .find(|f| f.is_iso(theory, mid, &from_generic, &from_model))
    } else {
        None
    };
    match found {
        Some(iso) => Ok(PullbackIso { from_generic, from_model, iso }),
        None => Err(ForcingError::NoIso(format!(
            "{} generic elements against {} model elements",
            from_generic.sorts.iter().map(|a| a.len()).sum::<usize>(),
            from_model.sorts.iter().map(|a| a.len()).sum::<usize>()
        ))),
    }
}
