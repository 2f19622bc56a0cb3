//! The comparison between transformations into the point category and
//! homomorphisms of pulled-back generic models, and essential surjectivity
//! through representing anafunctors.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::category::{
    core, enumerate_functors, enumerate_transformations, is_fully_faithful, is_surjective_on_objects, FiniteCategory,
    SheafAction,
};
use crate::classifier::ClassifierBundle;
use crate::oracle::{base_change, enumerate_bundle_homs, sort_index, transformation_action, BundleHom, BundleModel};
use crate::theory::Theory;

use super::{build_representing_anafunctor, generic_model, verify_pullback_iso, ForcingError};

#[derive(Clone, Debug, Serialize)]
pub struct ZetaCheck {
    pub instance: String,
    pub check: String,
    pub pass: bool,
    /// The number of cases checked, or the first failing case.
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaReport {
    pub checks: Vec<ZetaCheck>,
}

impl ZetaReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Every action over `h` whose fibers have at most `max` elements.
fn enumerate_actions(h: &FiniteCategory, max: usize) -> Vec<SheafAction> {
    let mut out = Vec::new();
    let mut sizes = vec![0; h.objects()];
    loop {
        let mut p = Vec::new();
        for (x, &k) in sizes.iter().enumerate() {
            p.extend(std::iter::repeat_n(x, k));
        }
        let offset = |x: usize| sizes[..x].iter().sum::<usize>();
        // One choice per (element, arrow out of its object); identities
        // are fixed.
        let slots: Vec<(usize, usize)> = (0..p.len())
            .flat_map(|e| h.arrows_from(p[e]).filter(|&g| !h.is_identity(g)).map(move |g| (e, g)))
            .collect();
        let mut choice = vec![0; slots.len()];
        loop {
            let mut act = vec![vec![None; h.arrows()]; p.len()];
            for e in 0..p.len() {
                act[e][h.e(p[e])] = Some(e);
            }
            for (i, &(e, g)) in slots.iter().enumerate() {
                act[e][g] = Some(offset(h.t(g)) + choice[i]);
            }
            let a = SheafAction { p: p.clone(), act };
            if a.check(h).is_ok() {
                out.push(a);
            }
            let mut i = 0;
            loop {
                if i == slots.len() {
                    break;
                }
                choice[i] += 1;
                if choice[i] < sizes[h.t(slots[i].1)] {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == slots.len() {
                break;
            }
        }
        let mut x = 0;
        loop {
            if x == sizes.len() {
                return out;
            }
            sizes[x] += 1;
            if sizes[x] <= max {
                break;
            }
            sizes[x] = 0;
            x += 1;
        }
    }
}

/// Every model of `theory` over `h` with fibers of at most `max` elements.
pub fn enumerate_bundle_models(theory: &Theory, h: &FiniteCategory, max: usize) -> Vec<BundleModel> {
    let sig = &theory.signature;
    let actions = enumerate_actions(h, max);
    let mut carriers: Vec<Vec<SheafAction>> = vec![Vec::new()];
    for _ in &sig.sorts {
        carriers = carriers
            .into_iter()
            .flat_map(|c| {
                actions.iter().map(move |a| {
                    let mut c = c.clone();
                    c.push(a.clone());
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for sorts in carriers {
        let candidates: Vec<Vec<Vec<usize>>> = sig
            .relations
            .iter()
            .map(|r| {
                let idx: Vec<usize> = r.arity.iter().map(|a| sort_index(sig, a)).collect();
                (0..h.objects())
                    .flat_map(|x| {
                        let fibers: Vec<Vec<usize>> = idx.iter().map(|&s| sorts[s].fiber(x)).collect();
                        let mut ts = vec![Vec::new()];
                        for f in fibers {
                            ts = ts
                                .into_iter()
                                .flat_map(|t: Vec<usize>| f.iter().map(move |&e| [t.clone(), vec![e]].concat()))
                                .collect();
                        }
                        ts
                    })
                    .collect()
            })
            .collect();
        let mut relations: Vec<Vec<BTreeSet<Vec<usize>>>> = vec![Vec::new()];
        for c in &candidates {
            assert!(c.len() < 20, "too many candidate tuples to enumerate subsets");
            relations = relations
                .into_iter()
                .flat_map(|rs| {
                    (0u32..1 << c.len()).map(move |mask| {
                        let mut rs = rs.clone();
                        rs.push((0..c.len()).filter(|i| mask >> i & 1 == 1).map(|i| c[i].clone()).collect());
                        rs
                    })
                })
                .collect();
        }
        for rels in relations {
            let m = BundleModel { sorts: sorts.clone(), relations: rels };
            if m.check(theory, h).is_ok() {
                out.push(m);
            }
        }
    }
    out
}

/// Checks, over the base `k`:
///
/// * transformations `Φ ⇒ Ψ` into the point category act on `Φ*E` by
///   homomorphisms, injectively (faithful) and onto all homs (full);
/// * every model with fibers of at most `|P|` elements is represented by an
///   anafunctor whose pullback of `E` is isomorphic to it.
///
/// With `core` set, the point category is the core groupoid, homs are
/// replaced by isomorphisms, and `k` by its own core.
pub fn verify_zeta(
    bundle: &ClassifierBundle,
    k: &FiniteCategory,
    k_name: &str,
    core_variant: bool,
) -> Result<ZetaReport, ForcingError> {
    let theory = &bundle.theory;
    let pc = bundle.point_category(core_variant)?;
    let generic = generic_model(bundle, &pc)?;
    let base = if core_variant { core(k).category } else { k.clone() };
    let instance = format!(
        "{} |P|={} over {}{}",
        theory.name,
        bundle.params.size,
        k_name,
        if core_variant { " (core)" } else { "" }
    );
    let functors = enumerate_functors(&base, &pc.category);
    let pulled: Vec<BundleModel> = functors.iter().map(|f| base_change(theory, &base, f, &generic.model)).collect();
    let pairs: Vec<(usize, usize)> =
        (0..functors.len()).flat_map(|i| (0..functors.len()).map(move |j| (i, j))).collect();
    let outcomes: Vec<[bool; 3]> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (phi, psi) = (&functors[i], &functors[j]);
            let images: Vec<BundleHom> = enumerate_transformations(&base, &pc.category, phi, psi)
                .iter()
                .map(|alpha| transformation_action(&base, phi, psi, alpha, &generic.model))
                .collect();
            let homs: BTreeSet<BundleHom> = enumerate_bundle_homs(theory, &base, &pulled[i], &pulled[j])
                .into_iter()
                .filter(|f| !core_variant || f.is_iso(theory, &base, &pulled[i], &pulled[j]))
                .collect();
            let well_defined = images.iter().all(|f| homs.contains(f));
            let distinct: BTreeSet<&BundleHom> = images.iter().collect();
            let faithful = distinct.len() == images.len();
            let full = homs.iter().all(|f| distinct.contains(f));
            [well_defined, faithful, full]
        })
        .collect();
    let mut checks = Vec::new();
    let pair_name = |i: usize| format!("Φ={:?}, Ψ={:?}", functors[pairs[i].0].obj, functors[pairs[i].1].obj);
    for (c, name) in ["acts by homomorphisms", "faithful", "full"].into_iter().enumerate() {
        let (pass, witness) = match outcomes.iter().position(|o| !o[c]) {
            None => (true, format!("{} functor pairs", pairs.len())),
            Some(i) => (false, pair_name(i)),
        };
        checks.push(ZetaCheck { instance: instance.clone(), check: name.into(), pass, witness });
    }

    let models = enumerate_bundle_models(theory, &base, bundle.params.size);
    let results: Vec<Result<(), String>> = models
        .par_iter()
        .map(|m| {
            let anaf = build_representing_anafunctor(bundle, &pc, &base, m).map_err(|e| e.to_string())?;
            if !is_fully_faithful(&anaf.middle, &base, &anaf.left) || !is_surjective_on_objects(&base, &anaf.left) {
                return Err("left leg is not fully faithful and surjective on objects".into());
            }
            verify_pullback_iso(bundle, &generic, &anaf, m).map(|_| ()).map_err(|e| e.to_string())
        })
        .collect();
    let (pass, witness) = match results.iter().position(Result::is_err) {
        None => (true, format!("{} models", models.len())),
        Some(i) => (false, format!("model #{i}: {}", results[i].as_ref().unwrap_err())),
    };
    checks.push(ZetaCheck { instance, check: "essentially surjective".into(), pass, witness });
    Ok(ZetaReport { checks })
}
