//! Models over a finite category: one sheaf per sort, relations as
//! action-stable sets of tuples within a fiber.

use std::collections::BTreeSet;

use crate::category::{
    enumerate_equivariant_maps, is_equivariant, pullback_sheaf, sh_of_transformation, FiniteCategory, InternalFunctor,
    InternalTransformation, SheafAction,
};
use crate::theory::{Formula, Theory};

use super::{interpret_with, sort_index, PerModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleModel {
    pub sorts: Vec<SheafAction>,
    pub relations: Vec<BTreeSet<Vec<usize>>>,
}

/// Per-sort maps between the elements of two bundle models.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BundleHom {
    pub maps: Vec<Vec<usize>>,
}

impl BundleModel {
    /// Elements of a tuple lie over one object; returns it.
    fn base_of(&self, theory: &Theory, r: usize, t: &[usize]) -> Option<usize> {
        let sig = &theory.signature;
        let objs: Vec<usize> =
            sig.relations[r].arity.iter().zip(t).map(|(s, &e)| self.sorts[sort_index(sig, s)].p[e]).collect();
        objs.first().copied().filter(|x| objs.iter().all(|y| y == x))
    }

    pub fn interpret(
        &self,
        theory: &Theory,
        h: &FiniteCategory,
        context: &[(String, String)],
        formula: &Formula,
    ) -> BTreeSet<(usize, Vec<usize>)> {
        let carrier = |s: usize, x: usize| self.sorts[s].fiber(x);
        let holds = |r: usize, _: usize, t: &[usize]| self.relations[r].contains(t);
        interpret_with(&theory.signature, h.objects(), &carrier, &holds, context, formula)
    }

    pub fn check(&self, theory: &Theory, h: &FiniteCategory) -> Result<(), String> {
        let sig = &theory.signature;
        if self.sorts.len() != sig.sorts.len() || self.relations.len() != sig.relations.len() {
            return Err("model does not match the signature".into());
        }
        for a in &self.sorts {
            a.check(h)?;
        }
        for (r, sym) in sig.relations.iter().enumerate() {
            for t in &self.relations[r] {
                let Some(x) = self.base_of(theory, r, t) else {
                    return Err(format!("{} relates elements of different fibers", sym.name));
                };
                for g in h.arrows_from(x) {
                    let moved: Vec<usize> =
                        sym.arity.iter().zip(t).map(|(s, &e)| self.sorts[sort_index(sig, s)].beta(e, g)).collect();
                    if !self.relations[r].contains(&moved) {
                        return Err(format!("{} is not stable under arrow {g}", sym.name));
                    }
                }
            }
        }
        for (i, ax) in theory.axioms.iter().enumerate() {
            if !self.interpret(theory, h, &ax.context, &ax.lhs).is_subset(&self.interpret(
                theory,
                h,
                &ax.context,
                &ax.rhs,
            )) {
                return Err(format!("axiom #{i} fails"));
            }
        }
        Ok(())
    }

    /// The model `m` over every object, with identity transport.
    pub fn constant(theory: &Theory, h: &FiniteCategory, m: &PerModel) -> Self {
        let sig = &theory.signature;
        let sorts: Vec<SheafAction> = (0..sig.sorts.len())
            .map(|s| {
                let k = m.carrier(s);
                SheafAction::from_fn(h, (0..h.objects()).flat_map(|x| std::iter::repeat_n(x, k)).collect(), |e, g| {
                    h.t(g) * k + e % k
                })
            })
            .collect();
        let relations = sig
            .relations
            .iter()
            .enumerate()
            .map(|(r, sym)| {
                (0..h.objects())
                    .flat_map(|x| {
                        let sizes: Vec<usize> = sym.arity.iter().map(|s| m.carrier(sort_index(sig, s))).collect();
                        m.relations[r]
                            .iter()
                            .map(move |t| t.iter().zip(&sizes).map(|(&c, &k)| x * k + c).collect())
                            .collect::<Vec<_>>()
                    })
                    .collect()
            })
            .collect();
        BundleModel { sorts, relations }
    }
}

impl BundleHom {
    pub fn check(&self, theory: &Theory, h: &FiniteCategory, a: &BundleModel, b: &BundleModel) -> bool {
        let sig = &theory.signature;
        self.maps.len() == a.sorts.len()
            && self.maps.iter().enumerate().all(|(s, f)| is_equivariant(h, &a.sorts[s], &b.sorts[s], f))
            && sig.relations.iter().enumerate().all(|(r, sym)| {
                a.relations[r].iter().all(|t| {
                    let image: Vec<usize> =
                        sym.arity.iter().zip(t).map(|(s, &e)| self.maps[sort_index(sig, s)][e]).collect();
                    b.relations[r].contains(&image)
                })
            })
    }

    pub fn inverse(&self, target: &BundleModel) -> Option<BundleHom> {
        let mut maps = Vec::new();
        for (f, b) in self.maps.iter().zip(&target.sorts) {
            let mut inv = vec![usize::MAX; b.len()];
            for (x, &y) in f.iter().enumerate() {
                if inv[y] != usize::MAX {
                    return None;
                }
                inv[y] = x;
            }
            if inv.contains(&usize::MAX) {
                return None;
            }
            maps.push(inv);
        }
        Some(BundleHom { maps })
    }

    /// A hom `a → b` with an inverse hom.
    pub fn is_iso(&self, theory: &Theory, h: &FiniteCategory, a: &BundleModel, b: &BundleModel) -> bool {
        self.check(theory, h, a, b) && self.inverse(b).is_some_and(|g| g.check(theory, h, b, a))
    }

    /// Bijective on every sort onto `target`.
    pub fn is_invertible(&self, target: &BundleModel) -> bool {
        self.inverse(target).is_some()
    }
}

/// `Φ*M` over `h` along `Φ: h → g`.
pub fn base_change(theory: &Theory, h: &FiniteCategory, phi: &InternalFunctor, m: &BundleModel) -> BundleModel {
    let sig = &theory.signature;
    let pulled: Vec<(SheafAction, Vec<(usize, usize)>)> = m.sorts.iter().map(|a| pullback_sheaf(h, phi, a)).collect();
    let relations = sig
        .relations
        .iter()
        .enumerate()
        .map(|(r, sym)| {
            let idx: Vec<usize> = sym.arity.iter().map(|s| sort_index(sig, s)).collect();
            let mut out = BTreeSet::new();
            for x in 0..h.objects() {
                for t in &m.relations[r] {
                    let lifted: Option<Vec<usize>> =
                        idx.iter().zip(t).map(|(&s, &y)| pulled[s].1.iter().position(|&q| q == (x, y))).collect();
                    if let Some(l) = lifted {
                        out.insert(l);
                    }
                }
            }
            out
        })
        .collect();
    BundleModel { sorts: pulled.into_iter().map(|p| p.0).collect(), relations }
}

/// The hom `Φ*M → Ψ*M` induced by `α: Φ ⇒ Ψ`.
pub fn transformation_action(
    h: &FiniteCategory,
    phi: &InternalFunctor,
    psi: &InternalFunctor,
    alpha: &InternalTransformation,
    m: &BundleModel,
) -> BundleHom {
    BundleHom { maps: m.sorts.iter().map(|a| sh_of_transformation(h, phi, psi, alpha, a)).collect() }
}

/// Every hom `a → b` of bundle models over `h`.
pub fn enumerate_bundle_homs(theory: &Theory, h: &FiniteCategory, a: &BundleModel, b: &BundleModel) -> Vec<BundleHom> {
    fn go(
        theory: &Theory,
        h: &FiniteCategory,
        a: &BundleModel,
        b: &BundleModel,
        per_sort: &[Vec<Vec<usize>>],
        choice: &mut Vec<Vec<usize>>,
        out: &mut Vec<BundleHom>,
    ) {
        if choice.len() == per_sort.len() {
            let f = BundleHom { maps: choice.clone() };
            if f.check(theory, h, a, b) {
                out.push(f);
            }
            return;
        }
        for m in &per_sort[choice.len()] {
            choice.push(m.clone());
            go(theory, h, a, b, per_sort, choice, out);
            choice.pop();
        }
    }
    let per_sort: Vec<Vec<Vec<usize>>> =
        a.sorts.iter().zip(&b.sorts).map(|(x, y)| enumerate_equivariant_maps(h, x, y)).collect();
    let mut out = Vec::new();
    go(theory, h, a, b, &per_sort, &mut Vec::new(), &mut out);
    out
}
