//! Anafunctors: spans whose left leg is fully faithful and surjective on
//! objects.

use super::{
    is_fully_faithful, is_surjective_on_objects, pullback_categories, FiniteCategory, InternalFunctor,
    InternalTransformation, Pullback,
};

#[derive(Clone, Debug)]
pub struct Anafunctor {
    pub middle: FiniteCategory,
    /// `Ξ`, fully faithful and surjective on objects.
    pub left: InternalFunctor,
    /// `Φ`.
    pub right: InternalFunctor,
}

impl Anafunctor {
    pub fn from_functor(h: &FiniteCategory, phi: InternalFunctor) -> Self {
        Anafunctor { middle: h.clone(), left: InternalFunctor::identity(h), right: phi }
    }

    pub fn check(&self, h: &FiniteCategory, k: &FiniteCategory) -> Result<(), String> {
        self.left.check(&self.middle, h)?;
        self.right.check(&self.middle, k)?;
        if !is_fully_faithful(&self.middle, h, &self.left) {
            return Err("left leg is not fully faithful".into());
        }
        if !is_surjective_on_objects(h, &self.left) {
            return Err("left leg is not surjective on objects".into());
        }
        Ok(())
    }
}

/// `H ⇸ K ⇸ L` through the pullback of the inner legs.
pub fn compose_anafunctors(f: &Anafunctor, g: &Anafunctor) -> Anafunctor {
    let p = pullback_categories(&f.middle, &g.middle, &f.right, &g.left);
    Anafunctor { left: p.left.then(&f.left), right: p.right.then(&g.right), middle: p.category }
}

/// A raw 2-cell `(Σ, τ)`: `Σ: H̃₃ → H̃₁ ×_H H̃₂` and `τ` on the objects of
/// `H̃₃`.
#[derive(Clone, Debug)]
pub struct TwoCellDatum {
    pub domain: FiniteCategory,
    pub sigma: InternalFunctor,
    pub tau: InternalTransformation,
}

/// The pullback `H̃₁ ×_H H̃₂` of two anafunctors with the same source, and
/// the two composites `Φ₁∘Ξ′₂`, `Φ₂∘Ξ′₁` out of it.
pub fn two_cell_frame(f1: &Anafunctor, f2: &Anafunctor) -> (Pullback, InternalFunctor, InternalFunctor) {
    let p = pullback_categories(&f1.middle, &f2.middle, &f1.left, &f2.left);
    let lower = p.left.then(&f1.right);
    let upper = p.right.then(&f2.right);
    (p, lower, upper)
}

/// The unique `τ̄` on the pullback's objects with `τ̄ ∘ Σ₀ = τ`.
pub fn two_cell_canonical(
    k: &FiniteCategory,
    f1: &Anafunctor,
    f2: &Anafunctor,
    datum: &TwoCellDatum,
) -> Result<(Pullback, InternalTransformation), String> {
    let (p, phi, psi) = two_cell_frame(f1, f2);
    let pc = &p.category;
    datum.sigma.check(&datum.domain, pc)?;
    if !is_surjective_on_objects(pc, &datum.sigma) {
        return Err("Σ₀ is not surjective".into());
    }
    if !is_fully_faithful(&datum.domain, pc, &datum.sigma) {
        return Err("Σ is not fully faithful".into());
    }
    datum.tau.check(&datum.domain, k, &datum.sigma.then(&phi), &datum.sigma.then(&psi))?;
    let mut components = vec![usize::MAX; pc.objects()];
    for (y, &z) in datum.sigma.obj.iter().enumerate() {
        let c = datum.tau.components[y];
        if components[z] != usize::MAX && components[z] != c {
            let other = datum.sigma.obj.iter().position(|&w| w == z).unwrap();
            return Err(format!("τ differs on {other} and {y}, which Σ₀ identifies"));
        }
        components[z] = c;
    }
    let tau = InternalTransformation { components };
    tau.check(pc, k, &phi, &psi)?;
    Ok((p, tau))
}
