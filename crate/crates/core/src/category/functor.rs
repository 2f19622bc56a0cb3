//! Internal functors and transformations.

use serde::{Deserialize, Serialize};

use super::FiniteCategory;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InternalFunctor {
    pub obj: Vec<usize>,
    pub arr: Vec<usize>,
}

/// Components `a(x): Φ₀x → Ψ₀x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InternalTransformation {
    pub components: Vec<usize>,
}

impl InternalFunctor {
    pub fn identity(c: &FiniteCategory) -> Self {
        InternalFunctor { obj: (0..c.objects()).collect(), arr: (0..c.arrows()).collect() }
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &InternalFunctor) -> Self {
        InternalFunctor {
            obj: self.obj.iter().map(|&x| other.obj[x]).collect(),
            arr: self.arr.iter().map(|&f| other.arr[f]).collect(),
        }
    }

    /// The first failed law, if any.
    pub fn check(&self, h: &FiniteCategory, k: &FiniteCategory) -> Result<(), String> {
        if self.obj.len() != h.objects() || self.arr.len() != h.arrows() {
            return Err("functor tables have the wrong size".into());
        }
        if self.obj.iter().any(|&x| x >= k.objects()) || self.arr.iter().any(|&f| f >= k.arrows()) {
            return Err("functor tables out of range".into());
        }
        for f in 0..h.arrows() {
            if k.s(self.arr[f]) != self.obj[h.s(f)] {
                return Err(format!("s∘Φ₁ = Φ₀∘s fails at arrow {f}"));
            }
            if k.t(self.arr[f]) != self.obj[h.t(f)] {
                return Err(format!("t∘Φ₁ = Φ₀∘t fails at arrow {f}"));
            }
        }
        for x in 0..h.objects() {
            if self.arr[h.e(x)] != k.e(self.obj[x]) {
                return Err(format!("Φ₁∘e = e∘Φ₀ fails at object {x}"));
            }
        }
        for f in 0..h.arrows() {
            for g in 0..h.arrows() {
                if let Some(fg) = h.m(f, g) {
                    if k.m(self.arr[f], self.arr[g]) != Some(self.arr[fg]) {
                        return Err(format!("Φ₁∘m = m∘(Φ₁×Φ₁) fails at ({f}, {g})"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl InternalTransformation {
    pub fn identity(k: &FiniteCategory, phi: &InternalFunctor) -> Self {
        InternalTransformation { components: phi.obj.iter().map(|&x| k.e(x)).collect() }
    }

    pub fn check(
        &self,
        h: &FiniteCategory,
        k: &FiniteCategory,
        phi: &InternalFunctor,
        psi: &InternalFunctor,
    ) -> Result<(), String> {
        if self.components.len() != h.objects() {
            return Err("transformation has the wrong number of components".into());
        }
        for x in 0..h.objects() {
            let a = self.components[x];
            if a >= k.arrows() || k.s(a) != phi.obj[x] || k.t(a) != psi.obj[x] {
                return Err(format!("component at {x} has the wrong endpoints"));
            }
        }
        for f in 0..h.arrows() {
            let lhs = k.comp(phi.arr[f], self.components[h.t(f)]);
            let rhs = k.comp(self.components[h.s(f)], psi.arr[f]);
            if lhs != rhs {
                return Err(format!("naturality fails at arrow {f}"));
            }
        }
        Ok(())
    }

    /// Vertical composite `self` then `other`.
    pub fn then(&self, k: &FiniteCategory, other: &InternalTransformation) -> Self {
        InternalTransformation {
            components: self.components.iter().zip(&other.components).map(|(&a, &b)| k.comp(a, b)).collect(),
        }
    }

    /// Whiskering by a functor into the domain: `a ∘ Σ`.
    pub fn precompose(&self, sigma: &InternalFunctor) -> Self {
        InternalTransformation { components: sigma.obj.iter().map(|&y| self.components[y]).collect() }
    }
}

/// For every pair of objects, `Φ₁` maps `Hom(x, y)` bijectively onto
/// `Hom(Φ₀x, Φ₀y)`.
pub fn is_fully_faithful(h: &FiniteCategory, k: &FiniteCategory, phi: &InternalFunctor) -> bool {
    (0..h.objects()).all(|x| {
        (0..h.objects()).all(|y| {
            let mut image: Vec<usize> = h.hom(x, y).iter().map(|&f| phi.arr[f]).collect();
            let n = image.len();
            image.sort_unstable();
            image.dedup();
            image.len() == n && n == k.hom(phi.obj[x], phi.obj[y]).len()
        })
    })
}

pub fn is_surjective_on_objects(k: &FiniteCategory, phi: &InternalFunctor) -> bool {
    (0..k.objects()).all(|y| phi.obj.contains(&y))
}

/// Every functor `h → k`, by backtracking over object images and then
/// arrow images in order.
pub fn enumerate_functors(h: &FiniteCategory, k: &FiniteCategory) -> Vec<InternalFunctor> {
    let mut out = Vec::new();
    let mut obj = vec![0; h.objects()];
    objects(h, k, 0, &mut obj, &mut out);
    out
}

fn objects(h: &FiniteCategory, k: &FiniteCategory, x: usize, obj: &mut Vec<usize>, out: &mut Vec<InternalFunctor>) {
    if x == h.objects() {
        let mut arr = vec![usize::MAX; h.arrows()];
        for y in 0..h.objects() {
            arr[h.e(y)] = k.e(obj[y]);
        }
        arrows(h, k, 0, obj, &mut arr, out);
        return;
    }
    for y in 0..k.objects() {
        obj[x] = y;
        objects(h, k, x + 1, obj, out);
    }
}

fn consistent(h: &FiniteCategory, k: &FiniteCategory, arr: &[usize], f: usize) -> bool {
    let set = |g: usize| arr[g] != usize::MAX;
    (0..h.arrows()).all(|a| {
        (0..h.arrows()).all(|b| match h.m(a, b) {
            Some(ab) if (a == f || b == f || ab == f) && set(a) && set(b) && set(ab) => {
                k.m(arr[a], arr[b]) == Some(arr[ab])
            }
            _ => true,
        })
    })
}

fn arrows(
    h: &FiniteCategory,
    k: &FiniteCategory,
    f: usize,
    obj: &[usize],
    arr: &mut Vec<usize>,
    out: &mut Vec<InternalFunctor>,
) {
    if f == h.arrows() {
        out.push(InternalFunctor { obj: obj.to_vec(), arr: arr.clone() });
        return;
    }
    if arr[f] != usize::MAX {
        if consistent(h, k, arr, f) {
            arrows(h, k, f + 1, obj, arr, out);
        }
        return;
    }
    for g in k.hom(obj[h.s(f)], obj[h.t(f)]) {
        arr[f] = g;
        if consistent(h, k, arr, f) {
            arrows(h, k, f + 1, obj, arr, out);
        }
    }
    arr[f] = usize::MAX;
}

/// Every transformation `Φ ⇒ Ψ`, by enumerating components and filtering by
/// naturality.
pub fn enumerate_transformations(
    h: &FiniteCategory,
    k: &FiniteCategory,
    phi: &InternalFunctor,
    psi: &InternalFunctor,
) -> Vec<InternalTransformation> {
    let choices: Vec<Vec<usize>> = (0..h.objects()).map(|x| k.hom(phi.obj[x], psi.obj[x])).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(h.objects());
    fn go(
        h: &FiniteCategory,
        k: &FiniteCategory,
        phi: &InternalFunctor,
        psi: &InternalFunctor,
        choices: &[Vec<usize>],
        current: &mut Vec<usize>,
        out: &mut Vec<InternalTransformation>,
    ) {
        let x = current.len();
        if x == choices.len() {
            out.push(InternalTransformation { components: current.clone() });
            return;
        }
        for &a in &choices[x] {
            current.push(a);
            let natural = (0..h.arrows()).all(|f| {
                let (s, t) = (h.s(f), h.t(f));
                if s > x || t > x {
                    return true;
                }
                k.comp(phi.arr[f], current[t]) == k.comp(current[s], psi.arr[f])
            });
            if natural {
                go(h, k, phi, psi, choices, current, out);
            }
            current.pop();
        }
    }
    go(h, k, phi, psi, &choices, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_ff_and_surjective() {
        let c = FiniteCategory::codiscrete(2);
        let id = InternalFunctor::identity(&c);
        assert!(id.check(&c, &c).is_ok());
        assert!(is_fully_faithful(&c, &c, &id));
        assert!(is_surjective_on_objects(&c, &id));
    }

    #[test]
    fn inclusion_of_one_object() {
        let one = FiniteCategory::terminal();
        let c = FiniteCategory::codiscrete(2);
        let inc = InternalFunctor { obj: vec![0], arr: vec![0] };
        assert!(inc.check(&one, &c).is_ok());
        assert!(is_fully_faithful(&one, &c, &inc));
        assert!(!is_surjective_on_objects(&c, &inc));
    }

    #[test]
    fn collapse_to_terminal() {
        let c = FiniteCategory::codiscrete(2);
        let one = FiniteCategory::terminal();
        let collapse = InternalFunctor { obj: vec![0, 0], arr: vec![0; 4] };
        assert!(collapse.check(&c, &one).is_ok());
        assert!(is_fully_faithful(&c, &one, &collapse));
        assert!(is_surjective_on_objects(&one, &collapse));
    }

    #[test]
    fn functor_and_transformation_counts() {
        let arrow = FiniteCategory::free_arrow();
        let c = FiniteCategory::codiscrete(2);
        // Functors from the free arrow pick an arrow; those into a codiscrete
        // groupoid are determined by their objects.
        assert_eq!(enumerate_functors(&arrow, &c).len(), 4);
        assert_eq!(enumerate_functors(&c, &arrow).len(), 2);
        assert_eq!(enumerate_functors(&FiniteCategory::cyclic_group(4), &FiniteCategory::cyclic_group(2)).len(), 2);
        let fs = enumerate_functors(&arrow, &arrow);
        for phi in &fs {
            for psi in &fs {
                for a in enumerate_transformations(&arrow, &arrow, phi, psi) {
                    assert!(a.check(&arrow, &arrow, phi, psi).is_ok());
                }
            }
        }
        let id = InternalFunctor::identity(&arrow);
        assert_eq!(enumerate_transformations(&arrow, &arrow, &id, &id).len(), 1);
    }
}
