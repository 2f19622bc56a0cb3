//! Seeded generators of small categories, functors and sheaves.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{enumerate_functors, ff_pullback, FiniteCategory, InternalFunctor, SheafAction};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A preorder, a cyclic group, a codiscrete groupoid, the free arrow or a
/// product of two of these, with at most `max_objects` objects.
pub fn category(rng: &mut impl Rng, max_objects: usize) -> FiniteCategory {
    let max_objects = max_objects.max(1);
    match rng.random_range(0..5) {
        0 => {
            let n = rng.random_range(1..=max_objects);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|_| rng.random_bool(0.3)).collect();
            FiniteCategory::preorder(n, &edges)
        }
        1 => FiniteCategory::cyclic_group(rng.random_range(1..=3)),
        2 => FiniteCategory::codiscrete(rng.random_range(1..=max_objects.min(3))),
        3 if max_objects >= 2 => FiniteCategory::free_arrow(),
        _ => {
            let a = FiniteCategory::cyclic_group(rng.random_range(1..=2));
            let b = if max_objects >= 2 { FiniteCategory::free_arrow() } else { FiniteCategory::terminal() };
            FiniteCategory::product(&a, &b)
        }
    }
}

/// A groupoid with at most `max_objects` objects.
pub fn groupoid(rng: &mut impl Rng, max_objects: usize) -> FiniteCategory {
    let n = rng.random_range(1..=max_objects.clamp(1, 3));
    let c = FiniteCategory::codiscrete(n);
    match rng.random_range(0..3) {
        0 => c,
        1 => FiniteCategory::cyclic_group(rng.random_range(1..=3)),
        _ => FiniteCategory::product(&c, &FiniteCategory::cyclic_group(2)),
    }
}

/// A quotient of a coproduct of up to three representables.
pub fn action(rng: &mut impl Rng, h: &FiniteCategory) -> SheafAction {
    let parts: Vec<SheafAction> =
        (0..rng.random_range(0..=3)).map(|_| SheafAction::representable(h, rng.random_range(0..h.objects()))).collect();
    let sum = SheafAction::coproduct(h, &parts);
    if sum.is_empty() {
        return sum;
    }
    let merges: Vec<(usize, usize)> = (0..rng.random_range(0..=2))
        .map(|_| (rng.random_range(0..sum.len()), rng.random_range(0..sum.len())))
        .collect();
    sum.quotient(h, &merges).0
}

/// A fully faithful, surjective-on-objects `Φ: H → k`, with `H` the full
/// pullback of `k` along a random surjection of `|k₀| + extra` points.
pub fn ff_surjection(rng: &mut impl Rng, k: &FiniteCategory, max_extra: usize) -> (FiniteCategory, InternalFunctor) {
    let mut q: Vec<usize> = (0..k.objects()).collect();
    for _ in 0..rng.random_range(0..=max_extra) {
        q.push(rng.random_range(0..k.objects()));
    }
    for i in (1..q.len()).rev() {
        let j = rng.random_range(0..=i);
        q.swap(i, j);
    }
    let (h, phi, _) = ff_pullback(k, &q);
    (h, phi)
}

/// A uniformly chosen functor, if there is one.
pub fn functor(rng: &mut impl Rng, h: &FiniteCategory, k: &FiniteCategory) -> Option<InternalFunctor> {
    enumerate_functors(h, k).choose(rng).cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{is_fully_faithful, is_surjective_on_objects};

    #[test]
    fn generated_data_is_valid() {
        let mut r = rng(3);
        for _ in 0..40 {
            let k = category(&mut r, 4);
            assert!(k.objects() <= 4);
            let a = action(&mut r, &k);
            assert!(a.check(&k).is_ok());
            let (h, phi) = ff_surjection(&mut r, &k, 2);
            assert!(phi.check(&h, &k).is_ok());
            assert!(is_fully_faithful(&h, &k, &phi) && is_surjective_on_objects(&k, &phi));
            assert!(groupoid(&mut r, 3).is_groupoid());
        }
    }
}
