//! The core groupoid: arrows are pairs `(f, g)` with `m(f, g) = e(s f)` and
//! `m(g, f) = e(t f)`.

use super::{FiniteCategory, InternalFunctor};

#[derive(Clone, Debug)]
pub struct Core {
    pub category: FiniteCategory,
    /// `(f, f⁻¹)` for each arrow of the core.
    pub pairs: Vec<(usize, usize)>,
    pub inclusion: InternalFunctor,
}

pub fn core(c: &FiniteCategory) -> Core {
    let mut pairs = Vec::new();
    for f in 0..c.arrows() {
        for g in c.hom(c.t(f), c.s(f)) {
            if c.comp(f, g) == c.e(c.s(f)) && c.comp(g, f) == c.e(c.t(f)) {
                pairs.push((f, g));
            }
        }
    }
    let index = |f: usize| pairs.iter().position(|p| p.0 == f).expect("invertible composite");
    let category = FiniteCategory::from_parts(
        c.objects(),
        pairs.iter().map(|p| c.s(p.0)).collect(),
        pairs.iter().map(|p| c.t(p.0)).collect(),
        (0..c.objects()).map(|x| index(c.e(x))).collect(),
        |a, b| index(c.comp(pairs[a].0, pairs[b].0)),
    )
    .expect("core is a category");
    let inclusion = InternalFunctor { obj: (0..c.objects()).collect(), arr: pairs.iter().map(|p| p.0).collect() };
    Core { category, pairs, inclusion }
}
