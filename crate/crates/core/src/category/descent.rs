//! Pullbacks of categories and descent of sheaves along fully faithful,
//! surjective-on-objects functors.

use super::sheaf::{is_equivariant, UnionFind};
use super::{
    action_to_dofib, dofib_to_action, is_fully_faithful, is_surjective_on_objects, pullback_sheaf, DiscreteOpfibration,
    FiniteCategory, InternalFunctor, SheafAction,
};

/// `A ×_C B` with its projections; objects and arrows are the listed pairs.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub category: FiniteCategory,
    pub left: InternalFunctor,
    pub right: InternalFunctor,
    pub objects: Vec<(usize, usize)>,
    pub arrows: Vec<(usize, usize)>,
}

pub fn pullback_categories(
    a: &FiniteCategory,
    b: &FiniteCategory,
    f: &InternalFunctor,
    g: &InternalFunctor,
) -> Pullback {
    let objects: Vec<(usize, usize)> = (0..a.objects())
        .flat_map(|x| (0..b.objects()).filter(move |&y| f.obj[x] == g.obj[y]).map(move |y| (x, y)))
        .collect();
    let arrows: Vec<(usize, usize)> = (0..a.arrows())
        .flat_map(|u| (0..b.arrows()).filter(move |&v| f.arr[u] == g.arr[v]).map(move |v| (u, v)))
        .collect();
    let obj_index = |p: (usize, usize)| objects.iter().position(|&q| q == p).unwrap();
    let arr_index = |p: (usize, usize)| arrows.iter().position(|&q| q == p).unwrap();
    let category = FiniteCategory::from_parts(
        objects.len(),
        arrows.iter().map(|&(u, v)| obj_index((a.s(u), b.s(v)))).collect(),
        arrows.iter().map(|&(u, v)| obj_index((a.t(u), b.t(v)))).collect(),
        objects.iter().map(|&(x, y)| arr_index((a.e(x), b.e(y)))).collect(),
        |p, q| arr_index((a.comp(arrows[p].0, arrows[q].0), b.comp(arrows[p].1, arrows[q].1))),
    )
    .expect("pullback of categories");
    let left =
        InternalFunctor { obj: objects.iter().map(|p| p.0).collect(), arr: arrows.iter().map(|p| p.0).collect() };
    let right =
        InternalFunctor { obj: objects.iter().map(|p| p.1).collect(), arr: arrows.iter().map(|p| p.1).collect() };
    Pullback { category, left, right, objects, arrows }
}

/// The category over `q: Y → H₀` whose arrows `y → y′` are the arrows
/// `q y → q y′` of `h`; returns it with its fully faithful projection and
/// the arrow triples `(y, k, y′)`.
pub fn ff_pullback(h: &FiniteCategory, q: &[usize]) -> (FiniteCategory, InternalFunctor, Vec<(usize, usize, usize)>) {
    let n = q.len();
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|y| (0..n).flat_map(move |z| h.hom(q[y], q[z]).into_iter().map(move |k| (y, k, z)))).collect();
    let index = |t: (usize, usize, usize)| triples.iter().position(|&u| u == t).unwrap();
    let category = FiniteCategory::from_parts(
        n,
        triples.iter().map(|t| t.0).collect(),
        triples.iter().map(|t| t.2).collect(),
        (0..n).map(|y| index((y, h.e(q[y]), y))).collect(),
        |a, b| index((triples[a].0, h.comp(triples[a].1, triples[b].1), triples[b].2)),
    )
    .expect("full subcategory over q");
    let functor = InternalFunctor { obj: q.to_vec(), arr: triples.iter().map(|t| t.1).collect() };
    (category, functor, triples)
}

/// A sheaf over `K` together with the equivariant bijection from the input
/// sheaf over `H` onto its pullback along `Φ`.
#[derive(Clone, Debug)]
pub struct Descent {
    pub action: SheafAction,
    pub iso: Vec<usize>,
}

/// The unique arrow `a → b` sent to `e(Φ₀ b)`; exists when `Φ₀a = Φ₀b`.
fn unit_lift(h: &FiniteCategory, k: &FiniteCategory, phi: &InternalFunctor, a: usize, b: usize) -> usize {
    h.hom(a, b).into_iter().find(|&u| phi.arr[u] == k.e(phi.obj[b])).expect("fully faithful")
}

/// Quotients `X` by `x ~ β(x, u_{p x, b})` and lets `K` act through lifts.
pub fn descend_action(
    h: &FiniteCategory,
    k: &FiniteCategory,
    phi: &InternalFunctor,
    x: &SheafAction,
) -> Result<Descent, String> {
    phi.check(h, k)?;
    if !is_fully_faithful(h, k, phi) {
        return Err("functor is not fully faithful".into());
    }
    if !is_surjective_on_objects(k, phi) {
        return Err("functor is not surjective on objects".into());
    }
    x.check(h)?;
    let mut uf = UnionFind::new(x.len());
    for e in 0..x.len() {
        let a = x.p[e];
        for b in (0..h.objects()).filter(|&b| phi.obj[b] == phi.obj[a]) {
            uf.union(e, x.beta(e, unit_lift(h, k, phi, a, b)));
        }
    }
    let (class, reps) = uf.classes();
    // Any object over the target of `g` will do; the identifications make
    // the choice irrelevant.
    let over = |y: usize| (0..h.objects()).find(|&b| phi.obj[b] == y).unwrap();
    let action = SheafAction::from_fn(k, reps.iter().map(|&r| phi.obj[x.p[r]]).collect(), |c, g| {
        let e = reps[c];
        let b = over(k.t(g));
        let lift = h.hom(x.p[e], b).into_iter().find(|&f| phi.arr[f] == g).expect("fully faithful");
        class[x.beta(e, lift)]
    });
    action.check(k)?;
    let (pulled, pairs) = pullback_sheaf(h, phi, &action);
    let iso: Vec<usize> = (0..x.len()).map(|e| pairs.iter().position(|&p| p == (x.p[e], class[e])).unwrap()).collect();
    let mut seen = iso.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != pulled.len() || !is_equivariant(h, x, &pulled, &iso) {
        return Err("descended sheaf does not pull back to the input".into());
    }
    Ok(Descent { action, iso })
}

/// [`descend_action`] on discrete opfibrations.
pub fn descend_dofib(
    h: &FiniteCategory,
    k: &FiniteCategory,
    phi: &InternalFunctor,
    x: &DiscreteOpfibration,
) -> Result<(DiscreteOpfibration, Vec<usize>), String> {
    let a = dofib_to_action(x, h)?;
    let d = descend_action(h, k, phi, &a)?;
    Ok((action_to_dofib(&d.action, k)?, d.iso))
}
