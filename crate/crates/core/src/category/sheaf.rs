//! Sheaves on a finite category as actions, and as discrete opfibrations.

use serde::{Deserialize, Serialize};

use super::{FiniteCategory, InternalFunctor, InternalTransformation};

/// A bundle `p: A → H₀` with `β(x, g)` defined when `p(x) = s(g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SheafAction {
    pub p: Vec<usize>,
    pub act: Vec<Vec<Option<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteOpfibration {
    pub total: FiniteCategory,
    pub functor: InternalFunctor,
}

impl SheafAction {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn beta(&self, x: usize, g: usize) -> usize {
        self.act[x][g].expect("action defined on p(x) = s(g)")
    }

    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.p[x] == y).collect()
    }

    pub fn empty(h: &FiniteCategory) -> Self {
        let _ = h;
        SheafAction { p: Vec::new(), act: Vec::new() }
    }

    /// Builds the table from a partial action function.
    pub fn from_fn(h: &FiniteCategory, p: Vec<usize>, beta: impl Fn(usize, usize) -> usize) -> Self {
        let act =
            (0..p.len()).map(|x| (0..h.arrows()).map(|g| (h.s(g) == p[x]).then(|| beta(x, g))).collect()).collect();
        SheafAction { p, act }
    }

    /// The first failed action law, if any.
    pub fn check(&self, h: &FiniteCategory) -> Result<(), String> {
        if self.act.len() != self.p.len() || self.act.iter().any(|r| r.len() != h.arrows()) {
            return Err("action table has the wrong size".into());
        }
        if self.p.iter().any(|&y| y >= h.objects()) {
            return Err("bundle map out of range".into());
        }
        for x in 0..self.len() {
            for g in 0..h.arrows() {
                match self.act[x][g] {
                    Some(y) if h.s(g) != self.p[x] => {
                        return Err(format!("β defined off p(x) = s(g) at ({x}, {g}) → {y}"))
                    }
                    None if h.s(g) == self.p[x] => return Err(format!("β undefined at ({x}, {g})")),
                    Some(y) if y >= self.len() => return Err(format!("β out of range at ({x}, {g})")),
                    _ => {}
                }
            }
        }
        for x in 0..self.len() {
            if self.beta(x, h.e(self.p[x])) != x {
                return Err(format!("β(x, e p(x)) = x fails at {x}"));
            }
            for g in h.arrows_from(self.p[x]) {
                let y = self.beta(x, g);
                if self.p[y] != h.t(g) {
                    return Err(format!("p(β(x, g)) = t(g) fails at ({x}, {g})"));
                }
                for k in h.arrows_from(h.t(g)) {
                    if self.beta(y, k) != self.beta(x, h.comp(g, k)) {
                        return Err(format!("β(β(x, g), h) = β(x, m(g, h)) fails at ({x}, {g}, {k})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// The covariant representable at `x`: arrows out of `x`, acted on by
    /// postcomposition.
    pub fn representable(h: &FiniteCategory, x: usize) -> Self {
        let elems: Vec<usize> = h.arrows_from(x).collect();
        let index = |f: usize| elems.iter().position(|&e| e == f).unwrap();
        SheafAction::from_fn(h, elems.iter().map(|&f| h.t(f)).collect(), |i, g| index(h.comp(elems[i], g)))
    }

    pub fn coproduct(h: &FiniteCategory, parts: &[SheafAction]) -> Self {
        let mut p = Vec::new();
        let mut offsets = Vec::new();
        for a in parts {
            offsets.push(p.len());
            p.extend(&a.p);
        }
        let owner = |x: usize| offsets.iter().rposition(|&o| o <= x).unwrap();
        SheafAction::from_fn(h, p, |x, g| {
            let k = owner(x);
            offsets[k] + parts[k].beta(x - offsets[k], g)
        })
    }

    /// The quotient by the smallest action-stable equivalence identifying
    /// each given pair; pairs in different fibers are skipped.
    pub fn quotient(&self, h: &FiniteCategory, merges: &[(usize, usize)]) -> (Self, Vec<usize>) {
        let mut uf = UnionFind::new(self.len());
        let mut pending: Vec<(usize, usize)> =
            merges.iter().copied().filter(|&(a, b)| self.p[a] == self.p[b]).collect();
        while let Some((a, b)) = pending.pop() {
            if uf.union(a, b) {
                for g in h.arrows_from(self.p[a]) {
                    pending.push((self.beta(a, g), self.beta(b, g)));
                }
            }
        }
        let (class, reps) = uf.classes();
        let q = SheafAction::from_fn(h, reps.iter().map(|&r| self.p[r]).collect(), |c, g| class[self.beta(reps[c], g)]);
        (q, class)
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Class index of each element (classes numbered by least member) and
    /// the least member of each class.
    pub(crate) fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut reps = Vec::new();
        let mut class = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if r == x {
                reps.push(x);
            }
            class[x] = reps.iter().position(|&q| q == r).unwrap();
        }
        (class, reps)
    }
}

/// Total category with arrows `(x, g)`, `p(x) = s(g)`, going `x → β(x, g)`.
pub fn action_to_dofib(a: &SheafAction, h: &FiniteCategory) -> Result<DiscreteOpfibration, String> {
    a.check(h)?;
    let pairs: Vec<(usize, usize)> = (0..a.len()).flat_map(|x| h.arrows_from(a.p[x]).map(move |g| (x, g))).collect();
    let index = |x: usize, g: usize| pairs.iter().position(|&p| p == (x, g)).unwrap();
    let total = FiniteCategory::from_parts(
        a.len(),
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|&(x, g)| a.beta(x, g)).collect(),
        (0..a.len()).map(|x| index(x, h.e(a.p[x]))).collect(),
        |f, k| index(pairs[f].0, h.comp(pairs[f].1, pairs[k].1)),
    )
    .map_err(|e| e.to_string())?;
    let functor = InternalFunctor { obj: a.p.clone(), arr: pairs.iter().map(|p| p.1).collect() };
    Ok(DiscreteOpfibration { total, functor })
}

impl DiscreteOpfibration {
    /// Unique lift of `g` starting at `x`, when the lifting square is a
    /// pullback there.
    fn lift(&self, x: usize, g: usize) -> Result<usize, String> {
        let lifts: Vec<usize> = self.total.arrows_from(x).filter(|&f| self.functor.arr[f] == g).collect();
        match lifts.as_slice() {
            [f] => Ok(*f),
            [] => Err(format!("no lift of arrow {g} at {x}")),
            _ => Err(format!("several lifts of arrow {g} at {x}")),
        }
    }

    pub fn check(&self, h: &FiniteCategory) -> Result<(), String> {
        self.functor.check(&self.total, h)?;
        for x in 0..self.total.objects() {
            for g in h.arrows_from(self.functor.obj[x]) {
                self.lift(x, g)?;
            }
        }
        Ok(())
    }
}

pub fn dofib_to_action(d: &DiscreteOpfibration, h: &FiniteCategory) -> Result<SheafAction, String> {
    d.check(h)?;
    let mut lifts = vec![vec![None; h.arrows()]; d.total.objects()];
    for (x, row) in lifts.iter_mut().enumerate() {
        for g in h.arrows_from(d.functor.obj[x]) {
            row[g] = Some(d.total.t(d.lift(x, g)?));
        }
    }
    Ok(SheafAction { p: d.functor.obj.clone(), act: lifts })
}

/// `Φ*A`: elements `(x, y)` with `Φ₀x = p(y)`, acted on by
/// `β′((x, y), h) = (t h, β(y, Φ₁h))`. Returns the pairs alongside.
pub fn pullback_sheaf(
    h: &FiniteCategory,
    phi: &InternalFunctor,
    a: &SheafAction,
) -> (SheafAction, Vec<(usize, usize)>) {
    let pairs: Vec<(usize, usize)> = (0..h.objects())
        .flat_map(|x| (0..a.len()).filter(move |&y| phi.obj[x] == a.p[y]).map(move |y| (x, y)))
        .collect();
    let index = |x: usize, y: usize| pairs.iter().position(|&p| p == (x, y)).unwrap();
    let act = SheafAction::from_fn(h, pairs.iter().map(|p| p.0).collect(), |e, k| {
        let (_, y) = pairs[e];
        index(h.t(k), a.beta(y, phi.arr[k]))
    });
    (act, pairs)
}

/// For `α: Φ ⇒ Ψ` the map `Φ*A → Ψ*A`, `(x, y) ↦ (x, β(y, α(x)))`.
pub fn sh_of_transformation(
    h: &FiniteCategory,
    phi: &InternalFunctor,
    psi: &InternalFunctor,
    alpha: &InternalTransformation,
    a: &SheafAction,
) -> Vec<usize> {
    let (_, from) = pullback_sheaf(h, phi, a);
    let (_, to) = pullback_sheaf(h, psi, a);
    from.iter()
        .map(|&(x, y)| {
            let image = (x, a.beta(y, alpha.components[x]));
            to.iter().position(|&q| q == image).expect("image lies over x")
        })
        .collect()
}

/// Whether `map: A → B` commutes with the bundle maps and actions.
pub fn is_equivariant(h: &FiniteCategory, a: &SheafAction, b: &SheafAction, map: &[usize]) -> bool {
    map.len() == a.len()
        && (0..a.len())
            .all(|x| b.p[map[x]] == a.p[x] && h.arrows_from(a.p[x]).all(|g| map[a.beta(x, g)] == b.beta(map[x], g)))
}

/// An equivariant bijection `A → B`, found by backtracking with fibers
/// matched by size and forced images propagated along the action.
pub fn action_iso(h: &FiniteCategory, a: &SheafAction, b: &SheafAction) -> Option<Vec<usize>> {
    if a.len() != b.len() || (0..h.objects()).any(|y| a.fiber(y).len() != b.fiber(y).len()) {
        return None;
    }
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    iso_search(h, a, b, &mut map, &mut used).then_some(map)
}

fn assign(
    h: &FiniteCategory,
    a: &SheafAction,
    b: &SheafAction,
    map: &mut [usize],
    used: &mut [bool],
    x: usize,
    v: usize,
) -> bool {
    let mut stack = vec![(x, v)];
    while let Some((x, v)) = stack.pop() {
        if map[x] != usize::MAX {
            if map[x] != v {
                return false;
            }
            continue;
        }
        if used[v] || a.p[x] != b.p[v] {
            return false;
        }
        map[x] = v;
        used[v] = true;
        for g in h.arrows_from(a.p[x]) {
            stack.push((a.beta(x, g), b.beta(v, g)));
        }
    }
    true
}

fn iso_search(
    h: &FiniteCategory,
    a: &SheafAction,
    b: &SheafAction,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(x) = map.iter().position(|&v| v == usize::MAX) else {
        return true;
    };
    for v in b.fiber(a.p[x]) {
        if used[v] {
            continue;
        }
        let (saved_map, saved_used) = (map.clone(), used.clone());
        if assign(h, a, b, map, used, x, v) && iso_search(h, a, b, map, used) {
            return true;
        }
        *map = saved_map;
        *used = saved_used;
    }
    false
}

/// Every equivariant map `A → B`, by backtracking with forced images
/// propagated along the action.
pub fn enumerate_equivariant_maps(h: &FiniteCategory, a: &SheafAction, b: &SheafAction) -> Vec<Vec<usize>> {
    fn force(h: &FiniteCategory, a: &SheafAction, b: &SheafAction, map: &mut [usize], x: usize, v: usize) -> bool {
        let mut stack = vec![(x, v)];
        while let Some((x, v)) = stack.pop() {
            if map[x] != usize::MAX {
                if map[x] != v {
                    return false;
                }
                continue;
            }
            if a.p[x] != b.p[v] {
                return false;
            }
            map[x] = v;
            for g in h.arrows_from(a.p[x]) {
                stack.push((a.beta(x, g), b.beta(v, g)));
            }
        }
        true
    }
    fn go(h: &FiniteCategory, a: &SheafAction, b: &SheafAction, map: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(x) = map.iter().position(|&v| v == usize::MAX) else {
            out.push(map.clone());
            return;
        };
        for v in b.fiber(a.p[x]) {
            let saved = map.clone();
            if force(h, a, b, map, x, v) {
                go(h, a, b, map, out);
            }
            *map = saved;
        }
    }
    let mut out = Vec::new();
    go(h, a, b, &mut vec![usize::MAX; a.len()], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crossing() -> (FiniteCategory, SheafAction) {
        // Fibers {0, 1} over 0 and {2, 3} over 1; the arrow 0 → 1 sends
        // 0 ↦ 3, 1 ↦ 2.
        let h = FiniteCategory::codiscrete(2);
        let swap = [3, 2, 1, 0];
        let a = SheafAction::from_fn(&h, vec![0, 0, 1, 1], |x, g| if h.is_identity(g) { x } else { swap[x] });
        (h, a)
    }

    #[test]
    fn crossing_action_gives_eight_arrows() {
        let (h, a) = crossing();
        assert!(a.check(&h).is_ok());
        let d = action_to_dofib(&a, &h).unwrap();
        assert_eq!(d.total.objects(), 4);
        assert_eq!(d.total.arrows(), 8);
        assert_eq!(dofib_to_action(&d, &h).unwrap(), a);
    }

    #[test]
    fn trivial_action_is_identity() {
        let h = FiniteCategory::free_arrow();
        let a = SheafAction::representable(&h, 1);
        assert_eq!(a.len(), 1);
        let d = action_to_dofib(&a, &h).unwrap();
        assert_eq!(d.total.arrows(), 1);
        let whole = SheafAction::from_fn(&h, vec![0, 1], |_, g| h.t(g));
        let d = action_to_dofib(&whole, &h).unwrap();
        // An isomorphism of categories: bijective on objects and arrows.
        assert_eq!(d.functor.obj, vec![0, 1]);
        let mut arr = d.functor.arr.clone();
        arr.sort_unstable();
        assert_eq!(arr, vec![0, 1, 2]);
    }

    #[test]
    fn pullback_along_identity() {
        let (h, a) = crossing();
        let (b, _) = pullback_sheaf(&h, &InternalFunctor::identity(&h), &a);
        assert_eq!(b, a);
        let id = InternalTransformation::identity(&h, &InternalFunctor::identity(&h));
        let map = sh_of_transformation(&h, &InternalFunctor::identity(&h), &InternalFunctor::identity(&h), &id, &a);
        assert_eq!(map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn quotient_and_iso() {
        let h = FiniteCategory::cyclic_group(2);
        let r = SheafAction::representable(&h, 0);
        let two = SheafAction::coproduct(&h, &[r.clone(), r.clone()]);
        let (q, _) = two.quotient(&h, &[(0, 2)]);
        assert!(q.check(&h).is_ok());
        assert!(action_iso(&h, &q, &r).is_some());
        let (triv, _) = r.quotient(&h, &[(0, 1)]);
        assert_eq!(triv.len(), 1);
        assert!(action_iso(&h, &triv, &r).is_none());
    }
}
