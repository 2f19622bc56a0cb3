//! Homomorphisms between subquotient models: per sort, a function on classes
//! carrying each relation into the corresponding one.

use serde::Serialize;

use super::PerModel;
use crate::theory::Theory;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ModelHom {
    pub maps: Vec<Vec<usize>>,
}

pub fn is_hom(theory: &Theory, m: &PerModel, n: &PerModel, h: &ModelHom) -> bool {
    let sig = &theory.signature;
    let shapes = h.maps.len() == m.sorts.len()
        && h.maps.iter().enumerate().all(|(s, f)| f.len() == m.carrier(s) && f.iter().all(|&c| c < n.carrier(s)));
    shapes
        && sig.relations.iter().enumerate().all(|(r, sym)| {
            m.relations[r].iter().all(|t| {
                let image: Vec<usize> =
                    t.iter().zip(&sym.arity).map(|(&c, s)| h.maps[super::sort_index(sig, s)][c]).collect();
                n.relations[r].contains(&image)
            })
        })
}

/// All homomorphisms `m → n`. There is exactly one out of an empty carrier
/// and none from a nonempty carrier into an empty one.
pub fn enumerate_homs(theory: &Theory, m: &PerModel, n: &PerModel) -> Vec<ModelHom> {
    let sorts = m.sorts.len();
    let mut per_sort: Vec<Vec<Vec<usize>>> = Vec::with_capacity(sorts);
    for s in 0..sorts {
        let (a, b) = (m.carrier(s), n.carrier(s));
        let mut fs = vec![Vec::new()];
        for _ in 0..a {
            fs = fs.into_iter().flat_map(|f: Vec<usize>| (0..b).map(move |c| [f.clone(), vec![c]].concat())).collect();
        }
        per_sort.push(fs);
    }
    let mut out = Vec::new();
    let mut choice = Vec::new();
    fn go(
        theory: &Theory,
        m: &PerModel,
        n: &PerModel,
        per_sort: &[Vec<Vec<usize>>],
        choice: &mut Vec<Vec<usize>>,
        out: &mut Vec<ModelHom>,
    ) {
        if choice.len() == per_sort.len() {
            let h = ModelHom { maps: choice.clone() };
            if is_hom(theory, m, n, &h) {
                out.push(h);
            }
            return;
        }
        for f in &per_sort[choice.len()] {
            choice.push(f.clone());
            go(theory, m, n, per_sort, choice, out);
            choice.pop();
        }
    }
    go(theory, m, n, &per_sort, &mut choice, &mut out);
    out
}

pub fn identity(m: &PerModel) -> ModelHom {
    ModelHom { maps: (0..m.sorts.len()).map(|s| (0..m.carrier(s)).collect()).collect() }
}

/// `f` then `g`.
pub fn compose(f: &ModelHom, g: &ModelHom) -> ModelHom {
    ModelHom { maps: f.maps.iter().zip(&g.maps).map(|(a, b)| a.iter().map(|&c| b[c]).collect()).collect() }
}

/// The inverse function family, when every component is a bijection.
pub fn inverse(f: &ModelHom) -> Option<ModelHom> {
    let mut maps = Vec::new();
    for a in &f.maps {
        let mut inv = vec![usize::MAX; a.len()];
        for (c, &d) in a.iter().enumerate() {
            if d >= a.len() || inv[d] != usize::MAX {
                return None;
            }
            inv[d] = c;
        }
        maps.push(inv);
    }
    Some(ModelHom { maps })
}

/// Homomorphisms with a two-sided inverse homomorphism.
pub fn enumerate_isos(theory: &Theory, m: &PerModel, n: &PerModel) -> Vec<ModelHom> {
    if (0..m.sorts.len()).any(|s| m.carrier(s) != n.carrier(s)) {
        return Vec::new();
    }
    enumerate_homs(theory, m, n).into_iter().filter(|f| inverse(f).is_some_and(|g| is_hom(theory, n, m, &g))).collect()
}

/// Partition of `models` into isomorphism classes, by index.
pub fn iso_classes(theory: &Theory, models: &[PerModel]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, m) in models.iter().enumerate() {
        match classes.iter_mut().find(|c| !enumerate_isos(theory, &models[c[0]], m).is_empty()) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}
