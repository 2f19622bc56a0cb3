//! Internal categories in finite sets.
//!
//! Objects and arrows are `0..n`. Composition is diagrammatic: `m(f, g)` is
//! "`f` then `g`" and is defined exactly when `t(f) = s(g)`.

mod ana;
mod core_groupoid;
mod descent;
mod functor;
pub mod random;
mod sheaf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ana::{compose_anafunctors, two_cell_canonical, two_cell_frame, Anafunctor, TwoCellDatum};
pub use core_groupoid::{core, Core};
pub use descent::{descend_action, descend_dofib, ff_pullback, pullback_categories, Descent, Pullback};
pub use functor::{
    enumerate_functors, enumerate_transformations, is_fully_faithful, is_surjective_on_objects, InternalFunctor,
    InternalTransformation,
};
pub use sheaf::{
    action_iso, action_to_dofib, dofib_to_action, enumerate_equivariant_maps, is_equivariant, pullback_sheaf,
    sh_of_transformation, DiscreteOpfibration, SheafAction,
};

/// Raw tables, as read from JSON or built by hand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryTables {
    pub objects: usize,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    pub identity: Vec<usize>,
    /// `compose[f][g]`, defined on composable pairs.
    pub compose: Vec<Vec<Option<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub equation: &'static str,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("malformed tables: {0}")]
    Shape(String),
    #[error("violated: {}", .0.iter().map(|v| format!("{} at {:?}", v.equation, v.witness)).collect::<Vec<_>>().join("; "))]
    Equations(Vec<Violation>),
}

pub const SOURCE_UNIT: &str = "s∘e = id";
pub const TARGET_UNIT: &str = "t∘e = id";
pub const COMPOSABLE: &str = "m defined exactly on composable pairs";
pub const SOURCE_COMPOSE: &str = "s∘m = s∘π₁";
pub const TARGET_COMPOSE: &str = "t∘m = t∘π₂";
pub const ASSOCIATIVE: &str = "associativity";
pub const LEFT_UNIT: &str = "m∘(e∘s, id) = id";
pub const RIGHT_UNIT: &str = "m∘(id, e∘t) = id";
pub const SOURCE_INVERSE: &str = "s∘i = t";
pub const TARGET_INVERSE: &str = "t∘i = s";
pub const LEFT_INVERSE: &str = "m∘(id, i) = e∘s";
pub const RIGHT_INVERSE: &str = "m∘(i, id) = e∘t";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteCategory {
    tables: CategoryTables,
}

fn shape(tables: &CategoryTables) -> Result<(), CategoryError> {
    let (n, a) = (tables.objects, tables.source.len());
    let bad = |m: &str| Err(CategoryError::Shape(m.to_string()));
    if tables.target.len() != a || tables.compose.len() != a || tables.identity.len() != n {
        return bad("table lengths disagree");
    }
    if tables.source.iter().chain(&tables.target).any(|&x| x >= n) {
        return bad("source or target out of range");
    }
    if tables.identity.iter().any(|&f| f >= a) {
        return bad("identity out of range");
    }
    if tables.compose.iter().any(|row| row.len() != a || row.iter().flatten().any(|&h| h >= a)) {
        return bad("composition table out of range");
    }
    if let Some(inv) = &tables.inverse {
        if inv.len() != a || inv.iter().any(|&g| g >= a) {
            return bad("inverse table out of range");
        }
    }
    Ok(())
}

/// Validates raw tables, reporting one witness for every violated equation.
pub fn check_category(tables: CategoryTables) -> Result<FiniteCategory, CategoryError> {
    shape(&tables)?;
    let t = &tables;
    let arrows = t.source.len();
    let mut found: Vec<Violation> = Vec::new();
    let mut note = |equation: &'static str, witness: Vec<usize>| {
        if !found.iter().any(|v| v.equation == equation) {
            found.push(Violation { equation, witness });
        }
    };
    for x in 0..t.objects {
        if t.source[t.identity[x]] != x {
            note(SOURCE_UNIT, vec![x]);
        }
        if t.target[t.identity[x]] != x {
            note(TARGET_UNIT, vec![x]);
        }
    }
    for f in 0..arrows {
        for g in 0..arrows {
            let composable = t.target[f] == t.source[g];
            match t.compose[f][g] {
                Some(h) => {
                    if !composable {
                        note(COMPOSABLE, vec![f, g]);
                        continue;
                    }
                    if t.source[h] != t.source[f] {
                        note(SOURCE_COMPOSE, vec![f, g]);
                    }
                    if t.target[h] != t.target[g] {
                        note(TARGET_COMPOSE, vec![f, g]);
                    }
                }
                None if composable => note(COMPOSABLE, vec![f, g]),
                None => {}
            }
        }
    }
    for f in 0..arrows {
        if t.compose[t.identity[t.source[f]]][f] != Some(f) {
            note(LEFT_UNIT, vec![f]);
        }
        if t.compose[f][t.identity[t.target[f]]] != Some(f) {
            note(RIGHT_UNIT, vec![f]);
        }
        for g in 0..arrows {
            let Some(fg) = t.compose[f][g] else { continue };
            for h in 0..arrows {
                let Some(gh) = t.compose[g][h] else { continue };
                if t.compose[fg][h] != t.compose[f][gh] {
                    note(ASSOCIATIVE, vec![f, g, h]);
                }
            }
        }
    }
    if let Some(inv) = &t.inverse {
        for f in 0..arrows {
            let g = inv[f];
            if t.source[g] != t.target[f] {
                note(SOURCE_INVERSE, vec![f]);
            }
            if t.target[g] != t.source[f] {
                note(TARGET_INVERSE, vec![f]);
            }
            if t.compose[f][g] != Some(t.identity[t.source[f]]) {
                note(LEFT_INVERSE, vec![f]);
            }
            if t.compose[g][f] != Some(t.identity[t.target[f]]) {
                note(RIGHT_INVERSE, vec![f]);
            }
        }
    }
    if found.is_empty() {
        Ok(FiniteCategory { tables })
    } else {
        Err(CategoryError::Equations(found))
    }
}

impl FiniteCategory {
    /// Builds a category from arrow endpoints, identities and a composition
    /// function; the result is validated.
    pub fn from_parts(
        objects: usize,
        source: Vec<usize>,
        target: Vec<usize>,
        identity: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, CategoryError> {
        let a = source.len();
        let table = (0..a).map(|f| (0..a).map(|g| (target[f] == source[g]).then(|| compose(f, g))).collect()).collect();
        let tables = CategoryTables { objects, source, target, identity, compose: table, inverse: None };
        check_category(tables).map(FiniteCategory::with_inverses)
    }

    pub fn tables(&self) -> &CategoryTables {
        &self.tables
    }

    pub fn objects(&self) -> usize {
        self.tables.objects
    }

    pub fn arrows(&self) -> usize {
        self.tables.source.len()
    }

    pub fn s(&self, f: usize) -> usize {
        self.tables.source[f]
    }

    pub fn t(&self, f: usize) -> usize {
        self.tables.target[f]
    }

    pub fn e(&self, x: usize) -> usize {
        self.tables.identity[x]
    }

    pub fn m(&self, f: usize, g: usize) -> Option<usize> {
        self.tables.compose[f][g]
    }

    /// `f` then `g`; panics unless composable.
    pub fn comp(&self, f: usize, g: usize) -> usize {
        self.tables.compose[f][g].expect("composable arrows")
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.e(self.s(f)) == f
    }

    /// The two-sided inverse of `f`, if it has one.
    pub fn inverse_of(&self, f: usize) -> Option<usize> {
        if let Some(inv) = &self.tables.inverse {
            return Some(inv[f]);
        }
        self.hom(self.t(f), self.s(f))
            .into_iter()
            .find(|&g| self.comp(f, g) == self.e(self.s(f)) && self.comp(g, f) == self.e(self.t(f)))
    }

    pub fn is_groupoid(&self) -> bool {
        (0..self.arrows()).all(|f| self.inverse_of(f).is_some())
    }

    /// Records the inverse table when every arrow is invertible.
    pub fn with_inverses(mut self) -> Self {
        if self.tables.inverse.is_none() {
            let inv: Option<Vec<usize>> = (0..self.arrows()).map(|f| self.inverse_of(f)).collect();
            self.tables.inverse = inv;
        }
        self
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.arrows()).filter(|&f| self.s(f) == x && self.t(f) == y).collect()
    }

    pub fn arrows_from(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows()).filter(move |&f| self.s(f) == x)
    }

    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_parts(n, (0..n).collect(), (0..n).collect(), (0..n).collect(), |f, _| f).expect("discrete category")
    }

    /// One arrow between each ordered pair; arrow `x·n + y` goes `x → y`.
    pub fn codiscrete(n: usize) -> Self {
        let source = (0..n * n).map(|f| f / n).collect();
        let target = (0..n * n).map(|f| f % n).collect();
        let identity = (0..n).map(|x| x * n + x).collect();
        Self::from_parts(n, source, target, identity, |f, g| (f / n) * n + g % n).expect("codiscrete category")
    }

    /// `0 → 1` with one non-identity arrow (arrow 2).
    pub fn free_arrow() -> Self {
        Self::from_parts(2, vec![0, 1, 0], vec![0, 1, 1], vec![0, 1], |f, g| if f == 2 || g == 2 { 2 } else { f })
            .expect("free arrow")
    }

    /// The cyclic group of order `n` as a one-object category.
    pub fn cyclic_group(n: usize) -> Self {
        assert!(n > 0);
        Self::from_parts(1, vec![0; n], vec![0; n], vec![0], |f, g| (f + g) % n).expect("cyclic group")
    }

    /// The preorder on `0..n` generated by `edges` (reflexive-transitive
    /// closure), one arrow per related pair.
    pub fn preorder(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut leq = vec![vec![false; n]; n];
        for x in 0..n {
            leq[x][x] = true;
        }
        for &(x, y) in edges {
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| leq[x][y]).collect();
        let index = |x: usize, y: usize| pairs.iter().position(|&p| p == (x, y)).unwrap();
        Self::from_parts(
            n,
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
            (0..n).map(|x| index(x, x)).collect(),
            |f, g| index(pairs[f].0, pairs[g].1),
        )
        .expect("preorder")
    }

    /// Objects `(x, y)` numbered `x·|b| + y`, arrows likewise.
    pub fn product(a: &Self, b: &Self) -> Self {
        let (nb, ab) = (b.objects(), b.arrows());
        let arrows = a.arrows() * ab;
        Self::from_parts(
            a.objects() * nb,
            (0..arrows).map(|f| a.s(f / ab) * nb + b.s(f % ab)).collect(),
            (0..arrows).map(|f| a.t(f / ab) * nb + b.t(f % ab)).collect(),
            (0..a.objects() * nb).map(|x| a.e(x / nb) * ab + b.e(x % nb)).collect(),
            |f, g| a.comp(f / ab, g / ab) * ab + b.comp(f % ab, g % ab),
        )
        .expect("product category")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_categories_validate() {
        assert_eq!(FiniteCategory::terminal().arrows(), 1);
        let c = FiniteCategory::codiscrete(2);
        assert_eq!(c.arrows(), 4);
        assert!(c.is_groupoid());
        assert!(c.tables().inverse.is_some());
        assert!(!FiniteCategory::free_arrow().is_groupoid());
        assert!(FiniteCategory::cyclic_group(3).is_groupoid());
        assert_eq!(FiniteCategory::preorder(3, &[(0, 1), (1, 2)]).arrows(), 6);
        assert_eq!(FiniteCategory::product(&FiniteCategory::free_arrow(), &FiniteCategory::codiscrete(2)).arrows(), 12);
    }

    #[test]
    fn mis_sourced_composite_is_named() {
        let mut t = FiniteCategory::free_arrow().tables().clone();
        t.compose[0][2] = Some(1);
        let Err(CategoryError::Equations(vs)) = check_category(t) else { panic!("accepted") };
        let v = vs.iter().find(|v| v.equation == SOURCE_COMPOSE).expect("s∘m reported");
        assert_eq!(v.witness, vec![0, 2]);
    }

    #[test]
    fn broken_inverse_is_named() {
        let mut t = FiniteCategory::codiscrete(2).tables().clone();
        t.inverse.as_mut().unwrap()[1] = 1;
        let Err(CategoryError::Equations(vs)) = check_category(t) else { panic!("accepted") };
        assert!(vs.iter().any(|v| v.equation == SOURCE_INVERSE));
    }
}
