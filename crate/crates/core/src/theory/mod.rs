//! Relational geometric theories and their `.gth` surface syntax.
//!
//! ```text
//! theory Graph {
//!   sort V;
//!   rel E(V, V);
//!   axiom [x:V, y:V]: E(x, y) |- E(y, x);
//!   orientation LH;
//! }
//! ```

mod parse;
mod print;
mod singlesort;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use parse::parse_theory;
pub use print::{print_formula, print_theory};
pub use singlesort::singlesort;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelSymbol {
    pub name: String,
    pub arity: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub relations: Vec<RelSymbol>,
}

impl Signature {
    pub fn relation(&self, name: &str) -> Option<&RelSymbol> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.iter().any(|s| s == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Rel { name: String, args: Vec<String> },
    Eq { sort: String, lhs: String, rhs: String },
    True,
    False,
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists { var: String, sort: String, body: Box<Formula> },
}

impl Formula {
    pub fn rel(name: &str, args: &[&str]) -> Self {
        Formula::Rel { name: name.into(), args: args.iter().map(|a| a.to_string()).collect() }
    }

    pub fn eq(sort: &str, lhs: &str, rhs: &str) -> Self {
        Formula::Eq { sort: sort.into(), lhs: lhs.into(), rhs: rhs.into() }
    }

    pub fn exists(var: &str, sort: &str, body: Formula) -> Self {
        Formula::Exists { var: var.into(), sort: sort.into(), body: Box::new(body) }
    }

    /// Renames sorts and relation symbols.
    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> Formula {
        match self {
            Formula::Rel { name, args } => Formula::Rel { name: f(name), args: args.clone() },
            Formula::Eq { sort, lhs, rhs } => Formula::Eq { sort: f(sort), lhs: lhs.clone(), rhs: rhs.clone() },
            Formula::True | Formula::False => self.clone(),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| g.rename(f)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| g.rename(f)).collect()),
            Formula::Exists { var, sort, body } => {
                Formula::Exists { var: var.clone(), sort: f(sort), body: Box::new(body.rename(f)) }
            }
        }
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Formula::Rel { args, .. } => args.iter().for_each(|a| note(a, bound)),
            Formula::Eq { lhs, rhs, .. } => {
                note(lhs, bound);
                note(rhs, bound);
            }
            Formula::True | Formula::False => {}
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Exists { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

/// `[context]: lhs ⊢ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Axiom {
    pub context: Vec<(String, String)>,
    pub lhs: Formula,
    pub rhs: Formula,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoryOrientation {
    /// Carriers are local homeomorphisms; parameters stand for ℕ.
    LH,
    /// Carriers are proper separated bundles; parameters stand for Cantor space.
    PS,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Axiom>,
    pub orientation: TheoryOrientation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TheoryErrorKind {
    Syntax(String),
    UnknownSort(String),
    UnknownRelation(String),
    UnboundVariable(String),
    ArityMismatch { relation: String, expected: usize, found: usize },
    SortMismatch { var: String, expected: String, found: String },
    Duplicate(String),
}

impl fmt::Display for TheoryErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            TheoryErrorKind::UnknownSort(s) => write!(f, "unknown sort `{s}`"),
            TheoryErrorKind::UnknownRelation(r) => write!(f, "unknown relation `{r}`"),
            TheoryErrorKind::UnboundVariable(v) => write!(f, "unbound variable `{v}`"),
            TheoryErrorKind::ArityMismatch { relation, expected, found } => {
                write!(f, "relation `{relation}` takes {expected} arguments, found {found}")
            }
            TheoryErrorKind::SortMismatch { var, expected, found } => {
                write!(f, "variable `{var}` has sort `{found}` where `{expected}` is required")
            }
            TheoryErrorKind::Duplicate(n) => write!(f, "duplicate declaration of `{n}`"),
        }
    }
}

/// A validation or syntax failure, located when it comes from source text.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct TheoryError {
    pub line: usize,
    pub col: usize,
    pub kind: TheoryErrorKind,
}

impl fmt::Display for TheoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}:{}: {}", self.line, self.col, self.kind)
        }
    }
}

impl TheoryError {
    pub fn unlocated(kind: TheoryErrorKind) -> Self {
        TheoryError { line: 0, col: 0, kind }
    }
}

impl Theory {
    pub fn new(name: &str, sorts: &[&str]) -> Self {
        Theory {
            name: name.into(),
            signature: Signature { sorts: sorts.iter().map(|s| s.to_string()).collect(), relations: Vec::new() },
            axioms: Vec::new(),
            orientation: TheoryOrientation::LH,
        }
    }

    pub fn with_relation(mut self, name: &str, arity: &[&str]) -> Self {
        self.signature
            .relations
            .push(RelSymbol { name: name.into(), arity: arity.iter().map(|s| s.to_string()).collect() });
        self
    }

    pub fn with_axiom(mut self, context: &[(&str, &str)], lhs: Formula, rhs: Formula) -> Self {
        let context = context.iter().map(|(v, s)| (v.to_string(), s.to_string())).collect();
        self.axioms.push(Axiom { context, lhs, rhs });
        self
    }

    pub fn with_orientation(mut self, orientation: TheoryOrientation) -> Self {
        self.orientation = orientation;
        self
    }

    /// Sorts and relations of both, renamed with `_1`/`_2` where the names
    /// collide, and both axiom lists.
    pub fn disjoint_union(&self, other: &Theory) -> Theory {
        let (a, b) = (&self.signature, &other.signature);
        let clash = |x: &String, ys: &[String]| ys.contains(x);
        let a_names: Vec<String> = a.sorts.iter().chain(a.relations.iter().map(|r| &r.name)).cloned().collect();
        let b_names: Vec<String> = b.sorts.iter().chain(b.relations.iter().map(|r| &r.name)).cloned().collect();
        let left = |x: &str| if clash(&x.to_string(), &b_names) { format!("{x}_1") } else { x.to_string() };
        let right = |x: &str| if clash(&x.to_string(), &a_names) { format!("{x}_2") } else { x.to_string() };
        let mut out = Theory::new(&format!("{}+{}", self.name, other.name), &[]);
        out.orientation = self.orientation;
        for (t, f) in [(self, &left as &dyn Fn(&str) -> String), (other, &right)] {
            out.signature.sorts.extend(t.signature.sorts.iter().map(|s| f(s)));
            out.signature.relations.extend(
                t.signature
                    .relations
                    .iter()
                    .map(|r| RelSymbol { name: f(&r.name), arity: r.arity.iter().map(|s| f(s)).collect() }),
            );
            out.axioms.extend(t.axioms.iter().map(|ax| Axiom {
                context: ax.context.iter().map(|(v, s)| (v.clone(), f(s))).collect(),
                lhs: ax.lhs.rename(f),
                rhs: ax.rhs.rename(f),
            }));
        }
        out
    }

    pub fn validate(&self) -> Result<(), TheoryErrorKind> {
        validate_signature(&self.signature)?;
        for ax in &self.axioms {
            validate_axiom(&self.signature, ax)?;
        }
        Ok(())
    }
}

pub(crate) fn validate_signature(sig: &Signature) -> Result<(), TheoryErrorKind> {
    let mut seen = BTreeSet::new();
    for s in &sig.sorts {
        if !seen.insert(s) {
            return Err(TheoryErrorKind::Duplicate(s.clone()));
        }
    }
    let mut rels = BTreeSet::new();
    for r in &sig.relations {
        if !rels.insert(&r.name) {
            return Err(TheoryErrorKind::Duplicate(r.name.clone()));
        }
        if let Some(s) = r.arity.iter().find(|s| !sig.has_sort(s)) {
            return Err(TheoryErrorKind::UnknownSort(s.clone()));
        }
    }
    Ok(())
}

pub(crate) fn validate_axiom(sig: &Signature, ax: &Axiom) -> Result<(), TheoryErrorKind> {
    let mut env = BTreeMap::new();
    for (v, s) in &ax.context {
        if !sig.has_sort(s) {
            return Err(TheoryErrorKind::UnknownSort(s.clone()));
        }
        if env.insert(v.clone(), s.clone()).is_some() {
            return Err(TheoryErrorKind::Duplicate(v.clone()));
        }
    }
    check_formula(sig, &mut env, &ax.lhs)?;
    check_formula(sig, &mut env, &ax.rhs)
}

fn expect_sort(env: &BTreeMap<String, String>, var: &str, sort: &str) -> Result<(), TheoryErrorKind> {
    match env.get(var) {
        None => Err(TheoryErrorKind::UnboundVariable(var.into())),
        Some(s) if s != sort => {
            Err(TheoryErrorKind::SortMismatch { var: var.into(), expected: sort.into(), found: s.clone() })
        }
        Some(_) => Ok(()),
    }
}

pub(crate) fn check_formula(
    sig: &Signature,
    env: &mut BTreeMap<String, String>,
    f: &Formula,
) -> Result<(), TheoryErrorKind> {
    match f {
        Formula::Rel { name, args } => {
            let r = sig.relation(name).ok_or_else(|| TheoryErrorKind::UnknownRelation(name.clone()))?;
            if r.arity.len() != args.len() {
                return Err(TheoryErrorKind::ArityMismatch {
                    relation: name.clone(),
                    expected: r.arity.len(),
                    found: args.len(),
                });
            }
            for (a, s) in args.iter().zip(&r.arity) {
                expect_sort(env, a, s)?;
            }
            Ok(())
        }
        Formula::Eq { sort, lhs, rhs } => {
            if sort.is_empty() {
                return Err(TheoryErrorKind::UnboundVariable(lhs.clone()));
            }
            if !sig.has_sort(sort) {
                return Err(TheoryErrorKind::UnknownSort(sort.clone()));
            }
            expect_sort(env, lhs, sort)?;
            expect_sort(env, rhs, sort)
        }
        Formula::True | Formula::False => Ok(()),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().try_for_each(|g| check_formula(sig, env, g)),
        Formula::Exists { var, sort, body } => {
            if !sig.has_sort(sort) {
                return Err(TheoryErrorKind::UnknownSort(sort.clone()));
            }
            let shadowed = env.insert(var.clone(), sort.clone());
            let r = check_formula(sig, env, body);
            match shadowed {
                Some(s) => env.insert(var.clone(), s),
                None => env.remove(var),
            };
            r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_catches_bad_axioms() {
        let t = Theory::new("G", &["V"]).with_relation("E", &["V", "V"]);
        let bad_arity = t.clone().with_axiom(&[("x", "V")], Formula::rel("E", &["x"]), Formula::True);
        assert!(matches!(bad_arity.validate(), Err(TheoryErrorKind::ArityMismatch { .. })));
        let unbound = t.clone().with_axiom(&[("x", "V")], Formula::rel("E", &["x", "y"]), Formula::True);
        assert_eq!(unbound.validate(), Err(TheoryErrorKind::UnboundVariable("y".into())));
        let scoped =
            t.with_axiom(&[("x", "V")], Formula::True, Formula::exists("y", "V", Formula::rel("E", &["x", "y"])));
        assert!(scoped.validate().is_ok());
    }

    #[test]
    fn disjoint_union_renames_clashes() {
        let g = Theory::new("G", &["V"]).with_relation("E", &["V", "V"]).with_axiom(
            &[("x", "V"), ("y", "V")],
            Formula::rel("E", &["x", "y"]),
            Formula::rel("E", &["y", "x"]),
        );
        let o = Theory::new("O", &["X"]);
        let u = g.disjoint_union(&g);
        assert_eq!(u.signature.sorts, ["V_1", "V_2"]);
        assert_eq!(u.signature.relations[1].arity, ["V_2", "V_2"]);
        assert_eq!(u.axioms[1].lhs, Formula::rel("E_2", &["x", "y"]));
        assert!(u.validate().is_ok());
        assert_eq!(g.disjoint_union(&o).signature.sorts, ["V", "X"]);
    }

    #[test]
    fn free_vars_respect_binding() {
        let f = Formula::And(vec![
            Formula::rel("E", &["x", "y"]),
            Formula::exists("y", "V", Formula::rel("E", &["y", "z"])),
        ]);
        assert_eq!(f.free_vars(), ["x", "y", "z"]);
    }
}
