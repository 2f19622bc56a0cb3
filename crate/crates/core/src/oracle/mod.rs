//! Brute-force semantics: subquotient models of a theory on a finite
//! parameter set, their homomorphisms, and the recursive interpretation of
//! formulas. Nothing here consults the generated presentations except
//! [`decode`], which reads points back into models.

mod bundle;
pub mod decode;
mod hom;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bits::BitSet;
use crate::classifier::names::tuples;
use crate::theory::{Formula, Signature, Theory};

pub use bundle::{base_change, enumerate_bundle_homs, transformation_action, BundleHom, BundleModel};
pub use hom::{compose, enumerate_homs, enumerate_isos, identity, inverse, is_hom, iso_classes, ModelHom};

/// A partial equivalence relation on `0..n`, stored as its classes.
///
/// Classes are sorted and ordered by least member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Per {
    pub n: usize,
    pub classes: Vec<Vec<usize>>,
}

impl Per {
    pub fn new(n: usize, mut classes: Vec<Vec<usize>>) -> Self {
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.retain(|c| !c.is_empty());
        classes.sort();
        Per { n, classes }
    }

    pub fn class_of(&self, p: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&p))
    }

    pub fn related(&self, p: usize, q: usize) -> bool {
        self.class_of(p).is_some_and(|c| self.classes[c].contains(&q))
    }

    /// Bit `p·n + q` set iff `p ∼ q`.
    pub fn mask(&self) -> BitSet {
        let n = self.n;
        BitSet::from_indices(n * n, (0..n * n).filter(|&b| self.related(b / n, b % n)))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Every partial equivalence relation on `0..n`, in mask order.
pub fn enumerate_pers(n: usize) -> Vec<Per> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn go(p: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Per>) {
        if p == n {
            out.push(Per::new(n, blocks.clone()));
            return;
        }
        go(p + 1, n, blocks, out);
        for b in 0..blocks.len() {
            blocks[b].push(p);
            go(p + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![p]);
        go(p + 1, n, blocks, out);
        blocks.pop();
    }
    go(0, n, &mut blocks, &mut out);
    out.sort_by_key(Per::mask);
    out
}

/// A model whose carriers are subquotients of the parameters. Relations are
/// sets of tuples of class indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PerModel {
    pub sorts: Vec<Per>,
    pub relations: Vec<BTreeSet<Vec<usize>>>,
}

impl PerModel {
    pub fn carrier(&self, sort: usize) -> usize {
        self.sorts[sort].len()
    }

    /// Parameter tuples whose classes lie in relation `r`, as a mask over
    /// `tuples(n, k)`.
    pub fn relation_mask(&self, sig: &Signature, r: usize) -> BitSet {
        let arity = &sig.relations[r].arity;
        let n = self.sorts.first().map_or(0, |s| s.n);
        let all = tuples(n, arity.len());
        BitSet::from_indices(
            all.len(),
            all.iter().enumerate().filter(|(_, ps)| self.holds_params(sig, r, ps)).map(|(i, _)| i),
        )
    }

    pub fn holds_params(&self, sig: &Signature, r: usize, ps: &[usize]) -> bool {
        let arity = &sig.relations[r].arity;
        let classes: Option<Vec<usize>> =
            arity.iter().zip(ps).map(|(s, &p)| self.sorts[sort_index(sig, s)].class_of(p)).collect();
        classes.is_some_and(|c| self.relations[r].contains(&c))
    }

    /// Sort key: per-sort masks, then relation masks.
    pub fn key(&self, sig: &Signature) -> Vec<BitSet> {
        let mut k: Vec<BitSet> = self.sorts.iter().map(Per::mask).collect();
        k.extend((0..self.relations.len()).map(|r| self.relation_mask(sig, r)));
        k
    }

    pub fn is_empty_model(&self) -> bool {
        self.sorts.iter().all(Per::is_empty)
    }

    pub fn describe(&self, sig: &Signature) -> String {
        if self.is_empty_model() && self.relations.iter().all(BTreeSet::is_empty) {
            return "empty model".into();
        }
        let mut parts = Vec::new();
        for (s, per) in sig.sorts.iter().zip(&self.sorts) {
            let classes: Vec<String> = per
                .classes
                .iter()
                .map(|c| format!("{{{}}}", c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            parts.push(format!("{s} = [{}]", classes.join(" ")));
        }
        for (r, rel) in sig.relations.iter().zip(&self.relations) {
            let ts: Vec<String> = rel
                .iter()
                .map(|t| format!("({})", t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            parts.push(format!("{} = {{{}}}", r.name, ts.join(" ")));
        }
        parts.join("; ")
    }
}

pub fn sort_index(sig: &Signature, sort: &str) -> usize {
    sig.sorts.iter().position(|s| s == sort).unwrap_or_else(|| panic!("unknown sort `{sort}`"))
}

fn relation_index(sig: &Signature, name: &str) -> usize {
    sig.relations.iter().position(|r| r.name == name).unwrap_or_else(|| panic!("unknown relation `{name}`"))
}

/// Recursive interpretation over a structure fibred over `objects` base
/// points. `carrier(sort, x)` lists the elements of a sort over `x`;
/// `holds(r, x, tuple)` decides a relation there. The result holds
/// `(x, tuple)` for each satisfying tuple of the context over `x`.
pub fn interpret_with(
    sig: &Signature,
    objects: usize,
    carrier: &dyn Fn(usize, usize) -> Vec<usize>,
    holds: &dyn Fn(usize, usize, &[usize]) -> bool,
    context: &[(String, String)],
    formula: &Formula,
) -> BTreeSet<(usize, Vec<usize>)> {
    let mut out = BTreeSet::new();
    for x in 0..objects {
        let carriers: Vec<Vec<usize>> = context.iter().map(|(_, s)| carrier(sort_index(sig, s), x)).collect();
        let mut choice = Vec::with_capacity(context.len());
        product(&carriers, &mut choice, &mut |tuple| {
            let mut env: Vec<(String, usize)> =
                context.iter().map(|(v, _)| v.clone()).zip(tuple.iter().copied()).collect();
            if eval(sig, x, carrier, holds, formula, &mut env) {
                out.insert((x, tuple.to_vec()));
            }
        });
    }
    out
}

fn product(sets: &[Vec<usize>], choice: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
    if choice.len() == sets.len() {
        visit(choice);
        return;
    }
    for &v in &sets[choice.len()] {
        choice.push(v);
        product(sets, choice, visit);
        choice.pop();
    }
}

fn eval(
    sig: &Signature,
    x: usize,
    carrier: &dyn Fn(usize, usize) -> Vec<usize>,
    holds: &dyn Fn(usize, usize, &[usize]) -> bool,
    formula: &Formula,
    env: &mut Vec<(String, usize)>,
) -> bool {
    let look = |env: &Vec<(String, usize)>, v: &str| {
        env.iter().rev().find(|(n, _)| n == v).map(|(_, e)| *e).expect("bound variable")
    };
    match formula {
        Formula::Rel { name, args } => {
            let tuple: Vec<usize> = args.iter().map(|a| look(env, a)).collect();
            holds(relation_index(sig, name), x, &tuple)
        }
        Formula::Eq { lhs, rhs, .. } => look(env, lhs) == look(env, rhs),
        Formula::True => true,
        Formula::False => false,
        Formula::And(fs) => fs.iter().all(|f| eval(sig, x, carrier, holds, f, env)),
        Formula::Or(fs) => fs.iter().any(|f| eval(sig, x, carrier, holds, f, env)),
        Formula::Exists { var, sort, body } => carrier(sort_index(sig, sort), x).into_iter().any(|e| {
            env.push((var.clone(), e));
            let r = eval(sig, x, carrier, holds, body, env);
            env.pop();
            r
        }),
    }
}

/// `φᴹ` as a set of class tuples over `context`.
pub fn interpret_formula(
    theory: &Theory,
    m: &PerModel,
    context: &[(String, String)],
    formula: &Formula,
) -> BTreeSet<Vec<usize>> {
    let carrier = |s: usize, _: usize| (0..m.carrier(s)).collect();
    let holds = |r: usize, _: usize, t: &[usize]| m.relations[r].contains(t);
    interpret_with(&theory.signature, 1, &carrier, &holds, context, formula).into_iter().map(|(_, t)| t).collect()
}

/// Whether every axiom `φ ⊢ ψ` has `φᴹ ⊆ ψᴹ`.
pub fn satisfies(theory: &Theory, m: &PerModel) -> bool {
    theory.axioms.iter().all(|ax| {
        let lhs = interpret_formula(theory, m, &ax.context, &ax.lhs);
        lhs.is_empty() || lhs.is_subset(&interpret_formula(theory, m, &ax.context, &ax.rhs))
    })
}

/// All models of `theory` on `0..n`, sorted by [`PerModel::key`].
pub fn enumerate_models(theory: &Theory, n: usize) -> Vec<PerModel> {
    let sig = &theory.signature;
    let pers = enumerate_pers(n);
    let mut out = Vec::new();
    let mut choice = Vec::new();
    fn sorts(theory: &Theory, pers: &[Per], choice: &mut Vec<Per>, out: &mut Vec<PerModel>) {
        let sig = &theory.signature;
        if choice.len() == sig.sorts.len() {
            let spaces: Vec<Vec<Vec<usize>>> = sig
                .relations
                .iter()
                .map(|r| {
                    let sizes: Vec<usize> = r.arity.iter().map(|s| choice[sort_index(sig, s)].len()).collect();
                    let mut ts = vec![Vec::new()];
                    for &k in &sizes {
                        ts = ts
                            .into_iter()
                            .flat_map(|t: Vec<usize>| (0..k).map(move |c| [t.clone(), vec![c]].concat()))
                            .collect();
                    }
                    ts
                })
                .collect();
            relations(theory, choice, &spaces, &mut Vec::new(), out);
            return;
        }
        for per in pers {
            choice.push(per.clone());
            sorts(theory, pers, choice, out);
            choice.pop();
        }
    }
    fn relations(
        theory: &Theory,
        sorts: &[Per],
        spaces: &[Vec<Vec<usize>>],
        chosen: &mut Vec<BTreeSet<Vec<usize>>>,
        out: &mut Vec<PerModel>,
    ) {
        let r = chosen.len();
        if r == spaces.len() {
            let m = PerModel { sorts: sorts.to_vec(), relations: chosen.clone() };
            if satisfies(theory, &m) {
                out.push(m);
            }
            return;
        }
        let space = &spaces[r];
        assert!(space.len() < 24, "relation space too large to enumerate");
        for mask in 0u32..(1 << space.len()) {
            chosen.push((0..space.len()).filter(|&i| mask >> i & 1 == 1).map(|i| space[i].clone()).collect());
            relations(theory, sorts, spaces, chosen, out);
            chosen.pop();
        }
    }
    sorts(theory, &pers, &mut choice, &mut out);
    out.sort_by_cached_key(|m| m.key(sig));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::theory::parse_theory;

    #[test]
    fn per_counts() {
        let counts: Vec<usize> = (0..5).map(|n| enumerate_pers(n).len()).collect();
        // Σₖ C(n,k)·Bell(k)
        assert_eq!(counts, vec![1, 2, 5, 15, 52]);
    }

    #[test]
    fn objects_models() {
        assert_eq!(enumerate_models(&corpus::objects(), 1).len(), 2);
        let ms = enumerate_models(&corpus::objects(), 2);
        assert_eq!(ms.len(), 5);
        assert!(ms[0].is_empty_model());
        assert_eq!(enumerate_models(&corpus::inhabited(), 2).len(), 4);
    }

    #[test]
    fn interpretation_basics() {
        let t = corpus::symmetric_graph();
        let m = PerModel {
            sorts: vec![Per::new(3, vec![vec![0], vec![1], vec![2]])],
            relations: vec![[vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]].into_iter().collect()],
        };
        let ctx = |vs: &[&str]| vs.iter().map(|v| (v.to_string(), "V".to_string())).collect::<Vec<_>>();
        let diag = interpret_formula(&t, &m, &ctx(&["x", "y"]), &Formula::eq("V", "x", "y"));
        assert_eq!(diag, (0..3).map(|c| vec![c, c]).collect());
        assert!(interpret_formula(&t, &m, &ctx(&["x"]), &Formula::False).is_empty());
        let phi = Formula::exists("y", "V", Formula::rel("E", &["x", "y"]));
        let proj: BTreeSet<Vec<usize>> = m.relations[0].iter().map(|t| vec![t[0]]).collect();
        assert_eq!(interpret_formula(&t, &m, &ctx(&["x"]), &phi), proj);
        assert!(satisfies(&t, &m));
    }

    #[test]
    fn theory_with_sentence_axiom() {
        let t = parse_theory("theory T { sort X; rel P(X); axiom |- exists x:X. P(x) }").unwrap();
        // Nonempty PER with a nonempty predicate: {0}:1, {1}:1, {0}{1}:3, {01}:1.
        assert_eq!(enumerate_models(&t, 2).len(), 6);
    }
}
