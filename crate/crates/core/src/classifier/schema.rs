//! Relation schemas shared by the object, arrow and bundle presentations.

use crate::presentation::{Dnf, FiberExtension, GenId, MeetTerm, Presentation, RelationSpec, Sequent};
use crate::theory::{Formula, Theory};

use super::names::{self, copy, tuples};
use super::ClassifierError;

pub(crate) fn gen(pres: &Presentation, id: &str) -> GenId {
    pres.lookup(id).unwrap_or_else(|| panic!("generator `{id}` is declared by the schema"))
}

fn push(pres: &mut Presentation, lhs: impl IntoIterator<Item = GenId>, rhs: Dnf) {
    pres.add_relation(Sequent::new(lhs.into_iter().collect(), rhs)).expect("schema generators are declared");
}

fn arg_list(g: &crate::presentation::Generator) -> Vec<usize> {
    g.tags
        .get("args")
        .map(|a| a.split(',').filter(|s| !s.is_empty()).map(|s| s.parse().unwrap()).collect())
        .unwrap_or_default()
}

/// Whether generator `g` entails `[p ∼ p]` of `sort` through the symmetry,
/// transitivity and reflexivity schemas.
fn implies_reflexive(theory: &Theory, pres: &Presentation, g: GenId, sort: &str, p: usize) -> bool {
    let gen = pres.generator(g);
    let args = arg_list(gen);
    match gen.tags.get("kind").map(String::as_str) {
        Some("sim") => gen.tags.get("symbol").is_some_and(|s| s == sort) && args.contains(&p),
        Some("rel") => {
            let Some(r) = gen.tags.get("symbol").and_then(|name| theory.signature.relation(name)) else {
                return false;
            };
            r.arity.iter().zip(&args).any(|(s, &a)| s == sort && a == p)
        }
        _ => false,
    }
}

/// Translates a formula into a join of meets of object generators.
///
/// `env` binds each free variable to its sort and parameter. An existential
/// becomes the join over parameters `p` of `[p ∼ p] ∧ body`; the guard is
/// dropped from terms that already entail it.
pub fn lower_formula(
    theory: &Theory,
    pres: &Presentation,
    n: usize,
    c: Option<usize>,
    formula: &Formula,
    env: &[(String, String, usize)],
) -> Result<Dnf, ClassifierError> {
    let lookup = |v: &str| {
        env.iter()
            .rev()
            .find(|(name, _, _)| name == v)
            .map(|(_, _, p)| *p)
            .ok_or_else(|| ClassifierError::ContextMismatch(v.to_string()))
    };
    Ok(match formula {
        Formula::Rel { name, args } => {
            let ps = args.iter().map(|a| lookup(a)).collect::<Result<Vec<_>, _>>()?;
            Dnf::single(gen(pres, &copy(&names::rel(name, &ps), c)))
        }
        Formula::Eq { sort, lhs, rhs } => {
            Dnf::single(gen(pres, &copy(&names::sim(sort, lookup(lhs)?, lookup(rhs)?), c)))
        }
        Formula::True => Dnf::top(),
        Formula::False => Dnf::bottom(),
        Formula::And(fs) => {
            let parts = fs.iter().map(|f| lower_formula(theory, pres, n, c, f, env)).collect::<Result<Vec<_>, _>>()?;
            Dnf::meet_all(parts)
        }
        Formula::Or(fs) => {
            let parts = fs.iter().map(|f| lower_formula(theory, pres, n, c, f, env)).collect::<Result<Vec<_>, _>>()?;
            Dnf::join_all(parts)
        }
        Formula::Exists { var, sort, body } => {
            let mut terms = Vec::new();
            for p in 0..n {
                let mut inner = env.to_vec();
                inner.push((var.clone(), sort.clone(), p));
                let guard = gen(pres, &copy(&names::sim(sort, p, p), c));
                let b = lower_formula(theory, pres, n, c, body, &inner)?;
                for t in b.terms() {
                    let absorbed = t.iter().any(|g| g != guard && implies_reflexive(theory, pres, g, sort, p));
                    terms.push(if absorbed { t.clone() } else { t.meet(&MeetTerm::single(guard)) });
                }
            }
            Dnf::from_terms(terms)
        }
    })
}

/// Adds one copy of the object generators and their relations.
pub(crate) fn add_objects(
    pres: &mut Presentation,
    theory: &Theory,
    n: usize,
    c: Option<usize>,
) -> Result<(), ClassifierError> {
    let sig = &theory.signature;
    for a in &sig.sorts {
        for p in 0..n {
            for q in 0..n {
                pres.add_generator(names::sim_gen(a, p, q, c))?;
            }
        }
    }
    for r in &sig.relations {
        for ps in tuples(n, r.arity.len()) {
            pres.add_generator(names::rel_gen(&r.name, &ps, c))?;
        }
    }
    let sim = |pres: &Presentation, a: &str, p: usize, q: usize| gen(pres, &copy(&names::sim(a, p, q), c));
    for a in &sig.sorts {
        for p in 0..n {
            for q in 0..n {
                let rhs = Dnf::single(sim(pres, a, q, p));
                push(pres, [sim(pres, a, p, q)], rhs);
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    let rhs = Dnf::single(sim(pres, a, p, r));
                    push(pres, [sim(pres, a, p, q), sim(pres, a, q, r)], rhs);
                }
            }
        }
    }
    for r in &sig.relations {
        let k = r.arity.len();
        let rg = |pres: &Presentation, ps: &[usize]| gen(pres, &copy(&names::rel(&r.name, ps), c));
        for ps in tuples(n, k) {
            for qs in tuples(n, k) {
                let mut lhs = vec![rg(pres, &ps)];
                lhs.extend((0..k).map(|i| sim(pres, &r.arity[i], ps[i], qs[i])));
                let rhs = Dnf::single(rg(pres, &qs));
                push(pres, lhs, rhs);
            }
        }
        for ps in tuples(n, k) {
            let refl: MeetTerm = (0..k).map(|i| sim(pres, &r.arity[i], ps[i], ps[i])).collect();
            push(pres, [rg(pres, &ps)], Dnf::term(refl));
        }
    }
    for ax in &theory.axioms {
        let k = ax.context.len();
        for ps in tuples(n, k) {
            let env: Vec<(String, String, usize)> =
                ax.context.iter().zip(&ps).map(|((v, s), &p)| (v.clone(), s.clone(), p)).collect();
            let guard: MeetTerm = env.iter().map(|(_, s, p)| sim(pres, s, *p, *p)).collect();
            let lhs = lower_formula(theory, pres, n, c, &ax.lhs, &env)?;
            let rhs = lower_formula(theory, pres, n, c, &ax.rhs, &env)?;
            for t in lhs.terms() {
                push(pres, guard.meet(t).iter(), rhs.clone());
            }
        }
    }
    Ok(())
}

/// Adds transport generators `[kind(p) = q]` from object copy `from` to
/// object copy `to`, with the schemas making them a homomorphism (and an
/// isomorphism when `core` is set).
pub(crate) fn add_transport(
    pres: &mut Presentation,
    theory: &Theory,
    n: usize,
    kind: &str,
    from: Option<usize>,
    to: Option<usize>,
    core: bool,
) -> Result<(), ClassifierError> {
    let sig = &theory.signature;
    for a in &sig.sorts {
        for p in 0..n {
            for q in 0..n {
                pres.add_generator(names::transport_gen(kind, a, p, q))?;
            }
        }
    }
    let tr = |pres: &Presentation, a: &str, p: usize, q: usize| gen(pres, &names::transport(kind, a, p, q));
    let sf = |pres: &Presentation, a: &str, p: usize, q: usize| gen(pres, &copy(&names::sim(a, p, q), from));
    let st = |pres: &Presentation, a: &str, p: usize, q: usize| gen(pres, &copy(&names::sim(a, p, q), to));
    for a in &sig.sorts {
        for [p, q, p2, q2] in tuples(n, 4).iter().map(|t| [t[0], t[1], t[2], t[3]]) {
            let rhs = Dnf::single(st(pres, a, q, q2));
            push(pres, [tr(pres, a, p, q), tr(pres, a, p2, q2), sf(pres, a, p, p2)], rhs);
        }
        for p in 0..n {
            let rhs = Dnf::from_terms((0..n).map(|q| MeetTerm::single(tr(pres, a, p, q))));
            push(pres, [sf(pres, a, p, p)], rhs);
        }
        for p in 0..n {
            for q in 0..n {
                let rhs = Dnf::term(MeetTerm::from_iter([sf(pres, a, p, p), st(pres, a, q, q)]));
                push(pres, [tr(pres, a, p, q)], rhs);
            }
        }
        for [p, q, p2, q2] in tuples(n, 4).iter().map(|t| [t[0], t[1], t[2], t[3]]) {
            let rhs = Dnf::single(tr(pres, a, p2, q2));
            push(pres, [tr(pres, a, p, q), sf(pres, a, p, p2), st(pres, a, q, q2)], rhs);
        }
        if core {
            for [p, q, p2, q2] in tuples(n, 4).iter().map(|t| [t[0], t[1], t[2], t[3]]) {
                let rhs = Dnf::single(sf(pres, a, p, p2));
                push(pres, [tr(pres, a, p, q), tr(pres, a, p2, q2), st(pres, a, q, q2)], rhs);
            }
            for q in 0..n {
                let rhs = Dnf::from_terms((0..n).map(|p| MeetTerm::single(tr(pres, a, p, q))));
                push(pres, [st(pres, a, q, q)], rhs);
            }
        }
    }
    for r in &sig.relations {
        let k = r.arity.len();
        let rf = |pres: &Presentation, ps: &[usize]| gen(pres, &copy(&names::rel(&r.name, ps), from));
        let rt = |pres: &Presentation, ps: &[usize]| gen(pres, &copy(&names::rel(&r.name, ps), to));
        for ps in tuples(n, k) {
            for qs in tuples(n, k) {
                let moves: Vec<GenId> = (0..k).map(|i| tr(pres, &r.arity[i], ps[i], qs[i])).collect();
                let mut lhs = vec![rf(pres, &ps)];
                lhs.extend(moves.iter().copied());
                let rhs = Dnf::single(rt(pres, &qs));
                push(pres, lhs, rhs);
                if core {
                    let mut lhs = vec![rt(pres, &qs)];
                    lhs.extend(moves.iter().copied());
                    let rhs = Dnf::single(rf(pres, &ps));
                    push(pres, lhs, rhs);
                }
            }
        }
    }
    Ok(())
}

/// The generators `[≡ p]` of sort `a` over the object copy `c`, with the
/// four relations making them pick out one equivalence class.
pub(crate) fn equiv_extension(theory: &Theory, n: usize, a: &str, c: Option<usize>) -> FiberExtension {
    let _ = theory;
    let eq = |p: usize| format!("equiv:{a}:{{k}}:{p}");
    let sim = |p: usize, q: usize| copy(&names::sim(a, p, q), c);
    let mut relations = Vec::new();
    for p in 0..n {
        for q in 0..n {
            relations.push(RelationSpec::new(vec![eq(p), sim(p, q)], vec![vec![eq(q), sim(p, q)]]));
            relations.push(RelationSpec::new(vec![eq(q), sim(p, q)], vec![vec![eq(p), sim(p, q)]]));
        }
    }
    for p in 0..n {
        for q in 0..n {
            relations.push(RelationSpec::new(vec![eq(p), eq(q)], vec![vec![sim(p, q)]]));
        }
    }
    relations.push(RelationSpec::new(vec![], (0..n).map(|p| vec![eq(p)]).collect()));
    for p in 0..n {
        relations.push(RelationSpec::new(vec![eq(p)], vec![vec![sim(p, p)]]));
    }
    FiberExtension { generators: (0..n).map(|p| names::equiv_template(a, p)).collect(), relations }
}
