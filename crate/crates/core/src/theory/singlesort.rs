//! Collapsing a many-sorted theory to a single sort with sort predicates.

use super::{Axiom, Formula, RelSymbol, Signature, Theory};

fn fresh(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

fn relativize(f: &Formula, sort: &str, preds: &[(String, String)]) -> Formula {
    let pred = |s: &str| &preds.iter().find(|(orig, _)| orig == s).expect("sort has a predicate").1;
    match f {
        Formula::Rel { .. } | Formula::True | Formula::False => f.clone(),
        Formula::Eq { lhs, rhs, .. } => Formula::Eq { sort: sort.into(), lhs: lhs.clone(), rhs: rhs.clone() },
        Formula::And(fs) => Formula::And(fs.iter().map(|g| relativize(g, sort, preds)).collect()),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|g| relativize(g, sort, preds)).collect()),
        Formula::Exists { var, sort: s, body } => Formula::Exists {
            var: var.clone(),
            sort: sort.into(),
            body: Box::new(Formula::And(vec![
                Formula::Rel { name: pred(s).clone(), args: vec![var.clone()] },
                relativize(body, sort, preds),
            ])),
        },
    }
}

fn conj(mut parts: Vec<Formula>) -> Formula {
    match parts.len() {
        0 => Formula::True,
        1 => parts.pop().unwrap(),
        _ => Formula::And(parts),
    }
}

/// One sort `Obj` with a unary predicate per original sort.
///
/// Besides covering (`⊤ ⊢ ⋁ᵢ Uᵢ(x)`) the predicates are made disjoint and
/// relation symbols are typed by them, so that models correspond to models
/// of the original theory. Theories with at most one sort are returned as is.
pub fn singlesort(theory: &Theory) -> Theory {
    let sig = &theory.signature;
    if sig.sorts.len() <= 1 {
        return theory.clone();
    }
    let sort = "Obj".to_string();
    let mut taken: Vec<String> = sig.relations.iter().map(|r| r.name.clone()).collect();
    let mut preds = Vec::new();
    for s in &sig.sorts {
        let p = fresh(&format!("is_{s}"), &taken);
        taken.push(p.clone());
        preds.push((s.clone(), p));
    }
    let pred_of = |s: &str| preds.iter().find(|(o, _)| o == s).unwrap().1.clone();
    let mut relations: Vec<RelSymbol> = sig
        .relations
        .iter()
        .map(|r| RelSymbol { name: r.name.clone(), arity: vec![sort.clone(); r.arity.len()] })
        .collect();
    relations.extend(preds.iter().map(|(_, p)| RelSymbol { name: p.clone(), arity: vec![sort.clone()] }));

    let x = vec![("x".to_string(), sort.clone())];
    let unary = |p: &str, v: &str| Formula::Rel { name: p.into(), args: vec![v.into()] };
    let mut axioms = vec![Axiom {
        context: x.clone(),
        lhs: Formula::True,
        rhs: Formula::Or(preds.iter().map(|(_, p)| unary(p, "x")).collect()),
    }];
    for (i, (_, p)) in preds.iter().enumerate() {
        for (_, q) in &preds[i + 1..] {
            axioms.push(Axiom {
                context: x.clone(),
                lhs: Formula::And(vec![unary(p, "x"), unary(q, "x")]),
                rhs: Formula::False,
            });
        }
    }
    for r in &sig.relations {
        let vars: Vec<String> = (0..r.arity.len()).map(|i| format!("x{i}")).collect();
        axioms.push(Axiom {
            context: vars.iter().map(|v| (v.clone(), sort.clone())).collect(),
            lhs: Formula::Rel { name: r.name.clone(), args: vars.clone() },
            rhs: conj(r.arity.iter().zip(&vars).map(|(s, v)| unary(&pred_of(s), v)).collect()),
        });
    }
    for ax in &theory.axioms {
        let mut guard: Vec<Formula> = ax.context.iter().map(|(v, s)| unary(&pred_of(s), v)).collect();
        if ax.lhs != Formula::True {
            guard.push(relativize(&ax.lhs, &sort, &preds));
        }
        axioms.push(Axiom {
            context: ax.context.iter().map(|(v, _)| (v.clone(), sort.clone())).collect(),
            lhs: conj(guard),
            rhs: relativize(&ax.rhs, &sort, &preds),
        });
    }
    Theory {
        name: theory.name.clone(),
        signature: Signature { sorts: vec![sort], relations },
        axioms,
        orientation: theory.orientation,
    }
}
