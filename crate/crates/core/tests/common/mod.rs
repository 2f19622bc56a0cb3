//! Seeded instance generators and independent checkers shared by the
//! property tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;

use geoclass_core::category::random;
use geoclass_core::category::{
    action_iso, descend_action, enumerate_transformations, is_equivariant, pullback_sheaf, two_cell_canonical,
    two_cell_frame, Anafunctor, CategoryTables, FiniteCategory, InternalFunctor, InternalTransformation, TwoCellDatum,
};
use geoclass_core::corpus;
use geoclass_core::oracle::{base_change, BundleModel};
use geoclass_core::theory::{Formula, Theory};
use rand::seq::IndexedRandom;
use rand::Rng;

/// Category axioms checked directly on the tables.
pub fn valid_tables(t: &CategoryTables) -> bool {
    let a = t.source.len();
    let n = t.objects;
    if t.target.len() != a || t.identity.len() != n || t.compose.len() != a {
        return false;
    }
    if t.source.iter().chain(&t.target).any(|&x| x >= n) || t.identity.iter().any(|&f| f >= a) {
        return false;
    }
    if t.compose.iter().any(|r| r.len() != a || r.iter().flatten().any(|&h| h >= a)) {
        return false;
    }
    let m = |f: usize, g: usize| t.compose[f][g];
    for x in 0..n {
        let i = t.identity[x];
        if t.source[i] != x || t.target[i] != x {
            return false;
        }
    }
    for f in 0..a {
        for g in 0..a {
            let ok = match m(f, g) {
                None => t.target[f] != t.source[g],
                Some(h) => t.target[f] == t.source[g] && t.source[h] == t.source[f] && t.target[h] == t.target[g],
            };
            if !ok {
                return false;
            }
        }
        if m(t.identity[t.source[f]], f) != Some(f) || m(f, t.identity[t.target[f]]) != Some(f) {
            return false;
        }
    }
    for f in 0..a {
        for g in 0..a {
            for h in 0..a {
                if let (Some(fg), Some(gh)) = (m(f, g), m(g, h)) {
                    if m(fg, h) != m(f, gh) {
                        return false;
                    }
                }
            }
        }
    }
    if let Some(inv) = &t.inverse {
        if inv.len() != a || inv.iter().any(|&g| g >= a) {
            return false;
        }
        for f in 0..a {
            if m(f, inv[f]) != Some(t.identity[t.source[f]]) || m(inv[f], f) != Some(t.identity[t.target[f]]) {
                return false;
            }
        }
    }
    true
}

/// A random symmetric graph over `g`: a random action on vertices and the
/// least stable symmetric edge set containing a few random fiber pairs.
pub fn random_graph_model(rng: &mut impl Rng, g: &FiniteCategory) -> BundleModel {
    let v = random::action(rng, g);
    let mut edges = BTreeSet::new();
    if !v.is_empty() {
        for _ in 0..rng.random_range(0..=3) {
            let a = rng.random_range(0..v.len());
            let fiber = v.fiber(v.p[a]);
            let b = *fiber.choose(rng).unwrap();
            edges.insert(vec![a, b]);
        }
    }
    loop {
        let mut next = edges.clone();
        for e in &edges {
            next.insert(vec![e[1], e[0]]);
            for k in g.arrows_from(v.p[e[0]]) {
                next.insert(vec![v.beta(e[0], k), v.beta(e[1], k)]);
            }
        }
        if next == edges {
            break;
        }
        edges = next;
    }
    BundleModel { sorts: vec![v], relations: vec![edges] }
}

pub fn random_graph_formula(rng: &mut impl Rng, depth: usize, vars: &[&str]) -> Formula {
    let var = |rng: &mut _| *vars.choose(rng).unwrap();
    let leaf = depth == 0 || rng.random_bool(0.3);
    if leaf {
        return match rng.random_range(0..4) {
            0 | 1 => Formula::rel("E", &[var(rng), var(rng)]),
            2 => Formula::eq("V", var(rng), var(rng)),
            _ => Formula::True,
        };
    }
    match rng.random_range(0..3) {
        0 => Formula::And(vec![random_graph_formula(rng, depth - 1, vars), random_graph_formula(rng, depth - 1, vars)]),
        1 => Formula::Or(vec![random_graph_formula(rng, depth - 1, vars), random_graph_formula(rng, depth - 1, vars)]),
        _ => {
            let fresh = ["u", "w"][rng.random_range(0..2)];
            let mut inner = vars.to_vec();
            inner.push(fresh);
            Formula::exists(fresh, "V", random_graph_formula(rng, depth - 1, &inner))
        }
    }
}

/// `φ^{Φ*M}` against `φ^M` read through the pairs `(x, y)` of the pullback.
pub fn base_change_commutes(
    theory: &Theory,
    h: &FiniteCategory,
    phi: &InternalFunctor,
    m: &BundleModel,
    context: &[(String, String)],
    formula: &Formula,
    g: &FiniteCategory,
) -> bool {
    let pulled = base_change(theory, h, phi, m);
    let pairs: Vec<Vec<(usize, usize)>> = m.sorts.iter().map(|a| pullback_sheaf(h, phi, a).1).collect();
    let direct = pulled.interpret(theory, h, context, formula);
    let upstairs = m.interpret(theory, g, context, formula);
    let sort_of = |s: &str| theory.signature.sorts.iter().position(|x| x == s).unwrap();
    let pairs = &pairs;
    let expected: BTreeSet<(usize, Vec<usize>)> = (0..h.objects())
        .flat_map(|x| {
            upstairs.iter().filter(move |(y, _)| *y == phi.obj[x]).map(move |(_, t)| {
                let lifted = t
                    .iter()
                    .zip(context)
                    .map(|(&e, (_, s))| pairs[sort_of(s)].iter().position(|&p| p == (x, e)).unwrap())
                    .collect();
                (x, lifted)
            })
        })
        .collect();
    direct == expected
}

/// One base-change instance from a seed: `Φ: H → G` with at most four
/// objects in `G`, a graph model over `G` and a formula in two variables.
pub fn base_change_instance(seed: u64) -> bool {
    let mut rng = random::rng(seed);
    let theory = corpus::symmetric_graph();
    loop {
        let g = random::category(&mut rng, 4);
        let h = random::category(&mut rng, 3);
        let Some(phi) = random::functor(&mut rng, &h, &g) else { continue };
        let m = random_graph_model(&mut rng, &g);
        let formula = random_graph_formula(&mut rng, 3, &["x", "y"]);
        let context = vec![("x".to_string(), "V".to_string()), ("y".to_string(), "V".to_string())];
        return base_change_commutes(&theory, &h, &phi, &m, &context, &formula, &g);
    }
}

/// Descent both ways along a random ff, surjective-on-objects functor into
/// a category with at most four objects. Returns the first failure.
pub fn descent_instance(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let k = random::category(&mut rng, 4);
    let (h, phi) = random::ff_surjection(&mut rng, &k, 2);
    // Downstairs → upstairs → downstairs.
    let a = random::action(&mut rng, &k);
    let (up, _) = pullback_sheaf(&h, &phi, &a);
    let d = descend_action(&h, &k, &phi, &up)?;
    action_iso(&k, &a, &d.action).ok_or("descending a pullback does not recover the sheaf")?;
    // Upstairs → downstairs → upstairs, with the returned witness.
    let x = random::action(&mut rng, &h);
    let d = descend_action(&h, &k, &phi, &x)?;
    let (pulled, _) = pullback_sheaf(&h, &phi, &d.action);
    let mut image = d.iso.clone();
    image.sort_unstable();
    image.dedup();
    if image.len() != pulled.len() || !is_equivariant(&h, &x, &pulled, &d.iso) {
        return Err("descent witness is not an equivariant bijection".into());
    }
    Ok(())
}

/// A 2-cell between two anafunctors `H ⇸ K`, presented over a random ff
/// cover of their frame, together with every transformation on the frame.
pub struct TwoCellInstance {
    pub k: FiniteCategory,
    pub f1: Anafunctor,
    pub f2: Anafunctor,
    pub datum: TwoCellDatum,
    pub all: Vec<InternalTransformation>,
}

pub fn two_cell_instance(seed: u64) -> TwoCellInstance {
    let mut rng = random::rng(seed);
    loop {
        let h = random::category(&mut rng, 3);
        let k = random::category(&mut rng, 3);
        let anaf = |rng: &mut rand_chacha::ChaCha8Rng| -> Option<Anafunctor> {
            let (middle, left) = random::ff_surjection(rng, &h, 1);
            let right = random::functor(rng, &middle, &k)?;
            Some(Anafunctor { middle, left, right })
        };
        let (Some(f1), Some(f2)) = (anaf(&mut rng), anaf(&mut rng)) else { continue };
        let (p, phi, psi) = two_cell_frame(&f1, &f2);
        let all = enumerate_transformations(&p.category, &k, &phi, &psi);
        let Some(tau_bar) = all.choose(&mut rng).cloned() else { continue };
        let (domain, sigma) = random::ff_surjection(&mut rng, &p.category, 2);
        let tau = tau_bar.precompose(&sigma);
        return TwoCellInstance { k, f1, f2, datum: TwoCellDatum { domain, sigma, tau }, all };
    }
}

/// The canonical representative exists, and exactly one transformation on
/// the frame restricts to the given one.
pub fn two_cell_unique(inst: &TwoCellInstance) -> Result<(), String> {
    let (_, tau) = two_cell_canonical(&inst.k, &inst.f1, &inst.f2, &inst.datum)?;
    let restricting: Vec<&InternalTransformation> =
        inst.all.iter().filter(|t| t.precompose(&inst.datum.sigma) == inst.datum.tau).collect();
    match restricting.as_slice() {
        [only] if **only == tau => Ok(()),
        [_] => Err("canonical representative differs from the one found by search".into()),
        other => Err(format!("{} transformations restrict to τ", other.len())),
    }
}
