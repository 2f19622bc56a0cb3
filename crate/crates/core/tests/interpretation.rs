//! The generic model's interpretation of formulas against the oracle's
//! recursive interpretation, soundness of axioms, orientation parity and
//! the product of classifiers.

use std::collections::BTreeSet;

use geoclass_core::classifier::{gen_arrows, gen_core, gen_objects, interpret_in_e, ClassifierBundle, ParameterSet};
use geoclass_core::corpus;
use geoclass_core::oracle::decode::{decode_elements, decode_model};
use geoclass_core::oracle::{enumerate_models, interpret_formula};
use geoclass_core::presentation::json::presentation_to_json;
use geoclass_core::presentation::{Orientation, Point, Presentation};
use geoclass_core::theory::{parse_theory, print_theory, Formula, Theory, TheoryOrientation};
use proptest::prelude::*;

type Context = Vec<(String, String)>;

/// Parses `[ctx]: φ` against the signature of `t`.
fn formula(t: &Theory, text: &str) -> (Context, Formula) {
    let base = print_theory(&Theory { axioms: vec![], ..t.clone() });
    let cut = base.rfind('}').unwrap();
    let src = format!("{} axiom {text} |- true;\n}}", &base[..cut]);
    let parsed = parse_theory(&src).unwrap_or_else(|e| panic!("{text}: {e}"));
    let ax = parsed.axioms.last().unwrap().clone();
    (ax.context, ax.lhs)
}

fn decoded(t: &Theory, n: usize, ctx: &Context, pres: &Presentation) -> BTreeSet<String> {
    let sorts: Vec<String> = ctx.iter().map(|(_, s)| s.clone()).collect();
    let points = pres.enumerate_points();
    let out: BTreeSet<String> = points
        .iter()
        .map(|pt| {
            let m = decode_model(t, n, pres, pt, None).unwrap();
            let classes = decode_elements(t, n, pres, pt, &m, &sorts).unwrap();
            format!("{m:?} {classes:?}")
        })
        .collect();
    assert_eq!(out.len(), points.len());
    out
}

fn oracle(t: &Theory, n: usize, ctx: &Context, phi: &Formula) -> BTreeSet<String> {
    enumerate_models(t, n)
        .iter()
        .flat_map(|m| interpret_formula(t, m, ctx, phi).into_iter().map(move |tuple| format!("{m:?} {tuple:?}")))
        .collect()
}

fn check_coherent(t: &Theory, n: usize, ctx: &Context, phi: &Formula) {
    let pres = interpret_in_e(t, ParameterSet::new(n, TheoryOrientation::LH), ctx, phi).unwrap();
    assert_eq!(decoded(t, n, ctx, &pres), oracle(t, n, ctx, phi), "{phi:?} at |P|={n}");
}

#[test]
fn interpretation_matches_oracle_on_formula_corpus() {
    let cases: Vec<(Theory, &[&str])> = vec![
        (corpus::objects(), &["[x:X, y:X]: x = y", "[x:X]: exists y:X. x = y", "[x:X]: false", "[]: exists x:X. true"]),
        (
            corpus::symmetric_graph(),
            &[
                "[x:V, y:V]: E(x, y)",
                "[x:V]: exists y:V. E(x, y)",
                "[x:V, y:V]: E(x, y) | x = y",
                "[x:V]: exists y:V. E(x, y) & exists z:V. E(y, z) & z = x",
            ],
        ),
        (corpus::pointed(), &["[x:X]: pt(x)", "[x:X, y:X]: pt(x) & x = y", "[]: exists x:X. pt(x)"]),
        (corpus::span(), &["[a:A, b:B]: R(a, b)", "[a:A]: exists b:B. R(a, b)", "[b:B]: exists a:A. R(a, b) | true"]),
    ];
    for (t, texts) in cases {
        for text in texts {
            let (ctx, phi) = formula(&t, text);
            for n in 0..=2 {
                check_coherent(&t, n, &ctx, &phi);
            }
        }
    }
}

fn graph_formula() -> impl Strategy<Value = Formula> {
    let var = prop::sample::select(vec!["x", "y"]);
    let leaf = prop_oneof![
        (var.clone(), var.clone()).prop_map(|(a, b)| Formula::rel("E", &[a, b])),
        (var.clone(), var).prop_map(|(a, b)| Formula::eq("V", a, b)),
        Just(Formula::True),
        Just(Formula::False),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..=3).prop_map(Formula::Or),
            (prop::sample::select(vec!["x", "y"]), inner).prop_map(|(v, b)| Formula::exists(v, "V", b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn interpretation_coherent_for_random_graph_formulas(phi in graph_formula(), n in 1usize..=2) {
        let t = corpus::symmetric_graph();
        let ctx: Context = vec![("x".into(), "V".into()), ("y".into(), "V".into())];
        check_coherent(&t, n, &ctx, &phi);
    }
}

fn points(p: &Presentation) -> BTreeSet<Point> {
    p.enumerate_points().into_iter().collect()
}

#[test]
fn axioms_hold_in_the_generic_model() {
    for t in corpus::corpus().into_iter().chain([corpus::inhabited(), corpus::span()]) {
        for orientation in [TheoryOrientation::LH, TheoryOrientation::PS] {
            for n in 0..=2 {
                let params = ParameterSet::new(n, orientation);
                for ax in &t.axioms {
                    let lhs = interpret_in_e(&t, params, &ax.context, &ax.lhs).unwrap();
                    let rhs = interpret_in_e(&t, params, &ax.context, &ax.rhs).unwrap();
                    assert_eq!(lhs.generators(), rhs.generators());
                    assert!(points(&lhs).is_subset(&points(&rhs)), "{} {ax:?} |P|={n}", t.name);
                }
            }
        }
    }
}

#[test]
fn orientations_differ_only_by_the_flag() {
    for t in corpus::corpus() {
        for n in 0..=2 {
            let lh = ParameterSet::new(n, TheoryOrientation::LH);
            let ps = ParameterSet::new(n, TheoryOrientation::PS);
            for gen in [gen_objects, gen_arrows, gen_core] {
                let a = gen(&t, lh).unwrap();
                let b = gen(&t, ps).unwrap();
                assert_eq!(a.orientation(), Orientation::Open);
                assert_eq!(b.orientation(), Orientation::Closed);
                assert_eq!(presentation_to_json(&a), presentation_to_json(&b.with_orientation(Orientation::Open)));
            }
        }
    }
}

/// Keeps the generators of the `side` copy of a union theory and renames
/// them to the original symbols.
fn project(union: &Presentation, pt: &Point, side: &str, symbols: &[&str]) -> BTreeSet<String> {
    pt.true_ids(union)
        .filter_map(|id| {
            let parts: Vec<&str> = id.split(':').collect();
            let sym = parts.get(1)?;
            let base = sym.strip_suffix(side)?;
            symbols.contains(&base).then(|| {
                let mut p = parts.clone();
                p[1] = base;
                p.join(":")
            })
        })
        .collect()
}

fn id_sets(pres: &Presentation) -> BTreeSet<BTreeSet<String>> {
    pres.enumerate_points().iter().map(|p| p.true_ids(pres).map(str::to_string).collect()).collect()
}

#[test]
fn classifier_of_a_disjoint_union_is_the_product() {
    let cases = [(corpus::objects(), corpus::objects(), 2), (corpus::pointed(), corpus::symmetric_graph(), 1)];
    for (a, b, n) in cases {
        let u = a.disjoint_union(&b);
        let bu = ClassifierBundle::generate(&u, ParameterSet::new(n, TheoryOrientation::LH)).unwrap();
        let ba = ClassifierBundle::generate(&a, ParameterSet::new(n, TheoryOrientation::LH)).unwrap();
        let bb = ClassifierBundle::generate(&b, ParameterSet::new(n, TheoryOrientation::LH)).unwrap();
        let syms = |t: &Theory| -> Vec<String> {
            t.signature.sorts.iter().chain(t.signature.relations.iter().map(|r| &r.name)).cloned().collect()
        };
        let (sa, sb) = (syms(&a), syms(&b));
        let (la, lb): (Vec<&str>, Vec<&str>) =
            (sa.iter().map(String::as_str).collect(), sb.iter().map(String::as_str).collect());
        let (suffix_a, suffix_b) = if a.name == b.name { ("_1", "_2") } else { ("", "") };
        for layer in ["objects", "arrows", "core"] {
            let up = bu.layer(layer).unwrap();
            let pairs: BTreeSet<(BTreeSet<String>, BTreeSet<String>)> = up
                .enumerate_points()
                .iter()
                .map(|p| (project(up, p, suffix_a, &la), project(up, p, suffix_b, &lb)))
                .collect();
            let (ia, ib) = (id_sets(ba.layer(layer).unwrap()), id_sets(bb.layer(layer).unwrap()));
            let product: BTreeSet<_> = ia.iter().flat_map(|x| ib.iter().map(move |y| (x.clone(), y.clone()))).collect();
            assert_eq!(up.enumerate_points().len(), pairs.len(), "projection is injective on {layer}");
            assert_eq!(pairs, product, "{} {layer}", u.name);
        }
    }
}
