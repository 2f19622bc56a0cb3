//! Points of each layer against brute-force enumeration of models, homs,
//! isos and elements.

use std::collections::BTreeSet;

use geoclass_core::classifier::{ClassifierBundle, ParameterSet};
use geoclass_core::corpus;
use geoclass_core::oracle::decode::{
    decode_point, encode_element, encode_hom, encode_model, encode_pullback, Decoded, Layer,
};
use geoclass_core::oracle::{compose, enumerate_homs, enumerate_isos, enumerate_models, identity, inverse, PerModel};
use geoclass_core::presentation::point_pushforward;
use geoclass_core::theory::{Theory, TheoryOrientation};

fn key<T: std::fmt::Debug>(x: &T) -> String {
    format!("{x:?}")
}

fn theories() -> Vec<Theory> {
    corpus::corpus().into_iter().chain([corpus::inhabited(), corpus::span()]).collect()
}

fn bundle(t: &Theory, n: usize) -> ClassifierBundle {
    ClassifierBundle::generate(t, ParameterSet::new(n, TheoryOrientation::LH)).unwrap()
}

fn decoded_set(b: &ClassifierBundle, layer: &Layer) -> BTreeSet<String> {
    let pres = b.layer(&layer.name()).unwrap();
    let points = pres.enumerate_points();
    let set: BTreeSet<String> = points.iter().map(|p| key(&decode_point(b, p, layer).unwrap())).collect();
    assert_eq!(set.len(), points.len(), "decoding is injective on {}", layer.name());
    set
}

#[test]
fn objects_biject_with_models() {
    for t in theories() {
        for n in 0..=2 {
            let b = bundle(&t, n);
            let models = enumerate_models(&t, n);
            let expected: BTreeSet<String> = models.iter().map(|m| key(&Decoded::Model(m.clone()))).collect();
            assert_eq!(decoded_set(&b, &Layer::Objects), expected, "{} |P|={n}", t.name);
            for m in &models {
                let pt = encode_model(&b, m);
                assert_eq!(decode_point(&b, &pt, &Layer::Objects).unwrap(), Decoded::Model(m.clone()));
            }
        }
    }
}

fn hom_set(t: &Theory, models: &[PerModel], isos: bool) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for m in models {
        for n in models {
            let hs = if isos { enumerate_isos(t, m, n) } else { enumerate_homs(t, m, n) };
            for h in hs {
                out.insert(key(&Decoded::Hom { domain: m.clone(), codomain: n.clone(), hom: h }));
            }
        }
    }
    out
}

#[test]
fn arrows_biject_with_homs_and_core_with_isos() {
    for t in theories() {
        // Span's arrow layer grows too fast past one parameter.
        let max = if t.name == "Span" { 1 } else { 2 };
        for n in 0..=max {
            let b = bundle(&t, n);
            let models = enumerate_models(&t, n);
            assert_eq!(decoded_set(&b, &Layer::Arrows), hom_set(&t, &models, false), "{} |P|={n}", t.name);
            assert_eq!(decoded_set(&b, &Layer::Core), hom_set(&t, &models, true), "{} |P|={n}", t.name);
        }
    }
}

#[test]
fn bundle_points_biject_with_elements() {
    for t in theories() {
        for n in 0..=2 {
            let b = bundle(&t, n);
            let models = enumerate_models(&t, n);
            for (s, sort) in t.signature.sorts.iter().enumerate() {
                let mut expected = BTreeSet::new();
                for m in &models {
                    for c in 0..m.carrier(s) {
                        expected.insert(key(&Decoded::Element { model: m.clone(), class: c }));
                        let pt = encode_element(&b, sort, m, c);
                        let back = decode_point(&b, &pt, &Layer::Bundle(sort.clone())).unwrap();
                        assert_eq!(back, Decoded::Element { model: m.clone(), class: c });
                        // ρ forgets the element.
                        assert_eq!(point_pushforward(&b.per_sort[sort].rho, &pt).unwrap(), encode_model(&b, m));
                    }
                }
                assert_eq!(decoded_set(&b, &Layer::Bundle(sort.clone())), expected, "{} {sort} |P|={n}", t.name);
            }
        }
    }
}

#[test]
fn structure_maps_act_as_expected_on_points() {
    for t in corpus::corpus() {
        let n = 2;
        let b = bundle(&t, n);
        let models = enumerate_models(&t, n);
        for m in &models {
            // e sends a model to its identity.
            let id = encode_hom(&b, m, m, &identity(m), false);
            assert_eq!(point_pushforward(&b.e, &encode_model(&b, m)).unwrap(), id);
            for target in &models {
                for f in enumerate_homs(&t, m, target) {
                    let fp = encode_hom(&b, m, target, &f, false);
                    assert_eq!(point_pushforward(&b.s, &fp).unwrap(), encode_model(&b, m));
                    assert_eq!(point_pushforward(&b.t, &fp).unwrap(), encode_model(&b, target));
                    for (s, sort) in t.signature.sorts.iter().enumerate() {
                        let sb = &b.per_sort[sort];
                        for c in 0..m.carrier(s) {
                            let pair = encode_pullback(&b, sort, m, c, target, &f);
                            let moved = point_pushforward(&sb.theta, &pair).unwrap();
                            assert_eq!(moved, encode_element(&b, sort, target, f.maps[s][c]));
                        }
                    }
                    for third in &models {
                        for g in enumerate_homs(&t, target, third) {
                            let gp = encode_hom(&b, target, third, &g, false);
                            let pair = b.pair_point(&fp, &gp, false).expect("composable");
                            let composite = point_pushforward(&b.m, &pair).unwrap();
                            assert_eq!(composite, encode_hom(&b, m, third, &compose(&f, &g), false));
                        }
                    }
                }
                for f in enumerate_isos(&t, m, target) {
                    let fp = encode_hom(&b, m, target, &f, true);
                    let back = point_pushforward(&b.i, &fp).unwrap();
                    assert_eq!(back, encode_hom(&b, target, m, &inverse(&f).unwrap(), true));
                }
            }
        }
    }
}

#[test]
fn objects_counts_at_two_parameters() {
    let b = bundle(&corpus::objects(), 2);
    let count = |name: &str| b.layer(name).unwrap().enumerate_points().len();
    assert_eq!([count("objects"), count("arrows"), count("core"), count("E:X")], [5, 27, 12, 5]);
}
