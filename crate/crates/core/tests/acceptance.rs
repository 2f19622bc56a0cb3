//! Acceptance run: one PASS/FAIL line per criterion, each with a pinned
//! wall-clock bound. Counts are checked against the brute-force oracles.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use geoclass_core::category::{random, FiniteCategory};
use geoclass_core::classifier::{interpret_in_e, ClassifierBundle, ParameterSet};
use geoclass_core::corpus;
use geoclass_core::forcing::{gen_forcing_presentation, verify_zeta};
use geoclass_core::oracle::decode::{decode_point, Decoded, Layer};
use geoclass_core::oracle::{enumerate_homs, enumerate_isos, enumerate_models, PerModel};
use geoclass_core::presentation::{
    canonical_presentation, expand_presentation, Dnf, GenId, Generator, MeetTerm, Orientation, Point, Presentation,
    Sequent, Span,
};
use geoclass_core::theory::{Theory, TheoryOrientation};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bundle(t: &Theory, n: usize) -> ClassifierBundle {
    ClassifierBundle::generate(t, ParameterSet::new(n, TheoryOrientation::LH)).unwrap()
}

fn key<T: std::fmt::Debug>(x: &T) -> String {
    format!("{x:?}")
}

fn sierpinski() -> Outcome {
    let mut p = Presentation::empty(Orientation::Open);
    p.add_generator(Generator::new("g", "g")).unwrap();
    let n = p.enumerate_points().len();
    ensure(n == 2, || format!("{n} points"))
}

fn canonical() -> Outcome {
    for size in 0..=4 {
        let xs: Vec<String> = (0..size).map(|i| format!("x{i}")).collect();
        let p = canonical_presentation(&xs, Orientation::Open);
        let pts = p.enumerate_points();
        ensure(pts.len() == size, || format!("|X|={size}: {} points", pts.len()))?;
        let hit: BTreeSet<GenId> = pts.iter().flat_map(|pt| pt.true_gens().collect::<Vec<_>>()).collect();
        ensure(pts.iter().all(|pt| pt.count_true() == 1) && hit.len() == size, || {
            format!("|X|={size}: not singletons")
        })?;
    }
    Ok(())
}

/// Surjective `q` from a set of at most `max` elements onto `0..base`, and
/// an injection into at most `max` slots.
fn random_span(rng: &mut impl Rng, base: usize, max: usize) -> Span {
    let mut q: Vec<usize> = (0..base).collect();
    while q.len() < max && rng.random_bool(0.4) {
        q.push(rng.random_range(0..base.max(1)));
    }
    if base == 0 {
        q.clear();
    }
    let outer = rng.random_range(q.len()..=max.max(q.len()));
    let mut slots: Vec<usize> = (0..outer).collect();
    slots.shuffle(rng);
    Span { i: slots[..q.len()].to_vec(), q, outer }
}

fn random_presentation(rng: &mut impl Rng, n: usize) -> Presentation {
    let mut p = Presentation::empty(Orientation::Open);
    for i in 0..n {
        p.add_generator(Generator::new(format!("g{i}"), format!("g{i}"))).unwrap();
    }
    let term = |rng: &mut dyn rand::RngCore| -> MeetTerm {
        (0..n).filter(|_| rng.random_bool(0.3)).map(|i| GenId(i as u32)).collect()
    };
    for _ in 0..rng.random_range(0..=4) {
        let lhs = term(rng);
        let rhs = Dnf::from_terms((0..rng.random_range(0..=2)).map(|_| term(rng)).collect::<Vec<_>>());
        p.add_relation(Sequent::new(lhs, rhs)).unwrap();
    }
    p
}

fn expansion() -> Outcome {
    for seed in 0..50 {
        let mut rng = random::rng(seed);
        let n = rng.random_range(1..=4);
        let p = random_presentation(&mut rng, n);
        let gens = random_span(&mut rng, n, 6);
        let rels = random_span(&mut rng, p.relations().len(), 6);
        let ex = expand_presentation(&p, &gens, &rels).map_err(|e| format!("seed {seed}: {e}"))?;
        let before = p.enumerate_points();
        let after = ex.presentation.enumerate_points();
        ensure(before.len() == after.len(), || format!("seed {seed}: {} vs {} points", before.len(), after.len()))?;
        let mut lifted: Vec<Point> = before.iter().map(|pt| ex.lift_point(pt)).collect();
        lifted.sort();
        ensure(lifted == after, || format!("seed {seed}: lift is not the bijection"))?;
        ensure(after.iter().all(|pt| before.contains(&ex.lower_point(pt, n))), || format!("seed {seed}: lower"))?;
    }
    Ok(())
}

fn partial_surjections(m: usize, x: usize) -> BTreeSet<Vec<Option<usize>>> {
    let mut all: Vec<Vec<Option<usize>>> = vec![Vec::new()];
    for _ in 0..m {
        all = all
            .into_iter()
            .flat_map(|f| std::iter::once(None).chain((0..x).map(Some)).map(move |v| [f.clone(), vec![v]].concat()))
            .collect();
    }
    all.into_iter().filter(|f| (0..x).all(|y| f.contains(&Some(y)))).collect()
}

fn forcing() -> Outcome {
    for m in 0..=4 {
        for x in 0..=4 {
            let xs: Vec<String> = (0..x).map(|i| format!("x{i}")).collect();
            let l = gen_forcing_presentation(m, &xs);
            let pts = l.presentation.enumerate_points();
            let got: BTreeSet<_> = pts.iter().map(|p| l.decode(p).remove(0)).collect();
            ensure(got.len() == pts.len() && got == partial_surjections(m, x), || format!("|M|={m} |X|={x}"))?;
        }
    }
    let two = gen_forcing_presentation(2, &["a", "b"]).presentation.enumerate_points().len();
    ensure(two == 2, || format!("|M|=|X|=2 gives {two} points"))
}

fn decoded_set(b: &ClassifierBundle, layer: &Layer) -> Result<BTreeSet<String>, String> {
    let pts = b.layer(&layer.name()).unwrap().enumerate_points();
    let set: BTreeSet<String> = pts
        .iter()
        .map(|p| decode_point(b, p, layer).map(|d| key(&d)).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    ensure(set.len() == pts.len(), || format!("decoding {} is not injective", layer.name()))?;
    Ok(set)
}

fn hom_set(t: &Theory, models: &[PerModel], isos: bool) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for m in models {
        for n in models {
            let hs = if isos { enumerate_isos(t, m, n) } else { enumerate_homs(t, m, n) };
            out.extend(hs.into_iter().map(|h| key(&Decoded::Hom { domain: m.clone(), codomain: n.clone(), hom: h })));
        }
    }
    out
}

fn bijections() -> Outcome {
    for t in corpus::corpus() {
        for n in 0..=2 {
            let b = bundle(&t, n);
            let models = enumerate_models(&t, n);
            let at = |what: &str| format!("{} |P|={n}: {what}", t.name);
            let expected: BTreeSet<String> = models.iter().map(|m| key(&Decoded::Model(m.clone()))).collect();
            ensure(decoded_set(&b, &Layer::Objects)? == expected, || at("objects"))?;
            ensure(decoded_set(&b, &Layer::Arrows)? == hom_set(&t, &models, false), || at("arrows"))?;
            ensure(decoded_set(&b, &Layer::Core)? == hom_set(&t, &models, true), || at("core"))?;
            for (s, sort) in t.signature.sorts.iter().enumerate() {
                let expected: BTreeSet<String> = models
                    .iter()
                    .flat_map(|m| (0..m.carrier(s)).map(move |c| key(&Decoded::Element { model: m.clone(), class: c })))
                    .collect();
                ensure(decoded_set(&b, &Layer::Bundle(sort.clone()))? == expected, || at(sort))?;
            }
        }
    }
    // The four counts for bare sets at two parameters, from the oracle.
    let t = corpus::objects();
    let models = enumerate_models(&t, 2);
    let homs: usize = models.iter().flat_map(|m| models.iter().map(|n| enumerate_homs(&t, m, n).len())).sum();
    let isos: usize = models.iter().flat_map(|m| models.iter().map(|n| enumerate_isos(&t, m, n).len())).sum();
    let elements: usize = models.iter().map(|m| m.carrier(0)).sum();
    let b = bundle(&t, 2);
    let count = |name: &str| b.layer(name).unwrap().enumerate_points().len();
    let got = [count("objects"), count("arrows"), count("core"), count("E:X")];
    let want = [models.len(), homs, isos, elements];
    ensure(got == want && want == [5, 27, 12, 5], || format!("{got:?} vs oracle {want:?}"))
}

fn structure_maps() -> Outcome {
    for t in corpus::corpus() {
        let b = bundle(&t, 2);
        ensure(b.homs().iter().all(|h| h.is_verified()), || format!("{}: unverified structure map", t.name))?;
        b.point_category(false).map_err(|e| format!("{}: {e}", t.name))?;
        let core = b.point_category(true).map_err(|e| format!("{} core: {e}", t.name))?;
        ensure(core.category.is_groupoid(), || format!("{}: core is not a groupoid", t.name))?;
    }
    Ok(())
}

fn soundness() -> Outcome {
    for t in corpus::corpus() {
        for orientation in [TheoryOrientation::LH, TheoryOrientation::PS] {
            for n in 0..=2 {
                let params = ParameterSet::new(n, orientation);
                for ax in &t.axioms {
                    let lhs = interpret_in_e(&t, params, &ax.context, &ax.lhs).map_err(|e| e.to_string())?;
                    let rhs = interpret_in_e(&t, params, &ax.context, &ax.rhs).map_err(|e| e.to_string())?;
                    let pts = |p: &Presentation| p.enumerate_points().into_iter().collect::<BTreeSet<_>>();
                    ensure(lhs.generators() == rhs.generators() && pts(&lhs).is_subset(&pts(&rhs)), || {
                        format!("{} {orientation:?} |P|={n}: {ax:?}", t.name)
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn base_change() -> Outcome {
    let bad: Vec<u64> = (0..100).filter(|&s| !common::base_change_instance(s)).collect();
    ensure(bad.is_empty(), || format!("seeds {bad:?}"))
}

fn descent() -> Outcome {
    (0..100).try_for_each(|s| common::descent_instance(s).map_err(|e| format!("seed {s}: {e}")))
}

fn two_cells() -> Outcome {
    (0..50)
        .try_for_each(|s| common::two_cell_unique(&common::two_cell_instance(s)).map_err(|e| format!("seed {s}: {e}")))
}

fn zeta() -> Outcome {
    let bases = [
        (FiniteCategory::terminal(), "terminal"),
        (FiniteCategory::codiscrete(2), "codiscrete(2)"),
        (FiniteCategory::free_arrow(), "free arrow"),
    ];
    for t in corpus::corpus() {
        let b = bundle(&t, 2);
        for (k, name) in &bases {
            for core in [false, true] {
                let report = verify_zeta(&b, k, name, core).map_err(|e| format!("{} over {name}: {e}", t.name))?;
                if let Some(c) = report.checks.iter().find(|c| !c.pass) {
                    return Err(format!("{}: {} ({})", c.instance, c.check, c.witness));
                }
            }
        }
    }
    Ok(())
}

fn id_sets(pres: &Presentation) -> BTreeSet<BTreeSet<String>> {
    pres.enumerate_points().iter().map(|p| p.true_ids(pres).map(str::to_string).collect()).collect()
}

/// Splits a point of the union classifier into its two halves, renaming
/// `X_1`/`X_2` back to `X`.
fn halves(pres: &Presentation, pt: &Point) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut out = (BTreeSet::new(), BTreeSet::new());
    for id in pt.true_ids(pres) {
        let mut parts: Vec<&str> = id.split(':').collect();
        let (side, base) = match parts[1].rsplit_once('_') {
            Some((base, "1")) => (0, base),
            Some((base, "2")) => (1, base),
            _ => panic!("`{id}` belongs to neither summand"),
        };
        parts[1] = base;
        let id = parts.join(":");
        if side == 0 {
            out.0.insert(id)
        } else {
            out.1.insert(id)
        };
    }
    out
}

fn product() -> Outcome {
    let o = corpus::objects();
    let u = o.disjoint_union(&o);
    let bu = bundle(&u, 2);
    let bo = bundle(&o, 2);
    for layer in ["objects", "arrows", "core"] {
        let up = bu.layer(layer).unwrap();
        let pts = up.enumerate_points();
        let pairs: BTreeSet<_> = pts.iter().map(|p| halves(up, p)).collect();
        let side = id_sets(bo.layer(layer).unwrap());
        let expected: BTreeSet<_> =
            side.iter().flat_map(|x| side.iter().map(move |y| (x.clone(), y.clone()))).collect();
        ensure(pairs.len() == pts.len() && pairs == expected, || format!("{layer}: not the product"))?;
        if layer == "objects" {
            ensure(pts.len() == 25, || format!("{} object pairs", pts.len()))?;
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let ms = Duration::from_millis;
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        ("Sierpinski space has two points", ms(1), sierpinski),
        ("canonical presentations, |X| <= 4", ms(1_000), canonical),
        ("expansion along 50 seeded spans", ms(10_000), expansion),
        ("forcing locale, |M|,|X| <= 4", ms(5_000), forcing),
        ("bijection suite, |P| <= 2", ms(30_000), bijections),
        ("structure maps and point categories", ms(30_000), structure_maps),
        ("generic model soundness, LH and PS", ms(30_000), soundness),
        ("base change, 100 seeds", ms(30_000), base_change),
        ("descent, 100 seeds", ms(60_000), descent),
        ("2-cell canonicity, 50 seeds", ms(30_000), two_cells),
        ("universal property over 3 bases", ms(120_000), zeta),
        ("classifier of O+O is the product", ms(30_000), product),
    ];
    let mut failed = Vec::new();
    for (i, (name, bound, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| ensure(elapsed < *bound, || format!("took longer than {bound:?}")));
        match &outcome {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({elapsed:.2?}, bound {bound:?})", i + 1),
            Err(e) => {
                println!("criterion {:>2} FAIL  {name} ({elapsed:.2?}, bound {bound:?}): {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
