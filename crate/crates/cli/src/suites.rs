//! The verification suites behind `geoclass verify`.

use std::collections::BTreeMap;

use geoclass_core::category::{action_iso, descend_action, is_equivariant, pullback_sheaf, random, FiniteCategory};
use geoclass_core::classifier::ClassifierBundle;
use geoclass_core::forcing::{gen_forcing_presentation, verify_zeta, ZetaCheck};
use geoclass_core::oracle::decode::{decode_point, Decoded, DecodedDisplay, Layer};
use geoclass_core::oracle::{enumerate_homs, enumerate_isos, enumerate_models, PerModel};
use geoclass_core::presentation::{
    brute_force_points, canonical_presentation, Dnf, GenId, Generator, MeetTerm, Orientation, Presentation, Sequent,
};
use geoclass_core::theory::Theory;
use rand::Rng;

pub const SUITES: [&str; 4] = ["presentations", "bijections", "descent", "zeta"];

pub struct Runner<'a> {
    pub bundle: &'a ClassifierBundle,
    pub seed: u64,
    pub count: u64,
    pub checks: Vec<ZetaCheck>,
}

impl Runner<'_> {
    fn record(&mut self, instance: impl Into<String>, check: &str, outcome: Result<String, String>) {
        let (pass, witness) = match outcome {
            Ok(w) => (true, w),
            Err(w) => (false, w),
        };
        self.checks.push(ZetaCheck { instance: instance.into(), check: check.into(), pass, witness });
    }

    fn instance(&self) -> String {
        format!("{} |P|={}", self.bundle.theory.name, self.bundle.params.size)
    }

    pub fn run(&mut self, suite: &str) {
        match suite {
            "presentations" => self.presentations(),
            "bijections" => self.bijections(),
            "descent" => self.descent(),
            "zeta" => self.zeta(),
            other => unreachable!("unknown suite `{other}`"),
        }
    }

    fn presentations(&mut self) {
        let canonical = (0..=4).try_for_each(|n| {
            let xs: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let pts = canonical_presentation(&xs, Orientation::Open).enumerate_points();
            if pts.len() == n && pts.iter().all(|p| p.count_true() == 1) {
                Ok(())
            } else {
                Err(format!("|X| = {n}: {} points", pts.len()))
            }
        });
        self.record("|X| <= 4", "canonical presentation", canonical.map(|()| "5 sets".into()));

        let forcing = (0..=3).try_for_each(|m| {
            (0..=3).try_for_each(|x| {
                let xs: Vec<String> = (0..x).map(|i| format!("x{i}")).collect();
                let got = gen_forcing_presentation(m, &xs).presentation.enumerate_points().len();
                let want = partial_surjection_count(m, x);
                if got == want {
                    Ok(())
                } else {
                    Err(format!("|M| = {m}, |X| = {x}: {got} points, {want} partial surjections"))
                }
            })
        });
        self.record("|M|, |X| <= 3", "forcing locale", forcing.map(|()| "16 pairs".into()));

        let solver = (self.seed..self.seed + self.count).try_for_each(|s| {
            let p = random_presentation(s);
            if p.enumerate_points() == brute_force_points(&p) {
                Ok(())
            } else {
                Err(format!("seed {s}"))
            }
        });
        let instance = format!("seeds {}..{}", self.seed, self.seed + self.count);
        self.record(
            instance,
            "point search agrees with brute force",
            solver.map(|()| format!("{} presentations", self.count)),
        );
    }

    fn bijections(&mut self) {
        let b = self.bundle;
        let t = &b.theory;
        let n = b.params.size;
        let models = enumerate_models(t, n);
        let instance = self.instance();
        let expected = expected_sets(t, &models);
        for (layer, want) in expected {
            let outcome = decoded_set(b, &layer).and_then(|got| compare(&got, &want));
            self.record(instance.clone(), &format!("{} points biject", layer.name()), outcome);
        }
        let maps =
            b.homs().iter().find(|h| !h.is_verified()).map_or(Ok(format!("{} maps", b.homs().len())), |h| {
                Err(format!("{} is not a frame homomorphism", h.name))
            });
        self.record(instance.clone(), "structure maps", maps);
        let category =
            b.point_category(false).map(|pc| format!("{} objects, {} arrows", pc.objects.len(), pc.arrows.len()));
        self.record(instance.clone(), "point category", category.map_err(|e| e.to_string()));
        let groupoid = b.point_category(true).map_err(|e| e.to_string()).and_then(|pc| {
            if pc.category.is_groupoid() {
                Ok(format!("{} arrows", pc.arrows.len()))
            } else {
                Err("core is not a groupoid".into())
            }
        });
        self.record(instance, "core point groupoid", groupoid);
    }

    fn descent(&mut self) {
        let seeds = self.seed..self.seed + self.count;
        let instance = format!("seeds {}..{}", seeds.start, seeds.end);
        let outcome = seeds.clone().try_for_each(|s| descent_round_trip(s).map_err(|e| format!("seed {s}: {e}")));
        self.record(instance, "descent round trips", outcome.map(|()| format!("{} functors", self.count)));
    }

    fn zeta(&mut self) {
        let bases = [
            (FiniteCategory::terminal(), "terminal"),
            (FiniteCategory::codiscrete(2), "codiscrete(2)"),
            (FiniteCategory::free_arrow(), "free arrow"),
        ];
        for (k, name) in &bases {
            for core in [false, true] {
                match verify_zeta(self.bundle, k, name, core) {
                    Ok(report) => self.checks.extend(report.checks),
                    Err(e) => {
                        let instance = format!("{} over {name}{}", self.instance(), if core { " (core)" } else { "" });
                        self.record(instance, "zeta", Err(e.to_string()));
                    }
                }
            }
        }
    }
}

fn partial_surjection_count(m: usize, x: usize) -> usize {
    let total = (x + 1).pow(m as u32);
    (0..total)
        .filter(|&code| {
            let mut hit = vec![false; x];
            let mut c = code;
            for _ in 0..m {
                if c % (x + 1) > 0 {
                    hit[c % (x + 1) - 1] = true;
                }
                c /= x + 1;
            }
            hit.iter().all(|&h| h)
        })
        .count()
}

fn random_term(rng: &mut impl Rng, n: usize) -> MeetTerm {
    (0..n).filter(|_| rng.random_bool(0.25)).map(|i| GenId(i as u32)).collect()
}

fn random_presentation(seed: u64) -> Presentation {
    let mut rng = random::rng(seed);
    let n = rng.random_range(0..=8);
    let mut p = Presentation::empty(Orientation::Open);
    for i in 0..n {
        p.add_generator(Generator::new(format!("g{i}"), format!("g{i}"))).expect("fresh ids");
    }
    for _ in 0..rng.random_range(0..=6) {
        let lhs = random_term(&mut rng, n);
        let rhs: Vec<MeetTerm> = (0..rng.random_range(0..=2)).map(|_| random_term(&mut rng, n)).collect();
        p.add_relation(Sequent::new(lhs, Dnf::from_terms(rhs))).expect("generators are declared");
    }
    p
}

/// Descent of a pulled-back action recovers it, and descending an arbitrary
/// action comes with an equivariant bijection onto the pullback.
fn descent_round_trip(seed: u64) -> Result<(), String> {
    let mut rng = random::rng(seed);
    let k = random::category(&mut rng, 4);
    let (h, phi) = random::ff_surjection(&mut rng, &k, 2);
    let a = random::action(&mut rng, &k);
    let (up, _) = pullback_sheaf(&h, &phi, &a);
    let d = descend_action(&h, &k, &phi, &up)?;
    action_iso(&k, &a, &d.action).ok_or("descending a pullback does not recover the action")?;
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

/// Debug key to display string for everything a layer should decode to.
type Readings = BTreeMap<String, String>;

fn reading(t: &Theory, d: &Decoded) -> (String, String) {
    (format!("{d:?}"), DecodedDisplay { theory: t, decoded: d }.to_string())
}

fn expected_sets(t: &Theory, models: &[PerModel]) -> Vec<(Layer, Readings)> {
    let objects = models.iter().map(|m| reading(t, &Decoded::Model(m.clone()))).collect();
    let homs = |isos: bool| -> Readings {
        let mut out = Readings::new();
        for m in models {
            for n in models {
                let hs = if isos { enumerate_isos(t, m, n) } else { enumerate_homs(t, m, n) };
                out.extend(
                    hs.into_iter()
                        .map(|h| reading(t, &Decoded::Hom { domain: m.clone(), codomain: n.clone(), hom: h })),
                );
            }
        }
        out
    };
    let mut out = vec![(Layer::Objects, objects), (Layer::Arrows, homs(false)), (Layer::Core, homs(true))];
    for (s, sort) in t.signature.sorts.iter().enumerate() {
        let elements = models
            .iter()
            .flat_map(|m| (0..m.carrier(s)).map(move |c| Decoded::Element { model: m.clone(), class: c }))
            .map(|d| reading(t, &d))
            .collect();
        out.push((Layer::Bundle(sort.clone()), elements));
    }
    out
}

fn decoded_set(b: &ClassifierBundle, layer: &Layer) -> Result<Readings, String> {
    let pres = b.layer(&layer.name()).ok_or_else(|| format!("no layer {}", layer.name()))?;
    let pts = pres.enumerate_points();
    let mut out = Readings::new();
    for p in &pts {
        let d = decode_point(b, p, layer).map_err(|e| e.to_string())?;
        let (key, shown) = reading(&b.theory, &d);
        if out.insert(key, shown.clone()).is_some() {
            return Err(format!("two points decode to {shown}"));
        }
    }
    Ok(out)
}

fn compare(got: &Readings, want: &Readings) -> Result<String, String> {
    if let Some((_, shown)) = want.iter().find(|(k, _)| !got.contains_key(*k)) {
        return Err(format!("no point for {shown}"));
    }
    if let Some((_, shown)) = got.iter().find(|(k, _)| !want.contains_key(*k)) {
        return Err(format!("point decodes to {shown}, which the oracle does not produce"));
    }
    Ok(format!("{} points", got.len()))
}
