//! Presentations of the classifier of a theory over a finite parameter set.
//!
//! The parameter set stands in for ℕ (or Cantor space); the generated
//! presentations are the finite truncation, so only the points and maps
//! visible at this size are claimed to match the infinite construction.

mod io;
pub mod names;
mod points;
mod schema;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::presentation::{
    relative_product, Dnf, FiberExtension, FrameHomSpec, HomError, MeetTerm, Orientation, Point, Presentation,
    PresentationError, Sequent,
};
use crate::theory::{Formula, Theory, TheoryErrorKind, TheoryOrientation};

pub use io::{read_bundle, write_bundle, BundleIoError, BundleManifest, LoadedBundle};
pub use points::{PointCategory, PointCategoryError, PointTables};
pub use schema::lower_formula;

use names::{copy, tuples};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParameterRole {
    Naturals,
    Cantor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParameterSet {
    pub size: usize,
    pub role: ParameterRole,
}

impl ParameterSet {
    pub fn new(size: usize, orientation: TheoryOrientation) -> Self {
        let role = match orientation {
            TheoryOrientation::LH => ParameterRole::Naturals,
            TheoryOrientation::PS => ParameterRole::Cantor,
        };
        ParameterSet { size, role }
    }

    pub fn orientation(&self) -> Orientation {
        match self.role {
            ParameterRole::Naturals => Orientation::Open,
            ParameterRole::Cantor => Orientation::Closed,
        }
    }
}

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("variable `{0}` is not bound by the parameter context")]
    ContextMismatch(String),
    #[error("invalid theory: {0}")]
    Theory(TheoryErrorKind),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Objects presentation: one `[p ∼ q]` per sort and pair, one `[p⃗ ∈ R]` per
/// relation and tuple.
pub fn gen_objects(theory: &Theory, params: ParameterSet) -> Result<Presentation, ClassifierError> {
    theory.validate().map_err(ClassifierError::Theory)?;
    let mut pres = Presentation::empty(params.orientation());
    schema::add_objects(&mut pres, theory, params.size, None)?;
    Ok(pres)
}

fn arrow_presentation(theory: &Theory, params: ParameterSet, core: bool) -> Result<Presentation, ClassifierError> {
    theory.validate().map_err(ClassifierError::Theory)?;
    let n = params.size;
    let mut pres = Presentation::empty(params.orientation());
    schema::add_objects(&mut pres, theory, n, Some(1))?;
    schema::add_objects(&mut pres, theory, n, Some(2))?;
    schema::add_transport(&mut pres, theory, n, "alpha", Some(1), Some(2), core)?;
    Ok(pres)
}

fn pair_presentation(theory: &Theory, params: ParameterSet, core: bool) -> Result<Presentation, ClassifierError> {
    let n = params.size;
    let mut pres = Presentation::empty(params.orientation());
    for c in 1..=3 {
        schema::add_objects(&mut pres, theory, n, Some(c))?;
    }
    schema::add_transport(&mut pres, theory, n, "beta", Some(1), Some(2), core)?;
    schema::add_transport(&mut pres, theory, n, "gamma", Some(2), Some(3), core)?;
    Ok(pres)
}

/// Arrows presentation: objects copies `@1` (domain) and `@2` (codomain)
/// joined by `[α(p) = q]`.
pub fn gen_arrows(theory: &Theory, params: ParameterSet) -> Result<Presentation, ClassifierError> {
    arrow_presentation(theory, params, false)
}

/// Arrows presentation with α forced to be an isomorphism.
pub fn gen_core(theory: &Theory, params: ParameterSet) -> Result<Presentation, ClassifierError> {
    arrow_presentation(theory, params, true)
}

fn single(id: String) -> Vec<Vec<String>> {
    vec![vec![id]]
}

/// Splits `base@c` into `(base, c)`.
fn split_copy(id: &str) -> Option<(&str, usize)> {
    let (base, c) = id.rsplit_once('@')?;
    Some((base, c.parse().ok()?))
}

fn transport_parts(id: &str) -> Option<(&str, &str, usize, usize)> {
    let mut it = id.split(':');
    let kind = it.next()?;
    let sort = it.next()?;
    let p = it.next()?.parse().ok()?;
    let q = it.next()?.parse().ok()?;
    Some((kind, sort, p, q))
}

fn hom(
    name: &str,
    source: &Arc<Presentation>,
    target: &Arc<Presentation>,
    f: impl Fn(&str) -> Vec<Vec<String>>,
) -> Result<FrameHomSpec, ClassifierError> {
    Ok(FrameHomSpec::from_table(name, source.clone(), target.clone(), f)?.verify()?)
}

/// `g ↦ g@c`.
fn object_copy_hom(
    name: &str,
    g0: &Arc<Presentation>,
    arrows: &Arc<Presentation>,
    c: usize,
) -> Result<FrameHomSpec, ClassifierError> {
    hom(name, g0, arrows, |id| single(copy(id, Some(c))))
}

/// `g@c ↦ g`, `[α(p) = q] ↦ [p ∼ q]`.
fn unit_hom(name: &str, arrows: &Arc<Presentation>, g0: &Arc<Presentation>) -> Result<FrameHomSpec, ClassifierError> {
    hom(name, arrows, g0, |id| match split_copy(id) {
        Some((base, _)) => single(base.to_string()),
        None => {
            let (_, sort, p, q) = transport_parts(id).expect("transport id");
            single(names::sim(sort, p, q))
        }
    })
}

/// `@1 ↦ @1`, `@2 ↦ @3`, `[α(p) = r] ↦ ⋁_q [β(p) = q] ∧ [γ(q) = r]`.
fn composition_hom(
    name: &str,
    arrows: &Arc<Presentation>,
    pair: &Arc<Presentation>,
    n: usize,
) -> Result<FrameHomSpec, ClassifierError> {
    hom(name, arrows, pair, |id| match split_copy(id) {
        Some((base, 1)) => single(copy(base, Some(1))),
        Some((base, _)) => single(copy(base, Some(3))),
        None => {
            let (_, sort, p, r) = transport_parts(id).expect("transport id");
            (0..n).map(|q| vec![names::transport("beta", sort, p, q), names::transport("gamma", sort, q, r)]).collect()
        }
    })
}

/// `@1 ↔ @2`, `[α(p) = q] ↦ [α(q) = p]`.
fn inverse_hom(name: &str, core: &Arc<Presentation>) -> Result<FrameHomSpec, ClassifierError> {
    hom(name, core, core, |id| match split_copy(id) {
        Some((base, c)) => single(copy(base, Some(3 - c))),
        None => {
            let (_, sort, p, q) = transport_parts(id).expect("transport id");
            single(names::alpha(sort, q, p))
        }
    })
}

/// The generic bundle over one sort together with its action.
#[derive(Clone, Debug)]
pub struct SortBundle {
    pub sort: String,
    /// `E_A`: objects plus `[≡ p]`.
    pub e: Arc<Presentation>,
    /// `ρ*: O(G₀) → O(E_A)`, the inclusion.
    pub rho: FrameHomSpec,
    /// `E_A ×_{G₀} G₁` along the domain map.
    pub pullback: Arc<Presentation>,
    /// `θ*: O(E_A) → O(E_A ×_{G₀} G₁)`.
    pub theta: FrameHomSpec,
}

/// The sublocale of `E_{A₁} ×_{G₀} … ×_{G₀} E_{A_k}` interpreting a relation.
#[derive(Clone, Debug)]
pub struct RelationSublocale {
    pub relation: String,
    pub product: Arc<Presentation>,
    pub extra: Vec<Sequent>,
    pub presentation: Arc<Presentation>,
}

#[derive(Clone, Debug)]
pub struct ClassifierBundle {
    pub theory: Theory,
    pub params: ParameterSet,
    pub g0: Arc<Presentation>,
    pub g1: Arc<Presentation>,
    pub g1_core: Arc<Presentation>,
    /// Composable pairs `G₁ ×_{G₀} G₁`.
    pub g1_pair: Arc<Presentation>,
    pub core_pair: Arc<Presentation>,
    pub s: FrameHomSpec,
    pub t: FrameHomSpec,
    pub e: FrameHomSpec,
    pub m: FrameHomSpec,
    pub core_s: FrameHomSpec,
    pub core_t: FrameHomSpec,
    pub core_e: FrameHomSpec,
    pub core_m: FrameHomSpec,
    pub i: FrameHomSpec,
    /// `O(G₁) → O(core)`, identity on generators.
    pub core_inclusion: FrameHomSpec,
    pub per_sort: BTreeMap<String, SortBundle>,
    pub rel_subs: BTreeMap<String, RelationSublocale>,
}

pub(crate) fn equiv_fiber(theory: &Theory, n: usize, sort: &str, c: Option<usize>) -> FiberExtension {
    schema::equiv_extension(theory, n, sort, c)
}

/// `E_A` for one sort.
pub fn gen_sort_bundle(
    theory: &Theory,
    params: ParameterSet,
    g0: &Arc<Presentation>,
    g1: &Presentation,
    sort: &str,
) -> Result<SortBundle, ClassifierError> {
    let n = params.size;
    let e = Arc::new(relative_product(g0, &[equiv_fiber(theory, n, sort, None)])?);
    let rho = hom(&format!("rho:{sort}"), g0, &e, |id| single(id.to_string()))?;
    let pullback = Arc::new(relative_product(g1, &[equiv_fiber(theory, n, sort, Some(1))])?);
    let theta = hom(&format!("theta:{sort}"), &e, &pullback, |id| {
        if id.starts_with("equiv:") {
            let q: usize = id.rsplit(':').next().unwrap().parse().unwrap();
            (0..n).map(|p| vec![names::equiv(sort, 1, p), names::alpha(sort, p, q)]).collect()
        } else {
            single(copy(id, Some(2)))
        }
    })?;
    Ok(SortBundle { sort: sort.to_string(), e, rho, pullback, theta })
}

/// `⊤ ⊢ ⋁_{p⃗} φ_{p⃗} ∧ ⋀ᵢ [≡ᵢ pᵢ]` over the relative product of the context's
/// sort bundles.
fn interpretation_relation(
    theory: &Theory,
    product: &Presentation,
    n: usize,
    context: &[(String, String)],
    formula: &Formula,
) -> Result<Sequent, ClassifierError> {
    let mut rhs = Vec::new();
    for ps in tuples(n, context.len()) {
        let env: Vec<(String, String, usize)> =
            context.iter().zip(&ps).map(|((v, s), &p)| (v.clone(), s.clone(), p)).collect();
        let classes: MeetTerm = env
            .iter()
            .enumerate()
            .map(|(i, (_, s, p))| product.gen(&names::equiv(s, i + 1, *p)))
            .collect::<Result<_, _>>()?;
        let body = lower_formula(theory, product, n, None, formula, &env)?;
        rhs.push(body.meet(&Dnf::term(classes)));
    }
    Ok(Sequent::new(MeetTerm::top(), Dnf::join_all(rhs)))
}

/// Relative product of the context's sort bundles, one copy per variable.
pub fn context_product(
    theory: &Theory,
    params: ParameterSet,
    context: &[(String, String)],
) -> Result<Presentation, ClassifierError> {
    let g0 = gen_objects(theory, params)?;
    let fibers: Vec<FiberExtension> = context.iter().map(|(_, s)| equiv_fiber(theory, params.size, s, None)).collect();
    Ok(relative_product(&g0, &fibers)?)
}

/// The sublocale of the context product cut out by `formula`.
pub fn interpret_in_e(
    theory: &Theory,
    params: ParameterSet,
    context: &[(String, String)],
    formula: &Formula,
) -> Result<Presentation, ClassifierError> {
    let mut product = context_product(theory, params, context)?;
    let rel = interpretation_relation(theory, &product, params.size, context, formula)?;
    product.add_relation(rel)?;
    Ok(product)
}

impl ClassifierBundle {
    /// Generates every presentation and verifies every structure map.
    pub fn generate(theory: &Theory, params: ParameterSet) -> Result<Self, ClassifierError> {
        let n = params.size;
        let g0 = Arc::new(gen_objects(theory, params)?);
        let g1 = Arc::new(gen_arrows(theory, params)?);
        let g1_core = Arc::new(gen_core(theory, params)?);
        let g1_pair = Arc::new(pair_presentation(theory, params, false)?);
        let core_pair = Arc::new(pair_presentation(theory, params, true)?);

        let s = object_copy_hom("s", &g0, &g1, 1)?;
        let t = object_copy_hom("t", &g0, &g1, 2)?;
        let e = unit_hom("e", &g1, &g0)?;
        let m = composition_hom("m", &g1, &g1_pair, n)?;
        let core_s = object_copy_hom("core_s", &g0, &g1_core, 1)?;
        let core_t = object_copy_hom("core_t", &g0, &g1_core, 2)?;
        let core_e = unit_hom("core_e", &g1_core, &g0)?;
        let core_m = composition_hom("core_m", &g1_core, &core_pair, n)?;
        let i = inverse_hom("i", &g1_core)?;
        let core_inclusion = hom("core_inclusion", &g1, &g1_core, |id| single(id.to_string()))?;

        let mut per_sort = BTreeMap::new();
        for sort in &theory.signature.sorts {
            per_sort.insert(sort.clone(), gen_sort_bundle(theory, params, &g0, &g1, sort)?);
        }
        let mut rel_subs = BTreeMap::new();
        for r in &theory.signature.relations {
            let context: Vec<(String, String)> =
                r.arity.iter().enumerate().map(|(i, s)| (format!("x{i}"), s.clone())).collect();
            let vars: Vec<&str> = context.iter().map(|(v, _)| v.as_str()).collect();
            let product = Arc::new(context_product(theory, params, &context)?);
            let extra = vec![interpretation_relation(theory, &product, n, &context, &Formula::rel(&r.name, &vars))?];
            let mut sub = (*product).clone();
            for x in &extra {
                sub.add_relation(x.clone())?;
            }
            rel_subs.insert(
                r.name.clone(),
                RelationSublocale { relation: r.name.clone(), product, extra, presentation: Arc::new(sub) },
            );
        }
        Ok(ClassifierBundle {
            theory: theory.clone(),
            params,
            g0,
            g1,
            g1_core,
            g1_pair,
            core_pair,
            s,
            t,
            e,
            m,
            core_s,
            core_t,
            core_e,
            core_m,
            i,
            core_inclusion,
            per_sort,
            rel_subs,
        })
    }

    /// All structure maps, in a fixed order.
    pub fn homs(&self) -> Vec<&FrameHomSpec> {
        let mut out = vec![
            &self.s,
            &self.t,
            &self.e,
            &self.m,
            &self.core_s,
            &self.core_t,
            &self.core_e,
            &self.core_m,
            &self.i,
            &self.core_inclusion,
        ];
        for b in self.per_sort.values() {
            out.push(&b.rho);
            out.push(&b.theta);
        }
        out
    }

    /// The point of the composable-pair presentation built from two arrow
    /// points with `t(f) = s(g)`.
    pub fn pair_point(&self, f: &Point, g: &Point, core: bool) -> Option<Point> {
        let (arrows, pair) = if core { (&self.g1_core, &self.core_pair) } else { (&self.g1, &self.g1_pair) };
        let f_true: Vec<&str> = f.true_ids(arrows).collect();
        let g_true: Vec<&str> = g.true_ids(arrows).collect();
        let side = |pt: &[&str], c: usize| -> Vec<String> {
            pt.iter().filter_map(|id| split_copy(id)).filter(|(_, k)| *k == c).map(|(b, _)| b.to_string()).collect()
        };
        if side(&f_true, 2) != side(&g_true, 1) {
            return None;
        }
        let mut ids = Vec::new();
        for (pt, shift, kind) in [(&f_true, 0, "beta"), (&g_true, 1, "gamma")] {
            for id in pt.iter() {
                match split_copy(id) {
                    Some((base, c)) => ids.push(copy(base, Some(c + shift))),
                    None => {
                        let (_, sort, p, q) = transport_parts(id)?;
                        ids.push(names::transport(kind, sort, p, q));
                    }
                }
            }
        }
        let gens = ids.iter().map(|id| pair.lookup(id)).collect::<Option<Vec<_>>>()?;
        let pt = Point::from_ids(pair.gen_count(), gens);
        pair.is_point(&pt).then_some(pt)
    }

    /// `objects`, `arrows`, `core` or `E:<sort>`.
    pub fn layer(&self, name: &str) -> Option<&Arc<Presentation>> {
        match name {
            "objects" => Some(&self.g0),
            "arrows" => Some(&self.g1),
            "core" => Some(&self.g1_core),
            _ => name.strip_prefix("E:").and_then(|s| self.per_sort.get(s)).map(|b| &b.e),
        }
    }
}
