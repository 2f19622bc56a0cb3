//! Forcing locales of partial surjections and the finite universal-property
//! harness built on them.
//!
//! Fibers must fit inside the parameter set: a model whose fibers exceed
//! `|P|` is rejected, never re-forced over a larger base.

mod anafunctor;
mod generic;
mod zeta;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::category::CategoryError;
use crate::classifier::PointCategoryError;
use crate::presentation::{
    Dnf, GenId, Generator, HomError, MeetTerm, Orientation, Point, Presentation, Sequent, Solver,
};

pub use anafunctor::{build_representing_anafunctor, verify_pullback_iso, PullbackIso, RepresentingAnafunctor};
pub use generic::{generic_model, GenericModel};
pub use zeta::{enumerate_bundle_models, verify_zeta, ZetaCheck, ZetaReport};

#[derive(Debug, Error)]
pub enum ForcingError {
    #[error("fiber of sort {sort} over object {object} has {size} elements, more than the {params} parameters")]
    FiberTooLarge { sort: String, object: usize, size: usize, params: usize },
    #[error("open-basis check disagrees with satisfiability on {0}")]
    OpenCheckDisagreement(String),
    #[error("{0}")]
    NotAPoint(String),
    #[error("no isomorphism between the pulled-back models: {0}")]
    NoIso(String),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    PointCategory(#[from] PointCategoryError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Generators `[f(n) = x]` for `n < source` and `x` in each target, with
/// functionality and surjectivity per target.
#[derive(Clone, Debug)]
pub struct PartialSurjectionLocale {
    pub source: usize,
    /// `(label, elements)`; an empty label gives ids `f:n:x`, otherwise
    /// `f:label:n:x`.
    pub targets: Vec<(String, Vec<String>)>,
    pub presentation: Presentation,
    gens: Vec<Vec<Vec<GenId>>>,
    lookup: BTreeMap<GenId, (usize, usize, usize)>,
}

fn gen_id(label: &str, n: usize, x: &str) -> String {
    if label.is_empty() {
        format!("f:{n}:{x}")
    } else {
        format!("f:{label}:{n}:{x}")
    }
}

/// The locale of partial surjections from `0..m` onto `xs`.
pub fn gen_forcing_presentation<S: AsRef<str>>(m: usize, xs: &[S]) -> PartialSurjectionLocale {
    joint_forcing_presentation(m, &[(String::new(), xs.iter().map(|x| x.as_ref().to_string()).collect())])
}

/// One family of partial surjections per target, jointly.
pub fn joint_forcing_presentation(m: usize, targets: &[(String, Vec<String>)]) -> PartialSurjectionLocale {
    let mut pres = Presentation::empty(Orientation::Open);
    let mut gens = Vec::new();
    let mut lookup = BTreeMap::new();
    for (t, (label, xs)) in targets.iter().enumerate() {
        let mut per_n = Vec::new();
        for n in 0..m {
            let mut row = Vec::new();
            for (i, x) in xs.iter().enumerate() {
                let g = Generator::new(gen_id(label, n, x), format!("[f{label}({n}) = {x}]"))
                    .tagged("kind", "f")
                    .tagged("args", format!("{n},{x}"));
                let id = pres.add_generator(g).expect("fresh forcing generator");
                lookup.insert(id, (t, n, i));
                row.push(id);
            }
            per_n.push(row);
        }
        gens.push(per_n);
    }
    for (t, (_, xs)) in targets.iter().enumerate() {
        // ⋁{⊤ | x = y} is ⊤ when x = y and ⊥ otherwise; only the ⊥ cases
        // constrain anything.
        for row in &gens[t] {
            for x in 0..xs.len() {
                for y in x + 1..xs.len() {
                    let lhs: MeetTerm = [row[x], row[y]].into_iter().collect();
                    pres.add_relation(Sequent::new(lhs, Dnf::bottom())).expect("declared");
                }
            }
        }
        for x in 0..xs.len() {
            let rhs = Dnf::from_terms(gens[t].iter().map(|row| MeetTerm::single(row[x])));
            pres.add_relation(Sequent::new(MeetTerm::top(), rhs)).expect("declared");
        }
    }
    PartialSurjectionLocale { source: m, targets: targets.to_vec(), presentation: pres, gens, lookup }
}

impl PartialSurjectionLocale {
    pub fn gen(&self, target: usize, n: usize, x: usize) -> GenId {
        self.gens[target][n][x]
    }

    /// `(target, n, x)` of a generator.
    pub fn parts(&self, g: GenId) -> (usize, usize, usize) {
        self.lookup[&g]
    }

    /// Per target, `f(n)` as an element index.
    pub fn decode(&self, pt: &Point) -> Vec<Vec<Option<usize>>> {
        let mut out: Vec<Vec<Option<usize>>> = self.targets.iter().map(|_| vec![None; self.source]).collect();
        for g in pt.true_gens() {
            let (t, n, x) = self.parts(g);
            out[t][n] = Some(x);
        }
        out
    }

    pub fn encode(&self, maps: &[Vec<Option<usize>>]) -> Point {
        let ids = maps
            .iter()
            .enumerate()
            .flat_map(|(t, f)| f.iter().enumerate().filter_map(move |(n, x)| x.map(|x| self.gen(t, n, x))));
        Point::from_ids(self.presentation.gen_count(), ids)
    }

    /// Whether a meet of generators describes a single-valued partial
    /// function.
    pub fn single_valued(&self, meet: &MeetTerm) -> bool {
        let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        meet.iter().all(|g| {
            let (t, n, x) = self.parts(g);
            *seen.entry((t, n)).or_insert(x) == x
        })
    }
}

/// Whether the basic open `meet` is nonempty.
///
/// Computed twice: as single-valuedness of the encoded graph, and as
/// satisfiability in the same locale with `max |X|` fresh source indices
/// appended, which stands in for the unbounded supply of ℕ. Disagreement is
/// an error.
pub fn basis_open_check(locale: &PartialSurjectionLocale, meet: &MeetTerm) -> Result<bool, ForcingError> {
    let graph = locale.single_valued(meet);
    let pad = locale.targets.iter().map(|(_, xs)| xs.len()).max().unwrap_or(0);
    let padded = joint_forcing_presentation(locale.source + pad, &locale.targets);
    let moved: MeetTerm = meet
        .iter()
        .map(|g| {
            let (t, n, x) = locale.parts(g);
            padded.gen(t, n, x)
        })
        .collect();
    let sat = Solver::new(&padded.presentation).is_satisfiable(&moved);
    if graph != sat {
        return Err(ForcingError::OpenCheckDisagreement(locale.presentation.display_term(meet)));
    }
    Ok(graph)
}
