//! Finite frame presentations `⟨G | R⟩` with sequent relations `⋀ ⊢ ⋁⋀`.
//!
//! Points are subsets of generators satisfying every relation. Entailment is
//! decided by searching for a refuting point ([`Solver`]); the forward-chaining
//! prover in [`saturation`] decides the same relation syntactically and the
//! two are cross-checked in tests.

mod construct;
mod dnf;
mod hom;
pub mod json;
pub mod saturation;
mod solver;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;

pub use construct::{
    add_relations, canonical_presentation, expand_presentation, relative_product, ExpandedPresentation, FiberExtension,
    RelationSpec, Span,
};
pub use dnf::{Dnf, MeetTerm};
pub use hom::{check_frame_hom, compose_homs, iso_check, point_pushforward, FrameHomSpec, HomError};
pub use solver::{brute_force_points, Solver};

/// Index of a generator within its presentation, in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenId(pub u32);

impl GenId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub display: String,
    pub tags: BTreeMap<String, String>,
}

impl Generator {
    pub fn new(id: impl Into<String>, display: impl Into<String>) -> Self {
        Generator { id: id.into(), display: display.into(), tags: BTreeMap::new() }
    }

    pub fn tagged(mut self, key: &str, value: impl Into<String>) -> Self {
        self.tags.insert(key.to_string(), value.into());
        self
    }
}

/// `lhs ⊢ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: MeetTerm,
    pub rhs: Dnf,
}

impl Sequent {
    pub fn new(lhs: MeetTerm, rhs: Dnf) -> Self {
        Sequent { lhs, rhs }
    }

    fn max_gen(&self) -> Option<GenId> {
        self.lhs.iter().chain(self.rhs.terms().iter().flat_map(|t| t.iter())).max()
    }
}

/// Open or closed reading of the generators; carried as metadata only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Open,
    Closed,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("duplicate generator id `{0}`")]
    DuplicateGenerator(String),
    #[error("undeclared generator {0}")]
    UndeclaredGenerator(String),
    #[error("generator name `{0}` collides after suffixing")]
    NameCollision(String),
    #[error("invalid span: {0}")]
    InvalidSpan(String),
}

#[derive(Clone)]
pub struct Presentation {
    generators: Vec<Generator>,
    index: HashMap<String, GenId>,
    relations: Vec<Sequent>,
    orientation: Orientation,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
            && self.relations == other.relations
            && self.orientation == other.orientation
    }
}

impl Eq for Presentation {}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation({} generators, {} relations)", self.generators.len(), self.relations.len())
    }
}

impl Presentation {
    pub fn empty(orientation: Orientation) -> Self {
        Presentation { generators: Vec::new(), index: HashMap::new(), relations: Vec::new(), orientation }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.generators[g.index()]
    }

    pub fn gen_count(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Sequent] {
        &self.relations
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn lookup(&self, id: &str) -> Option<GenId> {
        self.index.get(id).copied()
    }

    pub fn gen_ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.generators.len() as u32).map(GenId)
    }

    pub fn add_generator(&mut self, generator: Generator) -> Result<GenId, PresentationError> {
        if self.index.contains_key(&generator.id) {
            return Err(PresentationError::DuplicateGenerator(generator.id));
        }
        let id = GenId(self.generators.len() as u32);
        self.index.insert(generator.id.clone(), id);
        self.generators.push(generator);
        Ok(id)
    }

    pub fn add_relation(&mut self, seq: Sequent) -> Result<(), PresentationError> {
        self.check_sequent(&seq)?;
        self.relations.push(seq);
        Ok(())
    }

    pub fn check_sequent(&self, seq: &Sequent) -> Result<(), PresentationError> {
        match seq.max_gen() {
            Some(g) if g.index() >= self.generators.len() => {
                Err(PresentationError::UndeclaredGenerator(format!("#{}", g.0)))
            }
            _ => Ok(()),
        }
    }

    /// Resolves a generator by id, failing with [`PresentationError::UndeclaredGenerator`].
    pub fn gen(&self, id: &str) -> Result<GenId, PresentationError> {
        self.lookup(id).ok_or_else(|| PresentationError::UndeclaredGenerator(id.to_string()))
    }

    pub fn term_by_ids<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<MeetTerm, PresentationError> {
        ids.into_iter().map(|s| self.gen(s)).collect::<Result<Vec<_>, _>>().map(MeetTerm::from_iter)
    }

    pub fn display_term(&self, t: &MeetTerm) -> String {
        if t.is_top() {
            return "⊤".to_string();
        }
        t.iter().map(|g| self.generator(g).display.as_str()).collect::<Vec<_>>().join(" ∧ ")
    }

    pub fn display_dnf(&self, d: &Dnf) -> String {
        if d.is_bottom() {
            return "⊥".to_string();
        }
        d.terms()
            .iter()
            .map(|t| if t.len() > 1 { format!("({})", self.display_term(t)) } else { self.display_term(t) })
            .collect::<Vec<_>>()
            .join(" ∨ ")
    }

    pub fn display_sequent(&self, s: &Sequent) -> String {
        format!("{} ⊢ {}", self.display_term(&s.lhs), self.display_dnf(&s.rhs))
    }

    /// True iff the sequent holds in every point.
    pub fn entails(&self, seq: &Sequent) -> Result<bool, PresentationError> {
        self.check_sequent(seq)?;
        Ok(Solver::new(self).entails(&seq.lhs, &seq.rhs).is_none())
    }

    /// All points in ascending bitmask order.
    pub fn enumerate_points(&self) -> Vec<Point> {
        Solver::new(self).all_points()
    }

    pub fn is_point(&self, pt: &Point) -> bool {
        pt.len() == self.gen_count() && self.relations.iter().all(|r| pt.satisfies(r))
    }

    /// Builds a point by asking `truth` about each generator id, checking the relations.
    pub fn point_from_fn(&self, mut truth: impl FnMut(&str) -> bool) -> Option<Point> {
        let pt = Point::from_ids(
            self.gen_count(),
            self.generators.iter().enumerate().filter(|(_, g)| truth(&g.id)).map(|(i, _)| GenId(i as u32)),
        );
        self.is_point(&pt).then_some(pt)
    }
}

/// A subset of generators; a point when it satisfies every relation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    bits: BitSet,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.bits)
    }
}

impl Point {
    pub fn from_bits(bits: BitSet) -> Self {
        Point { bits }
    }

    pub fn from_ids(len: usize, ids: impl IntoIterator<Item = GenId>) -> Self {
        Point { bits: BitSet::from_indices(len, ids.into_iter().map(GenId::index)) }
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn contains(&self, g: GenId) -> bool {
        self.bits.contains(g.index())
    }

    pub fn count_true(&self) -> usize {
        self.bits.count()
    }

    pub fn true_gens(&self) -> impl Iterator<Item = GenId> + '_ {
        self.bits.iter().map(|i| GenId(i as u32))
    }

    pub fn satisfies_term(&self, t: &MeetTerm) -> bool {
        t.iter().all(|g| self.contains(g))
    }

    pub fn satisfies_dnf(&self, d: &Dnf) -> bool {
        d.terms().iter().any(|t| self.satisfies_term(t))
    }

    pub fn satisfies(&self, s: &Sequent) -> bool {
        !self.satisfies_term(&s.lhs) || self.satisfies_dnf(&s.rhs)
    }

    pub fn true_ids<'a>(&'a self, pres: &'a Presentation) -> impl Iterator<Item = &'a str> + 'a {
        self.true_gens().map(move |g| pres.generator(g).id.as_str())
    }

    pub fn has(&self, pres: &Presentation, id: &str) -> bool {
        pres.lookup(id).is_some_and(|g| self.contains(g))
    }
}
