//! Meet terms and antichain disjunctive normal forms.

use std::collections::BTreeSet;

use super::GenId;

/// A finite meet of generators; the empty meet is `⊤`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MeetTerm(Vec<GenId>);

impl MeetTerm {
    pub fn top() -> Self {
        MeetTerm(Vec::new())
    }

    pub fn single(g: GenId) -> Self {
        MeetTerm(vec![g])
    }

    pub fn is_top(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = GenId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[GenId] {
        &self.0
    }

    pub fn contains(&self, g: GenId) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn is_subset(&self, other: &MeetTerm) -> bool {
        self.0.iter().all(|g| other.contains(*g))
    }

    pub fn meet(&self, other: &MeetTerm) -> MeetTerm {
        self.iter().chain(other.iter()).collect()
    }
}

impl FromIterator<GenId> for MeetTerm {
    fn from_iter<I: IntoIterator<Item = GenId>>(iter: I) -> Self {
        let set: BTreeSet<GenId> = iter.into_iter().collect();
        MeetTerm(set.into_iter().collect())
    }
}

/// A finite join of meet terms kept as an antichain: no term contains
/// another. The empty join is `⊥`; `⊤` is the join containing the empty meet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Dnf(Vec<MeetTerm>);

impl Dnf {
    pub fn bottom() -> Self {
        Dnf(Vec::new())
    }

    pub fn top() -> Self {
        Dnf(vec![MeetTerm::top()])
    }

    pub fn single(g: GenId) -> Self {
        Dnf(vec![MeetTerm::single(g)])
    }

    pub fn term(t: MeetTerm) -> Self {
        Dnf(vec![t])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = MeetTerm>) -> Self {
        let mut all: Vec<MeetTerm> = terms.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut kept: Vec<MeetTerm> = Vec::with_capacity(all.len());
        for t in all {
            if !kept.iter().any(|k| k.is_subset(&t)) {
                kept.push(t);
            }
        }
        kept.sort();
        Dnf(kept)
    }

    pub fn terms(&self) -> &[MeetTerm] {
        &self.0
    }

    pub fn is_bottom(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_top(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_top()
    }

    pub fn join(&self, other: &Dnf) -> Dnf {
        Dnf::from_terms(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn meet(&self, other: &Dnf) -> Dnf {
        Dnf::from_terms(self.0.iter().flat_map(|a| other.0.iter().map(move |b| a.meet(b))))
    }

    pub fn join_all(ds: impl IntoIterator<Item = Dnf>) -> Dnf {
        Dnf::from_terms(ds.into_iter().flat_map(|d| d.0))
    }

    pub fn meet_all(ds: impl IntoIterator<Item = Dnf>) -> Dnf {
        ds.into_iter().fold(Dnf::top(), |acc, d| acc.meet(&d))
    }

    /// Replaces every generator by a formula and renormalises.
    pub fn substitute(&self, f: &impl Fn(GenId) -> Dnf) -> Dnf {
        Dnf::join_all(self.0.iter().map(|t| substitute_term(t, f)))
    }
}

pub(crate) fn substitute_term(t: &MeetTerm, f: &impl Fn(GenId) -> Dnf) -> Dnf {
    Dnf::meet_all(t.iter().map(f))
}

impl From<MeetTerm> for Dnf {
    fn from(t: MeetTerm) -> Self {
        Dnf::term(t)
    }
}
