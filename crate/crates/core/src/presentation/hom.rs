//! Frame homomorphisms out of presented frames.
//!
//! A hom `f*: O(S) → O(T)` is given on generators of `S` as formulas over `T`.
//! It is well defined iff every relation of `S` maps to an entailment of `T`;
//! the dual locale map sends points of `T` to points of `S`.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use super::dnf::substitute_term;
use super::{Dnf, GenId, MeetTerm, Point, Presentation, Solver};

#[derive(Clone, Debug)]
pub struct FrameHomSpec {
    pub name: String,
    pub source: Arc<Presentation>,
    pub target: Arc<Presentation>,
    map: Vec<Dnf>,
    verified: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("map has {got} entries but the source has {want} generators")]
    NotTotal { got: usize, want: usize },
    #[error("image of `{generator}` mentions a generator outside the target")]
    OutOfRange { generator: String },
    #[error("{hom}: relation #{index} `{relation}` is not preserved; countermodel {countermodel:?}")]
    RelationFails { hom: String, index: usize, relation: String, countermodel: Vec<String> },
    #[error("{0} has not been verified")]
    Unverified(String),
    #[error("presentations do not match: {0}")]
    Mismatch(String),
}

impl FrameHomSpec {
    pub fn new(
        name: impl Into<String>,
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        map: Vec<Dnf>,
    ) -> Result<Self, HomError> {
        if map.len() != source.gen_count() {
            return Err(HomError::NotTotal { got: map.len(), want: source.gen_count() });
        }
        let n = target.gen_count();
        for (i, d) in map.iter().enumerate() {
            if d.terms().iter().flat_map(|t| t.iter()).any(|g| g.index() >= n) {
                return Err(HomError::OutOfRange { generator: source.generator(GenId(i as u32)).id.clone() });
            }
        }
        Ok(FrameHomSpec { name: name.into(), source, target, map, verified: false })
    }

    /// Builds a hom from a generator-id table; `f` returns the image as
    /// a list of meet terms, each a list of target ids.
    pub fn from_table(
        name: impl Into<String>,
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        f: impl Fn(&str) -> Vec<Vec<String>>,
    ) -> Result<Self, HomError> {
        let mut map = Vec::with_capacity(source.gen_count());
        for g in source.generators() {
            let mut terms = Vec::new();
            for t in f(&g.id) {
                let term = target
                    .term_by_ids(t.iter().map(String::as_str))
                    .map_err(|_| HomError::OutOfRange { generator: g.id.clone() })?;
                terms.push(term);
            }
            map.push(Dnf::from_terms(terms));
        }
        FrameHomSpec::new(name, source, target, map)
    }

    pub fn identity(pres: Arc<Presentation>) -> Self {
        let map = pres.gen_ids().map(Dnf::single).collect();
        FrameHomSpec { name: "id".into(), source: pres.clone(), target: pres, map, verified: true }
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn image(&self, g: GenId) -> &Dnf {
        &self.map[g.index()]
    }

    pub fn table(&self) -> &[Dnf] {
        &self.map
    }

    pub fn image_term(&self, t: &MeetTerm) -> Dnf {
        substitute_term(t, &|g| self.map[g.index()].clone())
    }

    pub fn image_dnf(&self, d: &Dnf) -> Dnf {
        d.substitute(&|g| self.map[g.index()].clone())
    }

    /// Checks every relation of the source against the target.
    pub fn verify(mut self) -> Result<Self, HomError> {
        let solver = Solver::new(&self.target);
        let mut obligations = Vec::new();
        for (i, r) in self.source.relations().iter().enumerate() {
            let lhs = self.image_term(&r.lhs);
            let rhs = self.image_dnf(&r.rhs);
            for t in lhs.terms() {
                obligations.push((i, t.clone(), rhs.clone()));
            }
        }
        let failure = obligations.par_iter().find_map_first(|(i, t, rhs)| solver.entails(t, rhs).map(|pt| (*i, pt)));
        if let Some((index, pt)) = failure {
            let relation = self.source.display_sequent(&self.source.relations()[index]);
            let countermodel = pt.true_ids(&self.target).map(str::to_string).collect();
            return Err(HomError::RelationFails { hom: self.name.clone(), index, relation, countermodel });
        }
        self.verified = true;
        Ok(self)
    }
}

pub fn check_frame_hom(spec: FrameHomSpec) -> Result<FrameHomSpec, HomError> {
    spec.verify()
}

/// Sends a point of the target to the point of the source it induces.
pub fn point_pushforward(hom: &FrameHomSpec, pt: &Point) -> Result<Point, HomError> {
    if !hom.verified {
        return Err(HomError::Unverified(hom.name.clone()));
    }
    if pt.len() != hom.target.gen_count() {
        return Err(HomError::Mismatch(format!(
            "point has width {}, target has {} generators",
            pt.len(),
            hom.target.gen_count()
        )));
    }
    let n = hom.source.gen_count();
    Ok(Point::from_ids(n, hom.source.gen_ids().filter(|g| pt.satisfies_dnf(&hom.map[g.index()]))))
}

/// `f: A → B` then `g: B → C`, as frame homs `O(A) → O(C)`.
pub fn compose_homs(f: &FrameHomSpec, g: &FrameHomSpec) -> Result<FrameHomSpec, HomError> {
    if *f.target != *g.source {
        return Err(HomError::Mismatch(format!("target of {} is not the source of {}", f.name, g.name)));
    }
    let map = f.map.iter().map(|d| g.image_dnf(d)).collect();
    Ok(FrameHomSpec {
        name: format!("{};{}", f.name, g.name),
        source: f.source.clone(),
        target: g.target.clone(),
        map,
        verified: f.verified && g.verified,
    })
}

/// True iff both composites fix every generator up to two-way entailment.
pub fn iso_check(f: &FrameHomSpec, g: &FrameHomSpec) -> Result<bool, HomError> {
    let fg = compose_homs(f, g)?;
    let gf = compose_homs(g, f)?;
    Ok(fixes_generators(&fg) && fixes_generators(&gf))
}

fn fixes_generators(h: &FrameHomSpec) -> bool {
    let solver = Solver::new(&h.source);
    h.source.gen_ids().all(|g| {
        let img = &h.map[g.index()];
        let single = Dnf::single(g);
        solver.entails(&MeetTerm::single(g), img).is_none()
            && img.terms().iter().all(|t| solver.entails(t, &single).is_none())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{Generator, Orientation, Sequent};

    fn pres(names: &[&str], rels: &[(&[&str], &[&[&str]])]) -> Arc<Presentation> {
        let mut p = Presentation::empty(Orientation::Open);
        for n in names {
            p.add_generator(Generator::new(*n, *n)).unwrap();
        }
        for (l, r) in rels {
            let lhs = p.term_by_ids(l.iter().copied()).unwrap();
            let rhs = Dnf::from_terms(r.iter().map(|t| p.term_by_ids(t.iter().copied()).unwrap()));
            p.add_relation(Sequent::new(lhs, rhs)).unwrap();
        }
        Arc::new(p)
    }

    fn table(pairs: &[(&str, &[&[&str]])]) -> impl Fn(&str) -> Vec<Vec<String>> {
        let owned: Vec<(String, Vec<Vec<String>>)> = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|t| t.iter().map(|s| s.to_string()).collect()).collect()))
            .collect();
        move |id| owned.iter().find(|(k, _)| k == id).map(|(_, v)| v.clone()).unwrap()
    }

    #[test]
    fn identity_verifies_and_fixes_points() {
        let p = pres(&["a", "b"], &[(&["a"], &[&["b"]])]);
        let id = FrameHomSpec::identity(p.clone()).verify().unwrap();
        for pt in p.enumerate_points() {
            assert_eq!(point_pushforward(&id, &pt).unwrap(), pt);
        }
        assert!(iso_check(&id, &id).unwrap());
    }

    #[test]
    fn forced_failure_reports_relation() {
        let src = pres(&["a"], &[(&[], &[&["a"]])]);
        let tgt = pres(&["b"], &[]);
        let h = FrameHomSpec::from_table("kill", src, tgt, table(&[("a", &[])])).unwrap();
        match h.verify() {
            Err(HomError::RelationFails { index, relation, .. }) => {
                assert_eq!(index, 0);
                assert_eq!(relation, "⊤ ⊢ a");
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn pushforward_renames() {
        let src = pres(&["a"], &[]);
        let tgt = pres(&["b"], &[]);
        let h = FrameHomSpec::from_table("ab", src, tgt.clone(), table(&[("a", &[&["b"]])])).unwrap().verify().unwrap();
        let pt = Point::from_ids(1, [GenId(0)]);
        assert_eq!(point_pushforward(&h, &pt).unwrap(), Point::from_ids(1, [GenId(0)]));
        let unverified = FrameHomSpec::from_table("ab", h.source.clone(), tgt, table(&[("a", &[&["b"]])])).unwrap();
        assert!(point_pushforward(&unverified, &pt).is_err());
    }

    #[test]
    fn non_iso_detected() {
        let a = pres(&["a"], &[]);
        let b = pres(&["b"], &[]);
        let f = FrameHomSpec::from_table("f", a.clone(), b.clone(), table(&[("a", &[&["b"]])])).unwrap();
        let g = FrameHomSpec::from_table("g", b, a, table(&[("b", &[])])).unwrap();
        assert!(!iso_check(&f, &g).unwrap());
        assert!(compose_homs(&f, &f).is_err());
    }
}
