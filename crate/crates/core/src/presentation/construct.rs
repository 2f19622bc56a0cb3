//! Sublocales, relative products, canonical and expanded presentations.

use super::{Dnf, GenId, Generator, MeetTerm, Orientation, Point, Presentation, PresentationError, Sequent};

/// Imposes extra relations; the points are those of `pres` satisfying `extra`.
pub fn add_relations(pres: &Presentation, extra: &[Sequent]) -> Result<Presentation, PresentationError> {
    let mut out = pres.clone();
    for s in extra {
        out.add_relation(s.clone())?;
    }
    Ok(out)
}

/// A relation written with generator ids, resolved when it is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSpec {
    pub lhs: Vec<String>,
    pub rhs: Vec<Vec<String>>,
}

impl RelationSpec {
    pub fn new(lhs: Vec<String>, rhs: Vec<Vec<String>>) -> Self {
        RelationSpec { lhs, rhs }
    }

    pub fn resolve(&self, pres: &Presentation, rename: impl Fn(&str) -> String) -> Result<Sequent, PresentationError> {
        let lhs =
            pres.term_by_ids(self.lhs.iter().map(|s| rename(s)).collect::<Vec<_>>().iter().map(String::as_str))?;
        let mut terms = Vec::with_capacity(self.rhs.len());
        for t in &self.rhs {
            let names: Vec<String> = t.iter().map(|s| rename(s)).collect();
            terms.push(pres.term_by_ids(names.iter().map(String::as_str))?);
        }
        Ok(Sequent::new(lhs, Dnf::from_terms(terms)))
    }
}

/// Extra generators and relations layered over a base presentation.
///
/// Generator ids may contain the placeholder `{k}`, replaced by the copy
/// index; ids without it get the suffix `⟨k⟩`. Relations refer to extra
/// generators by their unsubstituted ids and to base generators directly.
#[derive(Clone, Debug, Default)]
pub struct FiberExtension {
    pub generators: Vec<Generator>,
    pub relations: Vec<RelationSpec>,
}

fn subscript(k: usize) -> String {
    k.to_string().chars().map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap()).collect()
}

fn copy_name(template: &str, k: usize) -> String {
    if template.contains("{k}") {
        template.replace("{k}", &k.to_string())
    } else {
        format!("{template}⟨{k}⟩")
    }
}

fn copy_display(template: &str, k: usize) -> String {
    if template.contains("{k}") {
        template.replace("{k}", &subscript(k))
    } else {
        format!("{template}⟨{k}⟩")
    }
}

/// One copy of `base` together with copy `k` (from 1) of each fiber's extras.
pub fn relative_product(base: &Presentation, fibers: &[FiberExtension]) -> Result<Presentation, PresentationError> {
    let mut out = base.clone();
    for (j, fiber) in fibers.iter().enumerate() {
        let k = j + 1;
        for g in &fiber.generators {
            let mut copy = g.clone();
            copy.id = copy_name(&g.id, k);
            copy.display = copy_display(&g.display, k);
            if g.id.contains("{k}") {
                copy.tags.insert("copy".into(), k.to_string());
            }
            let id = copy.id.clone();
            out.add_generator(copy).map_err(|_| PresentationError::NameCollision(id))?;
        }
        let locals: Vec<&str> = fiber.generators.iter().map(|g| g.id.as_str()).collect();
        for r in &fiber.relations {
            let seq = r.resolve(&out, |s| if locals.contains(&s) { copy_name(s, k) } else { s.to_string() })?;
            out.add_relation(seq)?;
        }
    }
    Ok(out)
}

/// `⟨[=x] | [=x]∧[=y] ⊢ ⊥ (x≠y), ⊤ ⊢ ⋁ₓ[=x]⟩`, whose points are the elements of `xs`.
pub fn canonical_presentation<S: AsRef<str>>(xs: &[S], orientation: Orientation) -> Presentation {
    let mut p = Presentation::empty(orientation);
    let ids: Vec<GenId> = xs
        .iter()
        .map(|x| {
            let x = x.as_ref();
            p.add_generator(
                Generator::new(format!("eq:{x}"), format!("[={x}]")).tagged("kind", "eq").tagged("payload", x),
            )
            .expect("elements of a set are distinct")
        })
        .collect();
    for &a in &ids {
        for &b in &ids {
            let rhs = if a == b { Dnf::top() } else { Dnf::bottom() };
            p.add_relation(Sequent::new(MeetTerm::from_iter([a, b]), rhs)).unwrap();
        }
    }
    p.add_relation(Sequent::new(MeetTerm::top(), Dnf::from_terms(ids.iter().map(|&g| MeetTerm::single(g))))).unwrap();
    p
}

/// `B ↞q A ↪i C` for finite sets given by size: `q[a] ∈ B`, `i[a] ∈ C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    pub q: Vec<usize>,
    pub i: Vec<usize>,
    pub outer: usize,
}

impl Span {
    pub fn identity(n: usize) -> Self {
        Span { q: (0..n).collect(), i: (0..n).collect(), outer: n }
    }

    fn validate(&self, base: usize, what: &str) -> Result<(), PresentationError> {
        let bad = |m: &str| Err(PresentationError::InvalidSpan(format!("{what}: {m}")));
        if self.q.len() != self.i.len() {
            return bad("legs have different domains");
        }
        if self.q.iter().any(|&b| b >= base) {
            return bad("q out of range");
        }
        if (0..base).any(|b| !self.q.contains(&b)) {
            return bad("q is not surjective");
        }
        let mut seen = vec![false; self.outer];
        for &c in &self.i {
            if c >= self.outer || std::mem::replace(&mut seen[c], true) {
                return bad("i is not injective into the outer set");
            }
        }
        Ok(())
    }
}

/// Result of [`expand_presentation`] together with its point bijection.
#[derive(Clone, Debug)]
pub struct ExpandedPresentation {
    pub presentation: Presentation,
    pub generators: Span,
}

impl ExpandedPresentation {
    /// `S ⊆ G₀ ↦ i(q⁻¹(S))`.
    pub fn lift_point(&self, pt: &Point) -> Point {
        let span = &self.generators;
        let ids = (0..span.q.len()).filter(|&a| pt.contains(GenId(span.q[a] as u32))).map(|a| GenId(span.i[a] as u32));
        Point::from_ids(span.outer, ids)
    }

    /// Inverse of [`lift_point`](Self::lift_point) on points.
    pub fn lower_point(&self, pt: &Point, base_len: usize) -> Point {
        let span = &self.generators;
        let ids = (0..span.q.len()).filter(|&a| pt.contains(GenId(span.i[a] as u32))).map(|a| GenId(span.q[a] as u32));
        Point::from_ids(base_len, ids)
    }
}

/// Re-presents `pres` on the generators `G₂` of `gens` and relations indexed by `rels`.
///
/// Relation `r ∈ R₂` carries relation `q(r)` of `pres` when `r` lies in `R₁`
/// and is trivial otherwise; a generator of `G₀` is read as the join of its
/// preimages. Generators of `G₁` with equal image are made equivalent and
/// generators outside `G₁` are sent to `⊥`. Trivial relations are omitted.
pub fn expand_presentation(
    pres: &Presentation,
    gens: &Span,
    rels: &Span,
) -> Result<ExpandedPresentation, PresentationError> {
    gens.validate(pres.gen_count(), "generator span")?;
    rels.validate(pres.relations().len(), "relation span")?;
    let mut out = Presentation::empty(pres.orientation());
    let mut source = vec![None; gens.outer];
    for (a, &c) in gens.i.iter().enumerate() {
        source[c] = Some(a);
    }
    for (c, src) in source.iter().enumerate() {
        let g = match src {
            Some(a) => {
                let base = pres.generator(GenId(gens.q[*a] as u32));
                Generator::new(format!("{}#{c}", base.id), base.display.clone())
                    .tagged("kind", "copy")
                    .tagged("payload", base.id.clone())
            }
            None => Generator::new(format!("dead#{c}"), format!("dead{c}")).tagged("kind", "dead"),
        };
        out.add_generator(g)?;
    }
    let preimage = |g: GenId| {
        Dnf::from_terms(
            (0..gens.q.len()).filter(|&a| gens.q[a] == g.index()).map(|a| MeetTerm::single(GenId(gens.i[a] as u32))),
        )
    };
    let mut carried = vec![None; rels.outer];
    for (r1, &r2) in rels.i.iter().enumerate() {
        carried[r2] = Some(rels.q[r1]);
    }
    for r0 in carried.into_iter().flatten() {
        let rel = &pres.relations()[r0];
        let lhs = super::dnf::substitute_term(&rel.lhs, &preimage);
        let rhs = rel.rhs.substitute(&preimage);
        for t in lhs.terms() {
            out.add_relation(Sequent::new(t.clone(), rhs.clone()))?;
        }
    }
    for c in 0..gens.outer {
        for d in 0..gens.outer {
            if let (Some(a), Some(b)) = (source[c], source[d]) {
                if c != d && gens.q[a] == gens.q[b] {
                    out.add_relation(Sequent::new(MeetTerm::single(GenId(c as u32)), Dnf::single(GenId(d as u32))))?;
                }
            }
        }
    }
    for (c, src) in source.iter().enumerate() {
        if src.is_none() {
            out.add_relation(Sequent::new(MeetTerm::single(GenId(c as u32)), Dnf::bottom()))?;
        }
    }
    Ok(ExpandedPresentation { presentation: out, generators: gens.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(names: &[&str]) -> Presentation {
        let mut p = Presentation::empty(Orientation::Open);
        for n in names {
            p.add_generator(Generator::new(*n, *n)).unwrap();
        }
        p
    }

    #[test]
    fn add_relations_examples() {
        let p = free(&["g"]);
        let g = p.gen("g").unwrap();
        let open = add_relations(&p, &[Sequent::new(MeetTerm::top(), Dnf::single(g))]).unwrap();
        assert_eq!(open.enumerate_points().len(), 1);
        let closed = add_relations(&p, &[Sequent::new(MeetTerm::single(g), Dnf::bottom())]).unwrap();
        assert!(closed.enumerate_points()[0].is_empty());

        let q = free(&["a", "b"]);
        let (a, b) = (q.gen("a").unwrap(), q.gen("b").unwrap());
        let both = add_relations(
            &q,
            &[Sequent::new(MeetTerm::single(a), Dnf::single(b)), Sequent::new(MeetTerm::single(b), Dnf::single(a))],
        )
        .unwrap();
        let pts = both.enumerate_points();
        assert_eq!(pts.len(), 2);
        assert!(pts[0].is_empty());
        assert_eq!(pts[1].count_true(), 2);
    }

    #[test]
    fn relative_product_bookkeeping() {
        let base = free(&["b"]);
        assert_eq!(relative_product(&base, &[FiberExtension::default()]).unwrap(), base);
        let fiber = FiberExtension {
            generators: vec![Generator::new("e", "e")],
            relations: vec![RelationSpec::new(vec!["e".into()], vec![vec!["b".into()]])],
        };
        let prod = relative_product(&base, &[fiber.clone(), fiber]).unwrap();
        let ids: Vec<&str> = prod.generators().iter().map(|g| g.id.as_str()).collect();
        assert_eq!(ids, ["b", "e⟨1⟩", "e⟨2⟩"]);
        // b false forces both copies false; b true leaves four choices.
        assert_eq!(prod.enumerate_points().len(), 5);
    }

    #[test]
    fn relative_product_collision() {
        let base = free(&["e⟨1⟩"]);
        let fiber = FiberExtension { generators: vec![Generator::new("e", "e")], relations: vec![] };
        assert!(matches!(relative_product(&base, &[fiber]), Err(PresentationError::NameCollision(_))));
    }

    #[test]
    fn canonical_presentation_points_are_singletons() {
        for n in 0..=4 {
            let xs: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let p = canonical_presentation(&xs, Orientation::Open);
            let pts = p.enumerate_points();
            assert_eq!(pts.len(), n);
            assert!(pts.iter().all(|pt| pt.count_true() == 1));
        }
    }

    #[test]
    fn expansion_with_duplicate_and_dead_generator() {
        let mut p = free(&["a", "b"]);
        let (a, b) = (p.gen("a").unwrap(), p.gen("b").unwrap());
        p.add_relation(Sequent::new(MeetTerm::single(a), Dnf::single(b))).unwrap();
        // G₁ = {a, b, a'} with a' ↦ a; G₂ adds one dead generator.
        let gens = Span { q: vec![0, 1, 0], i: vec![0, 1, 3], outer: 4 };
        let ex = expand_presentation(&p, &gens, &Span::identity(1)).unwrap();
        let before = p.enumerate_points();
        let after = ex.presentation.enumerate_points();
        assert_eq!(before.len(), after.len());
        let lifted: Vec<Point> = before.iter().map(|pt| ex.lift_point(pt)).collect();
        let mut sorted = lifted.clone();
        sorted.sort();
        assert_eq!(sorted, after);
        assert!(after.iter().all(|pt| !pt.contains(GenId(2))));
        for pt in &before {
            assert_eq!(&ex.lower_point(&ex.lift_point(pt), 2), pt);
        }
    }

    #[test]
    fn invalid_spans_rejected() {
        let p = free(&["a", "b"]);
        let not_onto = Span { q: vec![0], i: vec![0], outer: 1 };
        assert!(expand_presentation(&p, &not_onto, &Span::identity(0)).is_err());
        let not_mono = Span { q: vec![0, 1], i: vec![0, 0], outer: 2 };
        assert!(expand_presentation(&p, &not_mono, &Span::identity(0)).is_err());
    }
}
