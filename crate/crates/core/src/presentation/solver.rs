//! Backtracking search for points with unit propagation over sequents.
//!
//! A relation `L ⊢ T₁ ∨ … ∨ Tₖ` propagates as follows: once every generator
//! of `L` is true, a single surviving `Tᵢ` is forced true, and no survivor is a
//! conflict; once every `Tᵢ` is dead, the last undecided generator of `L` is
//! forced false.
//!
//! Satisfiability queries branch only on relations whose left side is already
//! true and whose right side is not yet met, choosing among its surviving
//! terms. Every relation is a sequent between positive formulas, so a state in
//! which no relation fires is a point once the undecided generators are set
//! false. Full enumeration branches on every generator instead.

use crate::bits::BitSet;

use super::{Dnf, GenId, MeetTerm, Point, Presentation};

const UNKNOWN: u8 = 0;
const FALSE: u8 = 1;
const TRUE: u8 = 2;

#[derive(Clone, Debug)]
struct Clause {
    lhs: Vec<u32>,
    rhs: Vec<Vec<u32>>,
}

/// Relations of one presentation compiled for repeated point searches.
#[derive(Clone, Debug)]
pub struct Solver {
    n: usize,
    clauses: Vec<Clause>,
    occurs: Vec<Vec<u32>>,
}

enum Step {
    Quiet,
    Conflict,
    Force(Vec<(u32, u8)>),
}

struct Query<'a> {
    base: &'a Solver,
    extra: Vec<Clause>,
    extra_occurs: Vec<Vec<u32>>,
}

impl Solver {
    pub fn new(pres: &Presentation) -> Self {
        let n = pres.gen_count();
        let clauses: Vec<Clause> = pres.relations().iter().map(|r| compile(&r.lhs, &r.rhs)).collect();
        let occurs = occurrence_lists(n, &clauses);
        Solver { n, clauses, occurs }
    }

    /// All points in ascending bitmask order.
    pub fn all_points(&self) -> Vec<Point> {
        let q = Query::new(self, Vec::new());
        let mut out = Vec::new();
        q.run(&[], &mut |pt| {
            out.push(pt);
            true
        });
        out.sort();
        out
    }

    /// Some point in which `lhs` holds and `rhs` fails, if there is one.
    pub fn entails(&self, lhs: &MeetTerm, rhs: &Dnf) -> Option<Point> {
        if rhs.terms().iter().any(|t| t.is_subset(lhs)) {
            return None;
        }
        let extra =
            rhs.terms().iter().map(|t| Clause { lhs: t.iter().map(|g| g.0).collect(), rhs: Vec::new() }).collect();
        let q = Query::new(self, extra);
        let forced: Vec<u32> = lhs.iter().map(|g| g.0).collect();
        q.witness(&forced)
    }

    /// Points in which every generator of `forced` holds.
    pub fn points_with(&self, forced: &MeetTerm) -> Vec<Point> {
        let q = Query::new(self, Vec::new());
        let forced: Vec<u32> = forced.iter().map(|g| g.0).collect();
        let mut out = Vec::new();
        q.run(&forced, &mut |pt| {
            out.push(pt);
            true
        });
        out.sort();
        out
    }

    pub fn is_satisfiable(&self, forced: &MeetTerm) -> bool {
        let q = Query::new(self, Vec::new());
        let forced: Vec<u32> = forced.iter().map(|g| g.0).collect();
        q.witness(&forced).is_some()
    }
}

fn compile(lhs: &MeetTerm, rhs: &Dnf) -> Clause {
    Clause {
        lhs: lhs.iter().map(|g| g.0).collect(),
        rhs: rhs.terms().iter().map(|t| t.iter().map(|g| g.0).collect()).collect(),
    }
}

fn occurrence_lists(n: usize, clauses: &[Clause]) -> Vec<Vec<u32>> {
    let mut occurs = vec![Vec::new(); n];
    for (ci, c) in clauses.iter().enumerate() {
        let mut vars: Vec<u32> = c.lhs.iter().chain(c.rhs.iter().flatten()).copied().collect();
        vars.sort_unstable();
        vars.dedup();
        for v in vars {
            occurs[v as usize].push(ci as u32);
        }
    }
    occurs
}

fn examine(c: &Clause, assign: &[u8]) -> Step {
    let mut open_lhs = None;
    let mut open_lhs_count = 0;
    for &g in &c.lhs {
        match assign[g as usize] {
            FALSE => return Step::Quiet,
            UNKNOWN => {
                open_lhs_count += 1;
                open_lhs = Some(g);
            }
            _ => {}
        }
    }
    let mut open_term = None;
    let mut open_terms = 0;
    for (ti, t) in c.rhs.iter().enumerate() {
        let mut dead = false;
        let mut all_true = true;
        for &g in t {
            match assign[g as usize] {
                FALSE => {
                    dead = true;
                    break;
                }
                UNKNOWN => all_true = false,
                _ => {}
            }
        }
        if dead {
            continue;
        }
        if all_true {
            return Step::Quiet;
        }
        open_terms += 1;
        open_term = Some(ti);
    }
    match (open_lhs_count, open_terms) {
        (0, 0) => Step::Conflict,
        (0, 1) => {
            let t = &c.rhs[open_term.unwrap()];
            Step::Force(t.iter().filter(|&&g| assign[g as usize] == UNKNOWN).map(|&g| (g, TRUE)).collect())
        }
        (1, 0) => Step::Force(vec![(open_lhs.unwrap(), FALSE)]),
        _ => Step::Quiet,
    }
}

impl<'a> Query<'a> {
    fn new(base: &'a Solver, extra: Vec<Clause>) -> Self {
        let extra_occurs = occurrence_lists(base.n, &extra);
        Query { base, extra, extra_occurs }
    }

    fn clause(&self, ci: u32) -> &Clause {
        let k = ci as usize;
        if k < self.base.clauses.len() {
            &self.base.clauses[k]
        } else {
            &self.extra[k - self.base.clauses.len()]
        }
    }

    /// Assigns and propagates; false on conflict.
    fn propagate(&self, assign: &mut [u8], mut queue: Vec<u32>) -> bool {
        let offset = self.base.clauses.len() as u32;
        while let Some(v) = queue.pop() {
            let base = self.base.occurs[v as usize].iter().copied();
            let extra = self.extra_occurs[v as usize].iter().map(|c| c + offset);
            for ci in base.chain(extra) {
                match examine(self.clause(ci), assign) {
                    Step::Quiet => {}
                    Step::Conflict => return false,
                    Step::Force(fs) => {
                        for (g, val) in fs {
                            let cur = assign[g as usize];
                            if cur == UNKNOWN {
                                assign[g as usize] = val;
                                queue.push(g);
                            } else if cur != val {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    fn initial(&self, forced: &[u32]) -> Option<Vec<u8>> {
        let mut assign = vec![UNKNOWN; self.base.n];
        for &g in forced {
            assign[g as usize] = TRUE;
        }
        let mut queue: Vec<u32> = forced.to_vec();
        // Clauses with empty lhs and no rhs variables are not reached through
        // any occurrence list, so they are examined once up front.
        let total = self.base.clauses.len() + self.extra.len();
        for ci in 0..total as u32 {
            match examine(self.clause(ci), &assign) {
                Step::Quiet => {}
                Step::Conflict => return None,
                Step::Force(fs) => {
                    for (g, val) in fs {
                        let cur = assign[g as usize];
                        if cur == UNKNOWN {
                            assign[g as usize] = val;
                            queue.push(g);
                        } else if cur != val {
                            return None;
                        }
                    }
                }
            }
        }
        self.propagate(&mut assign, queue).then_some(assign)
    }

    /// Visits points extending `forced`; the visitor returns false to stop.
    fn run(&self, forced: &[u32], visit: &mut dyn FnMut(Point) -> bool) {
        if let Some(assign) = self.initial(forced) {
            self.dfs(assign, 0, visit);
        }
    }

    fn witness(&self, forced: &[u32]) -> Option<Point> {
        let assign = self.initial(forced)?;
        self.chase(assign)
    }

    /// The fired relation with the fewest surviving terms, as term indices.
    fn pending(&self, assign: &[u8]) -> Option<(u32, Vec<usize>)> {
        let total = (self.base.clauses.len() + self.extra.len()) as u32;
        let mut best: Option<(u32, Vec<usize>)> = None;
        'clauses: for ci in 0..total {
            let c = self.clause(ci);
            if c.lhs.iter().any(|&g| assign[g as usize] != TRUE) {
                continue;
            }
            let mut open = Vec::new();
            for (ti, t) in c.rhs.iter().enumerate() {
                let mut all_true = true;
                let mut dead = false;
                for &g in t {
                    match assign[g as usize] {
                        FALSE => {
                            dead = true;
                            break;
                        }
                        UNKNOWN => all_true = false,
                        _ => {}
                    }
                }
                if all_true && !dead {
                    continue 'clauses;
                }
                if !dead {
                    open.push(ti);
                }
            }
            if best.as_ref().is_none_or(|(_, b)| open.len() < b.len()) {
                let done = open.len() <= 1;
                best = Some((ci, open));
                if done {
                    break;
                }
            }
        }
        best
    }

    fn chase(&self, assign: Vec<u8>) -> Option<Point> {
        let Some((ci, open)) = self.pending(&assign) else {
            let bits = BitSet::from_indices(self.base.n, (0..self.base.n).filter(|&i| assign[i] == TRUE));
            return Some(Point::from_bits(bits));
        };
        let c = self.clause(ci);
        for ti in open {
            let mut next = assign.clone();
            let mut queue = Vec::new();
            for &g in &c.rhs[ti] {
                if next[g as usize] == UNKNOWN {
                    next[g as usize] = TRUE;
                    queue.push(g);
                }
            }
            if self.propagate(&mut next, queue) {
                if let Some(pt) = self.chase(next) {
                    return Some(pt);
                }
            }
        }
        None
    }

    fn dfs(&self, assign: Vec<u8>, from: usize, visit: &mut dyn FnMut(Point) -> bool) -> bool {
        let Some(v) = (from..self.base.n).find(|&i| assign[i] == UNKNOWN) else {
            let bits = BitSet::from_indices(self.base.n, (0..self.base.n).filter(|&i| assign[i] == TRUE));
            return visit(Point::from_bits(bits));
        };
        for val in [FALSE, TRUE] {
            let mut next = assign.clone();
            next[v] = val;
            if self.propagate(&mut next, vec![v as u32]) && !self.dfs(next, v + 1, visit) {
                return false;
            }
        }
        true
    }
}

/// Brute-force point enumeration over all subsets; used as a test oracle.
pub fn brute_force_points(pres: &Presentation) -> Vec<Point> {
    let n = pres.gen_count();
    assert!(n <= 20, "brute force limited to 20 generators");
    (0u64..1 << n)
        .map(|mask| Point::from_ids(n, (0..n).filter(|i| mask >> i & 1 == 1).map(|i| GenId(i as u32))))
        .filter(|pt| pres.is_point(pt))
        .collect()
}
