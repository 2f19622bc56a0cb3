//! Syntactic derivability by forward chaining with case splits.
//!
//! Facts start as the hypothesis meet. A relation whose lhs holds and whose
//! rhs has a single term adds that term's generators; a relation with an empty
//! rhs closes the branch; a relation with several terms splits into one branch
//! per term. A branch where no relation fires is a model refuting the goal.

use thiserror::Error;

use crate::bits::BitSet;

use super::{Dnf, Presentation, Sequent};

/// Hard cap on facts added across all branches of one derivation.
pub const FACT_LIMIT: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SaturationError {
    #[error("saturation exceeded {FACT_LIMIT} derived facts")]
    LimitExceeded,
}

/// Whether `seq` is derivable from the relations of `pres`.
pub fn derivable(pres: &Presentation, seq: &Sequent) -> Result<bool, SaturationError> {
    let n = pres.gen_count();
    let facts = BitSet::from_indices(n, seq.lhs.iter().map(|g| g.index()));
    let mut budget = FACT_LIMIT;
    prove(pres, facts, &seq.rhs, &mut budget)
}

fn holds(facts: &BitSet, d: &Dnf) -> bool {
    d.terms().iter().any(|t| t.iter().all(|g| facts.contains(g.index())))
}

fn prove(pres: &Presentation, mut facts: BitSet, goal: &Dnf, budget: &mut usize) -> Result<bool, SaturationError> {
    loop {
        if holds(&facts, goal) {
            return Ok(true);
        }
        let mut split = None;
        let mut grew = false;
        for r in pres.relations() {
            if !r.lhs.iter().all(|g| facts.contains(g.index())) || holds(&facts, &r.rhs) {
                continue;
            }
            match r.rhs.terms() {
                [] => return Ok(true),
                [t] => {
                    for g in t.iter() {
                        if facts.insert(g.index()) {
                            *budget = budget.checked_sub(1).ok_or(SaturationError::LimitExceeded)?;
                        }
                    }
                    grew = true;
                }
                _ => {
                    if split.is_none() {
                        split = Some(r);
                    }
                }
            }
        }
        if grew {
            continue;
        }
        let Some(r) = split else {
            return Ok(false);
        };
        for t in r.rhs.terms() {
            let mut branch = facts.clone();
            for g in t.iter() {
                if branch.insert(g.index()) {
                    *budget = budget.checked_sub(1).ok_or(SaturationError::LimitExceeded)?;
                }
            }
            if !prove(pres, branch, goal, budget)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
}
