//! Finite-scale generation and verification of localic classifying
//! categories for relational geometric theories.
//!
//! A theory is parsed from the `.gth` language ([`theory`]), lowered to frame
//! presentations over a finite parameter set ([`classifier`]), and every
//! structural claim about those presentations is checked against a
//! brute-force model enumerator ([`oracle`]). Internal category theory in
//! finite sets lives in [`category`]; the universal property of the generated
//! classifier is exercised through the forcing construction in [`forcing`].

pub mod bits;
pub mod category;
pub mod classifier;
pub mod corpus;
pub mod forcing;
pub mod oracle;
pub mod presentation;
pub mod theory;
