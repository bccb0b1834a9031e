//! Finitary propositional logics and the categories they live in.
//!
//! The crate is layered bottom-up:
//!
//! * [`signature`] and [`formula`]: signatures, strict morphisms, formulas, substitution.
//! * [`flexible`], [`monad`], [`laws`]: flexible morphisms, the slice monad and law suites.
//! * [`matrix`], [`calculus`], [`search`], [`logic`]: consequence relations and their providers.
//! * [`translation`], [`combine`]: translations between logics and combinations of logics.
//! * [`quotient`]: interderivability, congruentiality, equipollence and Lindenbaum sets.
//! * [`dsl`] and [`corpus`]: the text format and the shipped examples.

pub mod calculus;
pub mod combine;
pub mod corpus;
pub mod dsl;
pub mod enumerate;
pub mod error;
pub mod flexible;
pub mod formula;
pub mod laws;
pub mod logic;
pub mod matrix;
pub mod monad;
pub mod proof;
pub mod quotient;
pub mod search;
pub mod signature;
pub mod translation;

pub use error::{Error, ParseError, Result};
pub use flexible::FlexibleMorphism;
pub use formula::{parse, Formula, Substitution};
pub use signature::{Signature, StrictMorphism, Symbol};
