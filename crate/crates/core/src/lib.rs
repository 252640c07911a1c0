//! A workbench for first-order schemes, translations between relational
//! signatures, and explicit second-order structures over finite models.
//!
//! The crate is organised bottom-up:
//!
//! - [`syntax`]: signatures, formulas, the concrete grammar, and
//!   capture-avoiding substitution.
//! - [`scheme`]: schemes with the marked predicate `P`, instance generation,
//!   the stock scheme builders, and comprehension axiom generators.
//! - [`interp`]: translations as formula-to-formula passes.
//! - [`model`]: finite structures, evaluation, automorphisms, games.
//! - [`lab`]: class families, strong-model enumeration, definiteness verdicts.
//! - [`corpus`]: seeded property suites with independent oracles.

pub mod caps;
pub mod corpus;
pub mod error;
pub mod interp;
pub mod lab;
pub mod model;
pub mod scheme;
pub mod syntax;

pub use caps::Caps;
pub use error::{Error, Result};
