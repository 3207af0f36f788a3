//! Computational universal algebra around the semifree construction.
//!
//! A theory `(Σ, E)` is turned into its semifree presentation `(Σˢ, Eˢ)` by
//! adding a fresh idempotent unary symbol together with absorption laws and
//! guarded copies of `E`. The crate provides the syntax layer, a checked
//! equational proof engine, the transformation and its simplifier, concrete
//! finitary monads with their semifree extensions, finite model enumeration
//! with the algebra/semialgebra correspondence, and the comonad and ideal
//! monad checks on top of them.

pub mod builtin;
pub mod categorical;
pub mod dsl;
pub mod models;
pub mod monads;
pub mod proof;
pub mod semifree;
pub mod term;

pub use term::{Equation, Name, OpSymbol, Signature, Substitution, Term, Theory};
