//! Relative K-theory of *-homomorphisms between finite-dimensional
//! C*-algebras: exact group computations, the explicit maps between relative
//! cycles, and verification of the two six-term exact sequences.

// Negated comparisons also reject NaN defects.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algmodel;
pub mod engine;
pub mod error;
pub mod intk;
pub mod maps;
pub mod matcore;
pub mod triples;

pub use error::{Error, Result};
