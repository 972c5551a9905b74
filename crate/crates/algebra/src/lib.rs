//! Finite algebras and finite topological algebras: compatible orders,
//! subtractive and Mal'cev witnesses, separation properties.

pub mod algebra;
pub mod corpus;
pub mod order;
pub mod relation;
pub mod search;
pub mod subtractive;
pub mod topalg;
pub mod topology;

pub use algebra::{eval, AlgError, AlgTerm, FiniteAlgebra};
pub use relation::BinRel;
