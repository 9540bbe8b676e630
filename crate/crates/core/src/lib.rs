//! Exact unification over varieties generated by finite algebras.

pub mod admiss;
pub mod error;
pub mod finalg;
pub mod term;
pub mod unify;
pub mod variety;
pub mod willard;

pub use error::{Error, Result};
pub use finalg::{Congruence, FiniteAlgebra, Homomorphism};
pub use term::{Clause, Identity, Signature, Substitution, Term};
