//! Exact symbolic computation in the Cuntz algebra, its UHF core and the
//! embedded CAR algebra.

pub mod algebra;
pub mod error;
pub mod classify;
pub mod fermions;
pub mod linalg;
pub mod morphisms;
pub mod parse;
pub mod reps;
pub mod scalar;
pub mod words;

pub use algebra::CuntzPoly;
pub use scalar::Scalar;
pub use words::{EvWord, Phase, Word};
