//! Exact algebraic numbers and the constrained enumeration of them.

pub mod enumerate;
pub mod leaf;
pub mod mpoly;
pub mod serial;
mod number;

pub use mpoly::MPoly;
pub use number::AlgebraicNumber;
