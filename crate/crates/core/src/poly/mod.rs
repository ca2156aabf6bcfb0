//! Polynomials: exact rational polynomials, polynomials with algebraic
//! coefficients, certified ball evaluation, argument-principle root counting,
//! root isolation and certified bounds of `|g|` on circles.

mod algpoly;
pub mod circle;
pub mod count;
mod form;
pub mod isolate;
mod qpoly;
mod surrogate;

pub(crate) use algpoly::inside_disk;
pub use algpoly::{AlgPoly, RootCluster};
pub use form::PolyForm;
pub use qpoly::QPoly;
pub use surrogate::norm_surrogate;
