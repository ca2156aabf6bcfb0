//! Certified execution of an inductive construction of entire functions
//! `f(z) = Σ a_n z^n` with rational coefficients that map algebraic numbers
//! to algebraic numbers and whose preimages of algebraic numbers are algebraic.
//!
//! The crate is layered:
//!
//! * [`exact`]: exact rationals, rational intervals and complex boxes, plus an
//!   outward-rounded dyadic kernel used by the hot evaluation loops.
//! * [`algebraic`]: exact algebraic numbers with refinable enclosures and exact
//!   zero tests, and the constrained enumeration of algebraic numbers.
//! * [`poly`]: polynomials over algebraic numbers, certified evaluation on
//!   boxes and circles, argument-principle root counting and root isolation.
//! * [`engine`]: the inductive step, certificates, verification and tail bounds.
//! * [`persist`]: the JSON file formats shared with the command line tool.

pub mod algebraic;
pub mod config;
pub mod engine;
mod error;
pub mod exact;
pub mod par;
pub mod persist;
pub mod poly;

pub use error::{Error, Result};
