//! Exact rationals, rational intervals and complex boxes, plus the
//! outward-rounded dyadic kernel used for fast certified evaluation.

mod cbox;
pub mod dyadic;
mod interval;
mod rational;

pub use cbox::ComplexBox;
pub use dyadic::{Ball, Dy, Mag};
pub use interval::RealInterval;
pub use rational::{common_denominator, Rational};
