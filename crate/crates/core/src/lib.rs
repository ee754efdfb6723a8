//! Exact nega-q-ary numeration, generalized shift operators, and the
//! Salem-type functions built from them.

pub mod error;
pub mod indexseq;
pub mod numeration;
pub mod operators;
pub mod salem;
pub mod cli;
pub mod text;

pub use error::{Error, Result};
pub use indexseq::IndexSequence;
pub use numeration::{Digit, DigitSeq, Interval, NumerationSystem};
pub use operators::ShiftPlan;

/// Arbitrary-precision rational number used for every exact quantity.
pub type Rational = num_rational::BigRational;
