//! Carleman-class toolkit: sequence classification, Bang's function,
//! finite Hilbert models of Borel interpolation, Weierstrass division,
//! plane-curve exponents and a rule-based verdict engine.

pub mod config;
pub mod division;
pub mod error;
pub mod geometry;
pub mod hilbert;
pub mod oracle;
pub mod sequence;
pub mod theta;

pub use error::{CoreError, Result};
pub use sequence::{parse_sequence, CarlemanSequence, SequenceReport, Tri};
