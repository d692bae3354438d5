//! Exact and certified arithmetic: rationals, intervals, polynomials,
//! factorization over Q and number fields, and complex root isolation.

pub mod algebraic;
pub mod complex;
pub mod error;
pub mod factor;
pub mod field;
pub mod interval;
pub mod multipoly;
pub mod numberfield;
pub mod parse;
pub mod ratfunc;
pub mod rational;
pub mod resultant;
pub mod roots;
pub mod sturm;
pub mod transcend;
pub mod unipoly;

pub use error::{AlgebraError, Result};
pub use field::{Field, GaussQ};
pub use interval::Interval;
pub use multipoly::MultiPoly;
pub use rational::Q;
pub use unipoly::UniPoly;
