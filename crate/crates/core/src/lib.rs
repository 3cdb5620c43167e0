pub mod algebra;
pub mod binary;
pub mod caps;
pub mod cli;
pub mod convergence;
pub mod dsl;
pub mod encoding;
pub mod error;
pub mod expr;
pub mod interval;
pub mod matrix;
pub mod sim;

pub use error::{Error, Result};
pub use expr::{LinearSbm, NfCoefficients, Sbm, SetExpr};
pub use interval::{Endpoint, Interval, IntervalSet, Rational, Universe};
pub use matrix::{BoolMatrix, BoolVector, Permutation, SetMatrix};
