//! Exact dense linear algebra over ℚ and GF(p).

mod matrix;
mod scalar;

pub use matrix::{Coordinates, Echelon, Matrix, Quotient, Solution};
pub use scalar::{Field, Rational, Scalar};
