pub mod algebra;
pub mod ar;
pub mod complex;
pub mod corpus;
pub mod double;
pub mod error;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod module;
pub mod parallel;
pub mod random;
pub mod report;
pub mod rep;
pub mod serre;
pub mod suite;

pub use error::{Error, Result};
