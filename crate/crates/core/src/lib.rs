pub mod algebra;
pub mod angles;
pub mod cli;
pub mod closure;
pub mod error;
pub mod expectation;
pub mod gns;
pub mod index;
pub mod linalg;
pub mod ppbasis;
pub mod subalgebra;
pub mod tol;

pub use error::{Error, Result};
