//! Numerical toolkit for the integrable O(n) spin chain: R-matrix algebra,
//! the two-site density matrix at finite Trotter number and its functional
//! equation, exact diagonalization of periodic chains, and the
//! zero-temperature thermodynamic solution of the two-site correlations.

pub mod algebra;
pub mod chain;
pub mod error;
pub mod linalg;
pub mod qkz;
pub mod quad;
pub mod reference;
pub mod special;
pub mod thermo;

pub use error::{Error, Result};
