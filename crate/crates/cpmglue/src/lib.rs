//! Numerical library for constructing, classifying and decomposing gluings
//! of completely positive maps on orthogonally decomposed finite-dimensional
//! Hilbert spaces.

pub mod error;
pub mod matrix;
pub mod numerics;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;

pub mod channel;
pub mod cli;
pub mod constructions;
pub mod gluing;
pub mod io;
pub mod random;
pub mod subspace;
