//! Exact symbolic CR geometry on the Heisenberg model.

pub mod error;
pub mod exact;
pub mod frame;
pub mod heis;
pub mod opalg;
pub mod report;
pub mod series;
pub mod solvers;
pub mod verify;

pub use error::{CrError, Result};
pub use exact::{GaussianRational, Rational};
