//! Exact construction, verification and search for Euler's magic matrices:
//! square matrices `M` with `M M^t = gamma I` whose diagonal and
//! anti-diagonal squared-entry sums both equal `gamma`.

pub mod cayley3;
pub mod cli;
pub mod error;
pub mod family8;
pub mod format;
pub mod matrix;
pub mod octonion;
pub mod poly;
pub mod rational;
pub mod permconstruct;
pub mod rng;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{IntMatrix, Matrix, RatMatrix, Ring};
pub use poly::{Context, MultiPoly};
pub use rational::{rat, Rational};
