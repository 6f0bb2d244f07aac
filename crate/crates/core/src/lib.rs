//! Orthogonal parameterizations, the estimation procedures they are compared
//! under, and the multivariate Whittle recursion.

pub mod distributions;
pub mod error;
pub mod harness;
pub mod io;
pub mod numerics;
pub mod optimizers;
pub mod reparam;
pub mod whittle;

pub use distributions::{FisherMatrix, Sample, TParams, TParamsOrtho};
pub use error::{Error, Result};
pub use numerics::Interval;
