use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before reaching the tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },

    /// A linear system or mapping is singular or too badly conditioned to use.
    #[error("conditioning error: {0}")]
    Conditioning(String),

    /// A residual covariance lost positive definiteness during the order recursion.
    #[error("covariance sequence is not positive definite at order {order}: {detail}")]
    NotPositiveDefinite { order: usize, detail: String },

    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
