//! Multivariate Yule–Walker fitting by the Whittle recursion, fast block
//! Toeplitz inversion and VAR simulation.
//!
//! Sign convention: a forward VAR(p) is `X_t + Φ_1 X_{t-1} + … + Φ_p X_{t-p} = ε_t`
//! and a backward one is `X_t + Φ̃_1 X_{t+1} + … + Φ̃_p X_{t+p} = η_t`.
//! Lags follow `Γ_h = E(X_t X_{t-h}ᵀ)`, so `Γ_{-h} = Γ_hᵀ`.

mod cov;
mod recursion;
mod toeplitz;
mod var;

pub use cov::{read_series_csv, sample_autocov, CovSequence, CovSequenceFile, MatrixJson};
pub use recursion::{
    backward_update, forward_update, whittle_recursion, whittle_recursion_counted, yule_walker_dense,
    yule_walker_residuals, Direction, WhittleState,
};
pub use toeplitz::{block_toeplitz, block_toeplitz_inverse, block_toeplitz_inverse_counted, check_var_orthogonality};
pub use var::{var_simulate, VarModel};

use nalgebra::DMatrix;

pub type Mat = DMatrix<f64>;

/// Largest absolute entry.
pub fn max_abs(a: &Mat) -> f64 {
    a.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// `max |a_r − b_r|` over all blocks, divided by `max(1, max |b_r|)`.
pub fn max_rel_diff(a: &[Mat], b: &[Mat]) -> f64 {
    assert_eq!(a.len(), b.len(), "block lists differ in length");
    let scale = b.iter().map(max_abs).fold(1.0, f64::max);
    a.iter().zip(b).map(|(x, y)| max_abs(&(x - y))).fold(0.0, f64::max) / scale
}

/// Rows of a matrix as nested vectors, for JSON output.
pub fn matrix_rows(a: &Mat) -> Vec<Vec<f64>> {
    (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect()
}
