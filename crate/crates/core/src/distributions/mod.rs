//! Densities, likelihoods, scores, Fisher information and samplers for the
//! location-scale t-distribution and the Gamma-type families.

mod fisher;
mod gamma;
mod t;

pub use fisher::FisherMatrix;
pub use gamma::{gamma_family_fisher, GammaFamily, GenGammaParams, TwoSampleGammaParams, TwoSampleKind};
pub use t::{
    from_ortho, t_fisher_info, t_fisher_info_ortho, t_fisher_info_ortho_with_tol, t_fisher_info_with_tol, t_loglik, t_loglik_grad, t_loglik_grad_ortho, t_loglik_ortho,
    t_logpdf, t_sample, t_shape_integrals, to_ortho, TParams, TParamsOrtho, FISHER_QUAD_TOL,
};

use crate::error::{Error, Result};

/// A univariate i.i.d. sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("sample must contain at least one value".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("sample contains a non-finite value {bad}")));
        }
        Ok(Self { values })
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Median (average of the two central order statistics for even `n`).
    pub fn median(&self) -> f64 {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        let n = v.len();
        if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    }

    /// Standard deviation with divisor `n - 1`; zero for a single value.
    pub fn std_dev(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.values.iter().sum::<f64>() / n as f64;
        let ss: f64 = self.values.iter().map(|x| (x - mean) * (x - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_statistics() {
        let s = Sample::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.median(), 2.0);
        assert!((s.std_dev() - 1.0).abs() < 1e-15);
        let even = Sample::new(vec![4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(even.median(), 2.5);
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Sample::new(vec![]).is_err());
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
    }
}
