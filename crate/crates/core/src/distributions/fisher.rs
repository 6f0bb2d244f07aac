use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-observation Fisher information with named parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherMatrix {
    labels: Vec<String>,
    entries: DMatrix<f64>,
}

impl FisherMatrix {
    /// Validates shape, symmetry (1e-10 relative to the largest entry) and
    /// non-negative diagonal, then stores the exactly symmetrized matrix.
    pub fn new<S: Into<String>>(labels: Vec<S>, entries: DMatrix<f64>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let d = labels.len();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::InvalidInput(format!(
                "Fisher matrix is {}x{} but has {d} labels",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("Fisher matrix has non-finite entries".into()));
        }
        let scale = entries.amax().max(f64::MIN_POSITIVE);
        for i in 0..d {
            if entries[(i, i)] < -1e-12 * scale {
                return Err(Error::InvalidInput(format!(
                    "Fisher matrix diagonal entry {} is negative ({})",
                    labels[i],
                    entries[(i, i)]
                )));
            }
            for j in 0..i {
                if (entries[(i, j)] - entries[(j, i)]).abs() > 1e-10 * scale {
                    return Err(Error::InvalidInput(format!(
                        "Fisher matrix is not symmetric at ({}, {})",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let entries = (&entries + entries.transpose()) * 0.5;
        Ok(Self { labels, entries })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Entry by parameter names.
    pub fn entry(&self, row: &str, col: &str) -> Result<f64> {
        let i = self.index_of(row).ok_or_else(|| Error::InvalidInput(format!("unknown parameter {row}")))?;
        let j = self.index_of(col).ok_or_else(|| Error::InvalidInput(format!("unknown parameter {col}")))?;
        Ok(self.entries[(i, j)])
    }

    /// Same matrix with rows and columns permuted into `order`.
    pub fn reordered<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        if order.len() != self.dim() {
            return Err(Error::InvalidInput(format!(
                "reorder needs {} labels, got {}",
                self.dim(),
                order.len()
            )));
        }
        let idx = order
            .iter()
            .map(|l| {
                self.index_of(l.as_ref())
                    .ok_or_else(|| Error::InvalidInput(format!("unknown parameter {}", l.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        let d = self.dim();
        let entries = DMatrix::from_fn(d, d, |i, j| self.entries[(idx[i], idx[j])]);
        Ok(Self { labels: order.iter().map(|l| l.as_ref().to_string()).collect(), entries })
    }

    /// Information in new coordinates `η` given the Jacobian `∂θ/∂η`
    /// (rows indexed by the current parameters): `Jᵀ I J`.
    pub fn congruence<S: Into<String>>(&self, jacobian: &DMatrix<f64>, labels: Vec<S>) -> Result<Self> {
        if jacobian.nrows() != self.dim() {
            return Err(Error::InvalidInput("Jacobian row count must match the Fisher dimension".into()));
        }
        let transformed = jacobian.transpose() * &self.entries * jacobian;
        FisherMatrix::new(labels, transformed)
    }

    /// Largest off-diagonal magnitude.
    pub fn max_off_diagonal(&self) -> f64 {
        let d = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    m = m.max(self.entries[(i, j)].abs());
                }
            }
        }
        m
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// True when every off-diagonal entry is at most `rel` times the geometric
    /// mean of the two corresponding diagonal entries.
    pub fn is_diagonal(&self, rel: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            (0..d).all(|j| {
                i == j || self.entries[(i, j)].abs() <= rel * (self.entries[(i, i)] * self.entries[(j, j)]).sqrt()
            })
        })
    }

    /// Ratio of largest to smallest eigenvalue; infinite when singular.
    pub fn condition_number(&self) -> f64 {
        let eig = self.entries.clone().symmetric_eigenvalues();
        let max = eig.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v));
        let min = eig.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        if min <= 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FisherMatrix {
        FisherMatrix::new(
            vec!["a", "b", "c"],
            DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, 1.0, -0.25, 0.0, -0.25, 3.0]),
        )
        .unwrap()
    }

    #[test]
    fn rejects_asymmetric_or_negative_diagonal() {
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.2, 0.1, 1.0]);
        assert!(FisherMatrix::new(vec!["x", "y"], asym).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(FisherMatrix::new(vec!["x", "y"], neg).is_err());
    }

    #[test]
    fn reorder_by_label() {
        let f = sample().reordered(&["c", "a", "b"]).unwrap();
        assert_eq!(f.entry("b", "c").unwrap(), -0.25);
        assert_eq!(f.get(0, 0), 3.0);
        assert_eq!(f.get(1, 2), 0.5);
    }

    #[test]
    fn congruence_preserves_symmetry_and_psd() {
        let f = sample();
        let j = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.3, 0.0, 2.0, -1.0, 0.7, 0.0, 1.0]);
        let g = f.congruence(&j, vec!["u", "v", "w"]).unwrap();
        assert_eq!(g.entries(), &g.entries().transpose());
        assert!(g.entries().clone().symmetric_eigenvalues().iter().all(|v| *v > -1e-12));
    }

    #[test]
    fn diagonal_detection_and_conditioning() {
        let d = FisherMatrix::new(vec!["x", "y"], DMatrix::from_diagonal_element(2, 2, 1.0)).unwrap();
        assert!(d.is_diagonal(1e-12));
        assert!((d.condition_number() - 1.0).abs() < 1e-12);
        assert!(!sample().is_diagonal(1e-3));
        assert_eq!(sample().max_off_diagonal(), 0.5);
    }
}
