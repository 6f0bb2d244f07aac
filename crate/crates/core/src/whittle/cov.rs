use std::io::Read;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{max_abs, recursion, Mat, VarModel};
use crate::error::{Error, Result};

/// Autocovariances `Γ_0 … Γ_p` of an m-variate stationary series.
///
/// Construction checks that `Γ_0` is symmetric and that the `(p+1)·m` block
/// Toeplitz matrix is positive definite, by running the Whittle recursion and
/// requiring every residual covariance to stay positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct CovSequence {
    gammas: Vec<Mat>,
}

impl CovSequence {
    pub fn new(gammas: Vec<Mat>) -> Result<Self> {
        let seq = Self::unchecked(gammas)?;
        recursion::whittle_recursion(&seq, seq.p())?;
        Ok(seq)
    }

    /// Shape and symmetry checks only; positive definiteness is left to the caller.
    pub(crate) fn unchecked(gammas: Vec<Mat>) -> Result<Self> {
        let Some(g0) = gammas.first() else {
            return Err(Error::InvalidInput("covariance sequence needs at least Γ_0".into()));
        };
        let m = g0.nrows();
        if m == 0 {
            return Err(Error::InvalidInput("dimension m must be at least 1".into()));
        }
        for (h, g) in gammas.iter().enumerate() {
            if g.nrows() != m || g.ncols() != m {
                return Err(Error::InvalidInput(format!(
                    "Γ_{h} is {}×{}, expected {m}×{m}",
                    g.nrows(),
                    g.ncols()
                )));
            }
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("Γ_{h} has non-finite entries")));
            }
        }
        let asym = max_abs(&(g0 - g0.transpose()));
        if asym > 1e-10 * max_abs(g0).max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidInput(format!("Γ_0 is not symmetric (max asymmetry {asym:e})")));
        }
        Ok(Self { gammas })
    }

    /// Covariances of white noise: `Γ_0` followed by `p` zero lags.
    pub fn white_noise(gamma0: Mat, p: usize) -> Result<Self> {
        let m = gamma0.nrows();
        let mut gammas = vec![gamma0];
        gammas.extend((0..p).map(|_| Mat::zeros(m, m)));
        Self::new(gammas)
    }

    /// Scalar sequence `Γ_h = ρ^h`, the autocovariances of a unit-variance AR(1).
    pub fn scalar_geometric(rho: f64, p: usize) -> Result<Self> {
        Self::new((0..=p).map(|h| Mat::from_element(1, 1, rho.powi(h as i32))).collect())
    }

    /// Autocovariances up to lag `p` of the moving average
    /// `X_t = Θ_0 e_t + … + Θ_q e_{t-q}` with `e_t` white, unit covariance.
    pub fn from_vma(thetas: &[Mat], p: usize) -> Result<Self> {
        let Some(t0) = thetas.first() else {
            return Err(Error::InvalidInput("moving average needs at least Θ_0".into()));
        };
        let m = t0.nrows();
        let gammas = (0..=p)
            .map(|h| {
                let mut g = Mat::zeros(m, m);
                for j in 0..thetas.len().saturating_sub(h) {
                    g += &thetas[j + h] * thetas[j].transpose();
                }
                g
            })
            .collect();
        Self::new(gammas)
    }

    /// Random valid sequence: the covariances of a random stable VAR(1) plus
    /// those of an independent random VMA(2). Used by tests and benchmarks.
    pub fn random_stable<R: Rng + ?Sized>(rng: &mut R, m: usize, p: usize) -> Result<Self> {
        let mut normal = |rows: usize, cols: usize, scale: f64| {
            Mat::from_fn(rows, cols, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
        };
        let mut phi = normal(m, m, 1.0);
        let radius = super::var::spectral_radius(&[phi.clone()]);
        if radius > 0.0 {
            phi *= 0.6 / radius;
        }
        let l = normal(m, m, 0.5);
        let sigma = &l * l.transpose() + Mat::identity(m, m) * 0.5;
        let thetas = [Mat::identity(m, m), normal(m, m, 0.3), normal(m, m, 0.3)];
        let var = VarModel::new(vec![phi], sigma)?.autocovariances(p)?;
        let vma = Self::from_vma(&thetas, p)?;
        var.add(&vma)
    }

    /// Lag-wise sum, the covariances of the sum of two independent series.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.m() != other.m() || self.p() != other.p() {
            return Err(Error::InvalidInput("sequences differ in dimension or length".into()));
        }
        Self::new(self.gammas.iter().zip(&other.gammas).map(|(a, b)| a + b).collect())
    }

    pub fn m(&self) -> usize {
        self.gammas[0].nrows()
    }

    /// Largest lag held.
    pub fn p(&self) -> usize {
        self.gammas.len() - 1
    }

    pub fn gammas(&self) -> &[Mat] {
        &self.gammas
    }

    /// `Γ_h` for `|h| ≤ p`, using `Γ_{-h} = Γ_hᵀ`.
    pub fn gamma(&self, h: i64) -> Mat {
        let k = h.unsigned_abs() as usize;
        assert!(k <= self.p(), "lag {h} beyond the stored {}", self.p());
        if h >= 0 {
            self.gammas[k].clone()
        } else {
            self.gammas[k].transpose()
        }
    }

    /// The first `p + 1` lags.
    pub fn truncate(&self, p: usize) -> Result<Self> {
        if p > self.p() {
            return Err(Error::InvalidInput(format!("cannot truncate lag {} sequence to {p}", self.p())));
        }
        Ok(Self { gammas: self.gammas[..=p].to_vec() })
    }

    pub fn to_file(&self) -> CovSequenceFile {
        CovSequenceFile {
            m: self.m(),
            p: self.p(),
            gamma: self.gammas.iter().map(|g| MatrixJson::Nested(super::matrix_rows(g))).collect(),
        }
    }

    /// JSON text with every number at 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        crate::io::to_json_full_precision(&self.to_file()).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: CovSequenceFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("covariance JSON: {e}")))?;
        file.into_sequence()
    }
}

/// On-disk form of a [`CovSequence`]: `m`, `p` and `p + 1` row-major `m×m` matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovSequenceFile {
    pub m: usize,
    pub p: usize,
    pub gamma: Vec<MatrixJson>,
}

/// A matrix written either as an array of rows or as one flat row-major array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl MatrixJson {
    fn to_matrix(&self, m: usize) -> Result<Mat> {
        let flat: Vec<f64> = match self {
            MatrixJson::Nested(rows) => {
                if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                    return Err(Error::InvalidInput(format!("expected {m} rows of {m} numbers")));
                }
                rows.concat()
            }
            MatrixJson::Flat(v) => v.clone(),
        };
        if flat.len() != m * m {
            return Err(Error::InvalidInput(format!("expected {} entries, got {}", m * m, flat.len())));
        }
        Ok(DMatrix::from_row_slice(m, m, &flat))
    }
}

impl CovSequenceFile {
    pub fn into_sequence(self) -> Result<CovSequence> {
        if self.gamma.len() != self.p + 1 {
            return Err(Error::InvalidInput(format!(
                "p = {} needs {} matrices, found {}",
                self.p,
                self.p + 1,
                self.gamma.len()
            )));
        }
        let gammas = self
            .gamma
            .iter()
            .enumerate()
            .map(|(h, g)| g.to_matrix(self.m).map_err(|e| Error::InvalidInput(format!("gamma[{h}]: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        CovSequence::new(gammas)
    }
}

/// Biased sample autocovariances `Γ̂_h = (1/n) Σ_t X_t X_{t-h}ᵀ`, `h = 0 … max_lag`.
///
/// `series` holds one time point per row. The series is taken as zero-mean and
/// is not centred.
pub fn sample_autocov(series: &Mat, max_lag: usize) -> Result<CovSequence> {
    let (n, m) = series.shape();
    if m == 0 || n <= max_lag {
        return Err(Error::InvalidInput(format!("series of length {n} is too short for lag {max_lag}")));
    }
    for j in 0..m {
        let col = series.column(j);
        if col.iter().all(|&v| v == col[0]) {
            return Err(Error::InvalidInput(format!("series column {j} is constant")));
        }
    }
    let gammas = (0..=max_lag)
        .map(|h| {
            let lead = series.rows(h, n - h);
            let lag = series.rows(0, n - h);
            lead.transpose() * lag / n as f64
        })
        .collect();
    CovSequence::new(gammas)
}

/// Numeric CSV, one row per time point. A first row that does not parse as
/// numbers is treated as a header.
pub fn read_series_csv<R: Read>(reader: R) -> Result<Mat> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::InvalidInput(format!("CSV: {e}")))?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) => rows.push(v),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(Error::InvalidInput(format!("CSV row {}: {e}", i + 1))),
        }
    }
    let Some(first) = rows.first() else {
        return Err(Error::InvalidInput("CSV has no data rows".into()));
    };
    let m = first.len();
    if let Some(bad) = rows.iter().position(|r| r.len() != m) {
        return Err(Error::InvalidInput(format!("data row {} has {} columns, expected {m}", bad + 1, rows[bad].len())));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("CSV contains non-finite values".into()));
    }
    Ok(DMatrix::from_row_slice(rows.len(), m, &rows.concat()))
}
