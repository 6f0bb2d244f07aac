use nalgebra::{Cholesky, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{CovSequence, Mat};
use crate::error::{Error, Result};

/// Stationary VAR(p) `X_t + Φ_1 X_{t-1} + … + Φ_p X_{t-p} = ε_t`, `ε_t ~ N(0, Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarModel {
    coeffs: Vec<Mat>,
    sigma: Mat,
}

impl VarModel {
    pub fn new(coeffs: Vec<Mat>, sigma: Mat) -> Result<Self> {
        let m = sigma.nrows();
        if m == 0 || sigma.ncols() != m {
            return Err(Error::InvalidInput("innovation covariance must be square and non-empty".into()));
        }
        if coeffs.iter().any(|c| c.shape() != (m, m)) {
            return Err(Error::InvalidInput(format!("coefficient blocks must be {m}×{m}")));
        }
        if coeffs.iter().chain([&sigma]).flat_map(|c| c.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("model has non-finite entries".into()));
        }
        if Cholesky::new(sigma.clone()).is_none() || (&sigma - sigma.transpose()).amax() > 1e-12 * sigma.amax() {
            return Err(Error::InvalidInput("innovation covariance must be symmetric positive definite".into()));
        }
        let radius = spectral_radius(&coeffs);
        if !(radius < 1.0) {
            return Err(Error::InvalidInput(format!("model is not stationary (spectral radius {radius})")));
        }
        Ok(Self { coeffs, sigma })
    }

    pub fn m(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Mat] {
        &self.coeffs
    }

    pub fn sigma(&self) -> &Mat {
        &self.sigma
    }

    /// Exact autocovariances `Γ_0 … Γ_max_lag`.
    ///
    /// Solves the stacked Lyapunov equation `V = A V Aᵀ + Q` of the companion
    /// form in Kronecker form, so the cost grows as `(p·m)⁶`; meant for
    /// low-order models.
    pub fn autocovariances(&self, max_lag: usize) -> Result<CovSequence> {
        let m = self.m();
        let p = self.order();
        let mut gammas = Vec::with_capacity(max_lag + 1);
        if p == 0 {
            gammas.push(self.sigma.clone());
            gammas.extend((0..max_lag).map(|_| Mat::zeros(m, m)));
            return CovSequence::new(gammas);
        }
        let d = p * m;
        let a = companion(&self.coeffs);
        let mut q = Mat::zeros(d, d);
        q.view_mut((0, 0), (m, m)).copy_from(&self.sigma);
        let lhs = Mat::identity(d * d, d * d) - a.kronecker(&a);
        // Column-major vec on both sides.
        let vec_q = DVector::from_column_slice(q.as_slice());
        let vec_v = lhs
            .lu()
            .solve(&vec_q)
            .ok_or_else(|| Error::Conditioning("Lyapunov system is singular".into()))?;
        let v = Mat::from_column_slice(d, d, vec_v.as_slice());
        // V[i][j] = E(X_{t-i} X_{t-j}ᵀ) = Γ_{j-i}.
        for h in 0..=max_lag.min(p - 1) {
            gammas.push(v.view((0, h * m), (m, m)).into_owned());
        }
        gammas[0] = (&gammas[0] + gammas[0].transpose()) * 0.5;
        for h in p..=max_lag {
            let mut g = Mat::zeros(m, m);
            for r in 1..=p {
                g -= &self.coeffs[r - 1] * &gammas[h - r];
            }
            gammas.push(g);
        }
        CovSequence::new(gammas)
    }
}

/// Companion matrix of `X_t = −Σ Φ_r X_{t-r} + ε_t`.
fn companion(coeffs: &[Mat]) -> Mat {
    let p = coeffs.len();
    let m = coeffs[0].nrows();
    let d = p * m;
    let mut a = Mat::zeros(d, d);
    for (r, c) in coeffs.iter().enumerate() {
        a.view_mut((0, r * m), (m, m)).copy_from(&(-c));
    }
    if p > 1 {
        a.view_mut((m, 0), (d - m, d - m)).fill_with_identity();
    }
    a
}

/// Largest eigenvalue modulus of the companion matrix; 0 for an empty model.
pub(crate) fn spectral_radius(coeffs: &[Mat]) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    companion(coeffs).complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Simulate `n` points after discarding `burn_in`, starting from zeros.
/// Rows of the result are time points.
pub fn var_simulate<R: Rng + ?Sized>(model: &VarModel, n: usize, burn_in: usize, rng: &mut R) -> Mat {
    let m = model.m();
    let p = model.order();
    let l = Cholesky::new(model.sigma.clone()).expect("validated on construction").l();
    let total = n + burn_in;
    let mut x = Mat::zeros(total, m);
    for t in 0..total {
        let z = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let mut xt = &l * z;
        for r in 1..=p.min(t) {
            xt -= &model.coeffs[r - 1] * x.row(t - r).transpose();
        }
        x.row_mut(t).copy_from(&xt.transpose());
    }
    x.rows(burn_in, n).into_owned()
}

#[cfg(test)]
mod tests {
    use super::super::{max_rel_diff, sample_autocov, whittle_recursion};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_explosive_model() {
        let phi = Mat::from_element(1, 1, -1.2);
        assert!(VarModel::new(vec![phi], Mat::identity(1, 1)).is_err());
    }

    #[test]
    fn ar1_autocovariances() {
        // X_t = 0.5 X_{t-1} + ε_t: Γ_h = 0.5^h / 0.75.
        let model = VarModel::new(vec![Mat::from_element(1, 1, -0.5)], Mat::identity(1, 1)).unwrap();
        let c = model.autocovariances(3).unwrap();
        for h in 0..=3 {
            assert!((c.gamma(h)[(0, 0)] - 0.5f64.powi(h as i32) / 0.75).abs() < 1e-14);
        }
    }

    #[test]
    fn recursion_recovers_var2_coefficients() {
        let phi1 = Mat::from_row_slice(2, 2, &[-0.5, 0.1, 0.2, -0.3]);
        let phi2 = Mat::from_row_slice(2, 2, &[0.2, 0.0, -0.1, 0.1]);
        let sigma = Mat::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 2.0]);
        let model = VarModel::new(vec![phi1.clone(), phi2.clone()], sigma.clone()).unwrap();
        let c = model.autocovariances(4).unwrap();
        let st = whittle_recursion(&c, 4).unwrap();
        assert!(max_rel_diff(&st[2].forward, &[phi1, phi2]) < 1e-12);
        assert!(max_rel_diff(&[st[2].sigma.clone()], &[sigma]) < 1e-12);
        assert!(st[4].forward[3].amax() < 1e-12);
    }

    #[test]
    fn zero_coefficients_give_iid_noise() {
        let model = VarModel::new(vec![Mat::zeros(2, 2)], Mat::identity(2, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = var_simulate(&model, 20_000, 10, &mut rng);
        let c = sample_autocov(&x, 1).unwrap();
        assert!(c.gamma(1).amax() < 0.04);
        assert!((c.gamma(0)[(0, 0)] - 1.0).abs() < 0.05);
    }

    #[test]
    fn ar1_sample_autocorrelation() {
        let model = VarModel::new(vec![Mat::from_element(1, 1, -0.5)], Mat::identity(1, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = var_simulate(&model, 100_000, 100, &mut rng);
        let c = sample_autocov(&x, 1).unwrap();
        let r1 = c.gamma(1)[(0, 0)] / c.gamma(0)[(0, 0)];
        // sd of the lag-1 autocorrelation is about sqrt((1 − ρ²)/n) ≈ 0.0027.
        assert!((r1 - 0.5).abs() < 0.012, "{r1}");
    }

    #[test]
    fn simulation_is_seed_deterministic() {
        let model = VarModel::new(vec![Mat::from_element(1, 1, -0.3)], Mat::identity(1, 1)).unwrap();
        let a = var_simulate(&model, 50, 5, &mut ChaCha8Rng::seed_from_u64(1));
        let b = var_simulate(&model, 50, 5, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
    }

    #[test]
    fn long_simulation_fit_recovers_var1() {
        let phi = Mat::from_row_slice(2, 2, &[-0.6, 0.2, 0.1, -0.4]);
        let model = VarModel::new(vec![phi.clone()], Mat::identity(2, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = var_simulate(&model, 50_000, 100, &mut rng);
        let st = whittle_recursion(&sample_autocov(&x, 2).unwrap(), 2).unwrap();
        assert!((&st[1].forward[0] - phi).amax() < 0.03);
        assert!(st[2].forward[1].amax() < 0.03);
    }
}
