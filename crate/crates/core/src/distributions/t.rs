use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{FisherMatrix, Sample};
use crate::error::{Error, Result};
use crate::numerics::{adaptive_quadrature_vec, digamma_unchecked, ln_gamma_unchecked, Domain};

/// Default absolute tolerance for the Fisher-information integrals.
pub const FISHER_QUAD_TOL: f64 = 1e-10;

/// Location-scale t parameters `(μ, σ, ν)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TParams {
    mu: f64,
    sigma: f64,
    nu: f64,
}

/// Orthogonal parameterization `(μ, λ, ν)` with `λ = σ(ν+1)/ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TParamsOrtho {
    mu: f64,
    lambda: f64,
    nu: f64,
}

fn check(mu: f64, scale: f64, nu: f64, scale_name: &str) -> Result<()> {
    if !mu.is_finite() {
        return Err(Error::Domain(format!("location must be finite, got {mu}")));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Domain(format!("{scale_name} must be positive and finite, got {scale}")));
    }
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::Domain(format!("degrees of freedom must be positive and finite, got {nu}")));
    }
    Ok(())
}

impl TParams {
    pub fn new(mu: f64, sigma: f64, nu: f64) -> Result<Self> {
        check(mu, sigma, nu, "scale")?;
        Ok(Self { mu, sigma, nu })
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn to_ortho(&self) -> TParamsOrtho {
        to_ortho(self)
    }
}

impl TParamsOrtho {
    pub fn new(mu: f64, lambda: f64, nu: f64) -> Result<Self> {
        check(mu, lambda, nu, "orthogonal scale")?;
        Ok(Self { mu, lambda, nu })
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn to_original(&self) -> TParams {
        from_ortho(self)
    }
}

/// `λ = σ(ν+1)/ν`.
pub fn to_ortho(p: &TParams) -> TParamsOrtho {
    TParamsOrtho { mu: p.mu, lambda: p.sigma * (p.nu + 1.0) / p.nu, nu: p.nu }
}

/// `σ = λν/(ν+1)`.
pub fn from_ortho(p: &TParamsOrtho) -> TParams {
    TParams { mu: p.mu, sigma: p.lambda * p.nu / (p.nu + 1.0), nu: p.nu }
}

#[inline]
fn log_norm_const(nu: f64) -> f64 {
    ln_gamma_unchecked(0.5 * (nu + 1.0)) - ln_gamma_unchecked(0.5 * nu) - 0.5 * (nu * PI).ln()
}

/// Log density of the location-scale t.
pub fn t_logpdf(x: f64, p: &TParams) -> f64 {
    let z = (x - p.mu) / p.sigma;
    log_norm_const(p.nu) - p.sigma.ln() - 0.5 * (p.nu + 1.0) * (z * z / p.nu).ln_1p()
}

/// Log-likelihood in `(μ, σ, ν)`.
pub fn t_loglik(sample: &Sample, p: &TParams) -> f64 {
    let n = sample.n() as f64;
    let inv_var = 1.0 / (p.nu * p.sigma * p.sigma);
    let tail: f64 = sample
        .values()
        .iter()
        .map(|x| {
            let d = x - p.mu;
            (d * d * inv_var).ln_1p()
        })
        .sum();
    n * (log_norm_const(p.nu) - p.sigma.ln()) - 0.5 * (p.nu + 1.0) * tail
}

/// Log-likelihood in `(μ, λ, ν)`, term by term as
///
/// `n lnΓ((ν+1)/2) − n lnΓ(ν/2) − (3n/2) ln ν − n ln λ + n ln(ν+1)
///  − (ν+1)/2 Σ ln{1 + (ν+1)²(xᵢ−μ)²/(ν³λ²)} − (n/2) ln π`.
pub fn t_loglik_ortho(sample: &Sample, p: &TParamsOrtho) -> f64 {
    let n = sample.n() as f64;
    let (nu, lambda) = (p.nu, p.lambda);
    let k = (nu + 1.0) * (nu + 1.0) / (nu * nu * nu * lambda * lambda);
    let tail: f64 = sample
        .values()
        .iter()
        .map(|x| {
            let d = x - p.mu;
            (k * d * d).ln_1p()
        })
        .sum();
    n * ln_gamma_unchecked(0.5 * (nu + 1.0)) - n * ln_gamma_unchecked(0.5 * nu) - 1.5 * n * nu.ln() - n * lambda.ln()
        + n * (nu + 1.0).ln()
        - 0.5 * (nu + 1.0) * tail
        - 0.5 * n * PI.ln()
}

/// Analytic gradient of [`t_loglik`] with respect to `(μ, σ, ν)`.
pub fn t_loglik_grad(sample: &Sample, p: &TParams) -> [f64; 3] {
    let (mu, sigma, nu) = (p.mu, p.sigma, p.nu);
    let n = sample.n() as f64;
    let c = 0.5 * digamma_unchecked(0.5 * (nu + 1.0)) - 0.5 * digamma_unchecked(0.5 * nu) - 0.5 / nu;
    let (mut gm, mut gs, mut gn) = (0.0, 0.0, 0.0);
    for x in sample.values() {
        let z = (x - mu) / sigma;
        let z2 = z * z;
        let denom = nu + z2;
        gm += z / denom;
        let w = z2 / denom;
        gs += w;
        gn += (nu + 1.0) * w / nu - (z2 / nu).ln_1p();
    }
    [
        (nu + 1.0) * gm / sigma,
        ((nu + 1.0) * gs - n) / sigma,
        n * c + 0.5 * gn,
    ]
}

/// Analytic gradient of [`t_loglik_ortho`] with respect to `(μ, λ, ν)`.
///
/// Differentiates the printed form directly; `q = (ν+1)²(x−μ)²/(ν³λ²)` has
/// `∂q/∂ν = q (2/(ν+1) − 3/ν)`.
pub fn t_loglik_grad_ortho(sample: &Sample, p: &TParamsOrtho) -> [f64; 3] {
    let (mu, lambda, nu) = (p.mu, p.lambda, p.nu);
    let n = sample.n() as f64;
    let k = (nu + 1.0) * (nu + 1.0) / (nu * nu * nu * lambda * lambda);
    let (mut s_mu, mut s_ratio, mut s_log) = (0.0, 0.0, 0.0);
    for x in sample.values() {
        let d = x - mu;
        let q = k * d * d;
        s_mu += k * d / (1.0 + q);
        s_ratio += q / (1.0 + q);
        s_log += q.ln_1p();
    }
    let dq = 2.0 / (nu + 1.0) - 3.0 / nu;
    [
        (nu + 1.0) * s_mu,
        -n / lambda + (nu + 1.0) * s_ratio / lambda,
        0.5 * n * digamma_unchecked(0.5 * (nu + 1.0)) - 0.5 * n * digamma_unchecked(0.5 * nu) - 1.5 * n / nu
            + n / (nu + 1.0)
            - 0.5 * s_log
            - 0.5 * (nu + 1.0) * dq * s_ratio,
    ]
}

/// Standardized (σ = 1) score-product integrals
/// `[μμ, μσ, μν, σσ, σν, νν]` or, with `ortho`, the same for `(μ, λ, ν)`
/// scaled so that the σ-slot holds the λ-score times σ.
fn standardized_fisher(nu: f64, ortho: bool, tol: f64) -> Result<[f64; 6]> {
    let log_c = log_norm_const(nu);
    let c_nu = 0.5 * digamma_unchecked(0.5 * (nu + 1.0)) - 0.5 * digamma_unchecked(0.5 * nu) - 0.5 / nu;
    let lam_factor = nu / (nu + 1.0);
    let v = adaptive_quadrature_vec(
        |z, out: &mut [f64]| {
            let z2 = z * z;
            let l1p = (z2 / nu).ln_1p();
            let g = (log_c - 0.5 * (nu + 1.0) * l1p).exp();
            let w = z2 / (nu + z2);
            let s_mu = (nu + 1.0) * z / (nu + z2);
            let s_sigma = (nu + 1.0) * w - 1.0;
            let mut s_nu = c_nu + 0.5 * ((nu + 1.0) * w / nu - l1p);
            let s_mid = if ortho {
                s_nu += s_sigma / (nu * (nu + 1.0));
                s_sigma * lam_factor
            } else {
                s_sigma
            };
            out[0] = s_mu * s_mu * g;
            out[1] = s_mu * s_mid * g;
            out[2] = s_mu * s_nu * g;
            out[3] = s_mid * s_mid * g;
            out[4] = s_mid * s_nu * g;
            out[5] = s_nu * s_nu * g;
        },
        6,
        Domain::Real,
        tol,
    )?;
    Ok([v[0], v[1], v[2], v[3], v[4], v[5]])
}

fn assemble(labels: [&str; 3], s: [f64; 6], scale: f64) -> Result<FisherMatrix> {
    let inv = 1.0 / scale;
    let inv2 = inv * inv;
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            s[0] * inv2,
            s[1] * inv2,
            s[2] * inv,
            s[1] * inv2,
            s[3] * inv2,
            s[4] * inv,
            s[2] * inv,
            s[4] * inv,
            s[5],
        ],
    );
    FisherMatrix::new(labels.to_vec(), m)
}

/// Per-observation Fisher information in `(μ, σ, ν)` by quadrature of the
/// score outer products.
pub fn t_fisher_info(p: &TParams) -> Result<FisherMatrix> {
    t_fisher_info_with_tol(p, FISHER_QUAD_TOL)
}

pub fn t_fisher_info_with_tol(p: &TParams, tol: f64) -> Result<FisherMatrix> {
    let s = standardized_fisher(p.nu, false, tol)?;
    assemble(["mu", "sigma", "nu"], s, p.sigma)
}

/// Per-observation Fisher information in `(μ, λ, ν)` by quadrature of the
/// score outer products of the orthogonal parameterization.
pub fn t_fisher_info_ortho(p: &TParamsOrtho) -> Result<FisherMatrix> {
    t_fisher_info_ortho_with_tol(p, FISHER_QUAD_TOL)
}

pub fn t_fisher_info_ortho_with_tol(p: &TParamsOrtho, tol: f64) -> Result<FisherMatrix> {
    let s = standardized_fisher(p.nu, true, tol)?;
    // Scores carry 1/σ for μ and λ; the λ-slot already includes ν/(ν+1).
    assemble(["mu", "lambda", "nu"], s, from_ortho(p).sigma)
}

/// `(f₁, f₂, f₃)` for the standard t with `ν` degrees of freedom, where at
/// unit scale `I_σν = −f₁`, `I_σσ = f₂` and `I_νν = f₃`.
pub fn t_shape_integrals(nu: f64, tol: f64) -> Result<(f64, f64, f64)> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::Domain(format!("degrees of freedom must be positive and finite, got {nu}")));
    }
    let s = standardized_fisher(nu, false, tol)?;
    Ok((-s[4], s[3], s[5]))
}

/// `n` i.i.d. draws `μ + σ Z / √(V/ν)` with `Z ~ N(0,1)`, `V ~ χ²_ν`.
pub fn t_sample<R: Rng + ?Sized>(rng: &mut R, p: &TParams, n: usize) -> Result<Sample> {
    if n == 0 {
        return Err(Error::InvalidInput("sample size must be at least one".into()));
    }
    let chi = ChiSquared::new(p.nu).map_err(|e| Error::Domain(e.to_string()))?;
    let values = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            let v = chi.sample(rng);
            p.mu + p.sigma * z / (v / p.nu).sqrt()
        })
        .collect();
    Sample::new(values)
}
