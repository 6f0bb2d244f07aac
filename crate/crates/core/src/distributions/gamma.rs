use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{FisherMatrix, FISHER_QUAD_TOL};
use crate::error::{Error, Result};
use crate::numerics::{adaptive_quadrature_vec, digamma_unchecked, ln_gamma_unchecked, Domain};

fn positive(v: f64, name: &str) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Generalized Gamma with density `p x^{d−1} e^{−(x/a)^p} / (a^d Γ(d/p))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenGammaParams {
    a: f64,
    d: f64,
    p: f64,
}

impl GenGammaParams {
    pub fn new(a: f64, d: f64, p: f64) -> Result<Self> {
        positive(a, "scale a")?;
        positive(d, "shape d")?;
        positive(p, "shape p")?;
        Ok(Self { a, d, p })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn logpdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let z = x / self.a;
        self.p.ln() - self.a.ln() - ln_gamma_unchecked(self.d / self.p) + (self.d - 1.0) * z.ln() - z.powf(self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoSampleKind {
    /// `X_k ~ Gamma(α_k, scale θ)`.
    GammaScale,
    /// `X_k ~ InvGamma(α_k, scale β)`, i.e. `β/X_k ~ Gamma(α_k, 1)`.
    InverseGammaScale,
}

/// Two independent samples sharing a scale with separate shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleGammaParams {
    alpha1: f64,
    alpha2: f64,
    theta_or_beta: f64,
    kind: TwoSampleKind,
}

impl TwoSampleGammaParams {
    pub fn new(alpha1: f64, alpha2: f64, theta_or_beta: f64, kind: TwoSampleKind) -> Result<Self> {
        positive(alpha1, "alpha1")?;
        positive(alpha2, "alpha2")?;
        positive(theta_or_beta, "scale")?;
        Ok(Self { alpha1, alpha2, theta_or_beta, kind })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn theta_or_beta(&self) -> f64 {
        self.theta_or_beta
    }

    pub fn kind(&self) -> TwoSampleKind {
        self.kind
    }

    /// Log density of one observation from sample `k` (1 or 2).
    pub fn logpdf(&self, k: usize, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let alpha = if k == 1 { self.alpha1 } else { self.alpha2 };
        let s = self.theta_or_beta;
        match self.kind {
            TwoSampleKind::GammaScale => {
                -ln_gamma_unchecked(alpha) - alpha * s.ln() + (alpha - 1.0) * x.ln() - x / s
            }
            TwoSampleKind::InverseGammaScale => {
                alpha * s.ln() - ln_gamma_unchecked(alpha) - (alpha + 1.0) * x.ln() - s / x
            }
        }
    }

    fn scale_label(&self) -> &'static str {
        match self.kind {
            TwoSampleKind::GammaScale => "theta",
            TwoSampleKind::InverseGammaScale => "beta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GammaFamily {
    Generalized(GenGammaParams),
    TwoSample(TwoSampleGammaParams),
}

impl From<GenGammaParams> for GammaFamily {
    fn from(p: GenGammaParams) -> Self {
        GammaFamily::Generalized(p)
    }
}

impl From<TwoSampleGammaParams> for GammaFamily {
    fn from(p: TwoSampleGammaParams) -> Self {
        GammaFamily::TwoSample(p)
    }
}

/// Per-observation Fisher information by quadrature of score products.
///
/// For the two-sample families the matrix is the sum of one observation from
/// each sample, labelled `(alpha1, alpha2, theta|beta)`.
pub fn gamma_family_fisher(params: impl Into<GammaFamily>) -> Result<FisherMatrix> {
    match params.into() {
        GammaFamily::Generalized(g) => gen_gamma_fisher(&g),
        GammaFamily::TwoSample(t) => two_sample_fisher(&t),
    }
}

fn gen_gamma_fisher(g: &GenGammaParams) -> Result<FisherMatrix> {
    let (d, p) = (g.d, g.p);
    let k = d / p;
    let log_c = p.ln() - ln_gamma_unchecked(k);
    let psi = digamma_unchecked(k);
    // Integrate over u = ln(x/a); the density in u is p e^{du − e^{pu}} / Γ(d/p).
    let v = adaptive_quadrature_vec(
        |u, out: &mut [f64]| {
            let zp = (p * u).exp();
            let dens = (log_c + d * u - zp).exp();
            if dens == 0.0 {
                out.fill(0.0);
                return;
            }
            let s_a = p * zp - d;
            let s_d = u - psi / p;
            let s_p = 1.0 / p + d * psi / (p * p) - zp * u;
            out[0] = s_a * s_a * dens;
            out[1] = s_a * s_d * dens;
            out[2] = s_a * s_p * dens;
            out[3] = s_d * s_d * dens;
            out[4] = s_d * s_p * dens;
            out[5] = s_p * s_p * dens;
        },
        6,
        Domain::Real,
        FISHER_QUAD_TOL * 0.1,
    )?;
    let ia = 1.0 / g.a;
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            v[0] * ia * ia,
            v[1] * ia,
            v[2] * ia,
            v[1] * ia,
            v[3],
            v[4],
            v[2] * ia,
            v[4],
            v[5],
        ],
    );
    FisherMatrix::new(vec!["a", "d", "p"], m)
}

/// `[E s_α², E s_α s̃, E s̃²]` for one standardized component, where `s̃` is
/// the scale score times the scale.
fn gamma_component(alpha: f64, kind: TwoSampleKind) -> Result<[f64; 3]> {
    let log_c = -ln_gamma_unchecked(alpha);
    let psi = digamma_unchecked(alpha);
    let sign = match kind {
        TwoSampleKind::GammaScale => 1.0,
        TwoSampleKind::InverseGammaScale => -1.0,
    };
    // u = ln y with y ~ Gamma(α, 1): density e^{αu − e^u} / Γ(α).
    let v = adaptive_quadrature_vec(
        |u, out: &mut [f64]| {
            let y = u.exp();
            let dens = (log_c + alpha * u - y).exp();
            if dens == 0.0 {
                out.fill(0.0);
                return;
            }
            let s_alpha = u - psi;
            let s_scale = sign * (y - alpha);
            out[0] = s_alpha * s_alpha * dens;
            out[1] = s_alpha * s_scale * dens;
            out[2] = s_scale * s_scale * dens;
        },
        3,
        Domain::Real,
        FISHER_QUAD_TOL * 0.1,
    )?;
    Ok([v[0], v[1], v[2]])
}

fn two_sample_fisher(t: &TwoSampleGammaParams) -> Result<FisherMatrix> {
    let c1 = gamma_component(t.alpha1, t.kind)?;
    let c2 = gamma_component(t.alpha2, t.kind)?;
    let is = 1.0 / t.theta_or_beta;
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            c1[0],
            0.0,
            c1[1] * is,
            0.0,
            c2[0],
            c2[1] * is,
            c1[1] * is,
            c2[1] * is,
            (c1[2] + c2[2]) * is * is,
        ],
    );
    FisherMatrix::new(vec!["alpha1", "alpha2", t.scale_label()], m)
}
